use std::f64::consts::PI;

use rand::Rng;

use crate::error::Result;
use crate::optim::{Element, Evaluator, Optimizer, Population, Progress, RunRng, SearchSpace};

#[derive(Clone, Debug, PartialEq)]
pub struct ScaConfig {
    pub c1_start: f64,
    pub c1_end: f64,
    pub c2_max: f64,
    pub c3_max: f64,
}

impl Default for ScaConfig {
    fn default() -> Self {
        Self {
            c1_start: 1.0,
            c1_end: 0.0,
            c2_max: 2.0 * PI,
            c3_max: 2.0,
        }
    }
}

impl ScaConfig {
    pub fn c1(&self, progress: Progress) -> f64 {
        progress.linear(self.c1_start, self.c1_end)
    }
}

/// Sine (or cosine) move of one coordinate toward the destination.
pub fn sca_move(x: f64, dest: f64, c1: f64, c2: f64, c3: f64, sine: bool) -> f64 {
    let osc = if sine { c2.sin() } else { c2.cos() };
    x + c1 * osc * (c3 * dest - x).abs()
}

/// Sine cosine algorithm. The destination is the best position found so far.
#[derive(Clone, Debug, Default)]
pub struct Sca {
    pub config: ScaConfig,
    destination: Option<Element>,
}

impl Sca {
    pub fn new(config: ScaConfig) -> Self {
        Self {
            config,
            destination: None,
        }
    }
}

impl Optimizer for Sca {
    fn name(&self) -> &'static str {
        "SCA"
    }

    fn evals_per_iteration(&self, pop_size: usize) -> usize {
        pop_size
    }

    fn start(&mut self, pop: &Population, _space: &SearchSpace, _rng: &mut RunRng) -> Result<()> {
        self.destination = Some(pop.best().clone());
        Ok(())
    }

    fn step(
        &mut self,
        pop: &mut Population,
        space: &SearchSpace,
        progress: Progress,
        rng: &mut RunRng,
        eval: &mut Evaluator<'_>,
    ) -> Result<()> {
        if self.destination.is_none() {
            self.start(pop, space, rng)?;
        }
        let c1 = self.config.c1(progress);
        let dest = self.destination.clone().expect("initialised in start");
        for e in pop.elements.iter_mut() {
            let c2 = rng.random::<f64>() * self.config.c2_max;
            let c3 = rng.random::<f64>() * self.config.c3_max;
            let sine = rng.random::<f64>() < 0.5;
            let next: Vec<f64> = e
                .position
                .iter()
                .zip(&dest.position)
                .map(|(x, p)| sca_move(*x, *p, c1, c2, c3, sine))
                .collect();
            *e = eval.element(space.clamp(next));
        }
        pop.refresh_best();
        let best = pop.best();
        let dest = self.destination.as_mut().expect("initialised in start");
        if best.fitness < dest.fitness {
            *dest = best.clone();
        }
        Ok(())
    }

    fn best<'a>(&'a self, pop: &'a Population) -> &'a Element {
        self.destination.as_ref().unwrap_or_else(|| pop.best())
    }
}

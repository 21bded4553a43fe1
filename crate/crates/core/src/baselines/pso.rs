use rand::Rng;

use crate::error::Result;
use crate::optim::{Element, Evaluator, Optimizer, Population, Progress, RunRng, SearchSpace};

#[derive(Clone, Debug, PartialEq)]
pub struct PsoConfig {
    pub w_min: f64,
    pub w_max: f64,
    pub c1: f64,
    pub c2: f64,
}

impl Default for PsoConfig {
    fn default() -> Self {
        Self {
            w_min: 0.1,
            w_max: 0.4,
            c1: 2.0,
            c2: 2.0,
        }
    }
}

impl PsoConfig {
    /// Inertia decreasing linearly from `w_max` to `w_min`.
    pub fn inertia(&self, progress: Progress) -> f64 {
        progress.linear(self.w_max, self.w_min)
    }
}

/// Velocity update for one coordinate.
#[allow(clippy::too_many_arguments)]
pub fn velocity(
    v: f64,
    x: f64,
    pbest: f64,
    gbest: f64,
    w: f64,
    cfg: &PsoConfig,
    r1: f64,
    r2: f64,
) -> f64 {
    w * v + cfg.c1 * r1 * (pbest - x) + cfg.c2 * r2 * (gbest - x)
}

/// Particle swarm with linearly decreasing inertia. The population holds the
/// current particle positions; personal and global bests live here.
#[derive(Clone, Debug, Default)]
pub struct Pso {
    pub config: PsoConfig,
    velocities: Vec<Vec<f64>>,
    personal: Vec<Element>,
    global: Option<Element>,
}

impl Pso {
    pub fn new(config: PsoConfig) -> Self {
        Self {
            config,
            ..Default::default()
        }
    }
}

impl Optimizer for Pso {
    fn name(&self) -> &'static str {
        "PSO"
    }

    fn evals_per_iteration(&self, pop_size: usize) -> usize {
        pop_size
    }

    fn start(&mut self, pop: &Population, space: &SearchSpace, _rng: &mut RunRng) -> Result<()> {
        self.velocities = vec![vec![0.0; space.dim()]; pop.len()];
        self.personal = pop.elements.clone();
        self.global = Some(pop.best().clone());
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
        if self.global.is_none() {
            self.start(pop, space, rng)?;
        }
        let w = self.config.inertia(progress);
        let gbest = self.global.clone().expect("initialised in start");
        for (i, particle) in pop.elements.iter_mut().enumerate() {
            let v = &mut self.velocities[i];
            let pbest = &self.personal[i].position;
            for d in 0..space.dim() {
                let (r1, r2): (f64, f64) = (rng.random(), rng.random());
                v[d] = velocity(
                    v[d],
                    particle.position[d],
                    pbest[d],
                    gbest.position[d],
                    w,
                    &self.config,
                    r1,
                    r2,
                );
                particle.position[d] += v[d];
            }
            space.clamp_in_place(&mut particle.position);
            particle.fitness = eval
                .evaluate_or_reject(&particle.position)
                .unwrap_or(f64::INFINITY);
            if particle.fitness < self.personal[i].fitness {
                self.personal[i] = particle.clone();
            }
        }
        pop.refresh_best();
        let global = self.global.as_mut().expect("initialised in start");
        for p in &self.personal {
            if p.fitness < global.fitness {
                *global = p.clone();
            }
        }
        Ok(())
    }

    fn best<'a>(&'a self, pop: &'a Population) -> &'a Element {
        self.global.as_ref().unwrap_or_else(|| pop.best())
    }
}

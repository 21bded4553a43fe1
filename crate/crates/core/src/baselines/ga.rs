use rand::Rng;

use crate::error::{Error, Result};
use crate::optim::{Evaluator, Optimizer, Population, Progress, RunRng, SearchSpace};

#[derive(Clone, Debug, PartialEq)]
pub struct GaConfig {
    pub crossover_prob: f64,
    /// Per-gene probability of a uniform reset inside the bounds.
    pub mutation_prob: f64,
    pub tournament_size: usize,
}

impl Default for GaConfig {
    fn default() -> Self {
        Self {
            crossover_prob: 0.25,
            mutation_prob: 0.2,
            tournament_size: 2,
        }
    }
}

impl GaConfig {
    pub fn validate(&self) -> Result<()> {
        for (name, p) in [
            ("crossover", self.crossover_prob),
            ("mutation", self.mutation_prob),
        ] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::invalid(format!(
                    "{name} probability {p} outside [0, 1]"
                )));
            }
        }
        if self.tournament_size == 0 {
            return Err(Error::invalid("tournament size must be at least 1"));
        }
        Ok(())
    }
}

/// `mix * p + (1 - mix) * q`, per gene.
pub fn arithmetic_crossover(p: &[f64], q: &[f64], mix: f64) -> Vec<f64> {
    p.iter()
        .zip(q)
        .map(|(a, b)| mix * a + (1.0 - mix) * b)
        .collect()
}

/// Real-coded generational GA with elitism.
///
/// Every non-elite slot breeds: its occupant is the first parent, the mate is
/// chosen by tournament, the child is an arithmetic blend (with probability
/// `crossover_prob`) followed by per-gene uniform mutation, and the child
/// replaces the slot. The incumbent best is carried over untouched, so one
/// generation costs `pop_size - 1` evaluations.
#[derive(Clone, Debug, Default)]
pub struct Ga {
    pub config: GaConfig,
}

impl Ga {
    pub fn new(config: GaConfig) -> Result<Self> {
        config.validate()?;
        Ok(Self { config })
    }

    fn tournament(&self, pop: &Population, rng: &mut RunRng) -> usize {
        let mut winner = rng.random_range(0..pop.len());
        for _ in 1..self.config.tournament_size {
            let c = rng.random_range(0..pop.len());
            if pop.elements[c].fitness < pop.elements[winner].fitness {
                winner = c;
            }
        }
        winner
    }
}

impl Optimizer for Ga {
    fn name(&self) -> &'static str {
        "GA"
    }

    fn evals_per_iteration(&self, pop_size: usize) -> usize {
        pop_size - 1
    }

    fn step(
        &mut self,
        pop: &mut Population,
        space: &SearchSpace,
        _progress: Progress,
        rng: &mut RunRng,
        eval: &mut Evaluator<'_>,
    ) -> Result<()> {
        let elite = pop.best_index();
        let mut children = Vec::with_capacity(pop.len());
        for i in 0..pop.len() {
            if i == elite {
                children.push(None);
                continue;
            }
            let mate = self.tournament(pop, rng);
            let parent = &pop.elements[i].position;
            let mut child = if rng.random::<f64>() < self.config.crossover_prob {
                arithmetic_crossover(parent, &pop.elements[mate].position, rng.random())
            } else {
                parent.clone()
            };
            for (d, gene) in child.iter_mut().enumerate() {
                if rng.random::<f64>() < self.config.mutation_prob {
                    *gene = space.lower()[d] + rng.random::<f64>() * space.width(d);
                }
            }
            children.push(Some(space.clamp(child)));
        }
        for (slot, child) in pop.elements.iter_mut().zip(children) {
            if let Some(child) = child {
                *slot = eval.element(child);
            }
        }
        pop.refresh_best();
        Ok(())
    }
}

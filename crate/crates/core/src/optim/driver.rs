use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{Element, Evaluator, Objective, Population, SearchSpace};
use crate::error::{Error, Result};

/// Random stream shared by every stochastic draw in a run.
pub type RunRng = ChaCha8Rng;

/// Position of the current iteration within the run, `1 ..= total`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Progress {
    pub iter: usize,
    pub total: usize,
}

impl Progress {
    pub fn new(iter: usize, total: usize) -> Self {
        Self { iter, total }
    }

    /// `iter / total`, in `[0, 1]`.
    pub fn fraction(&self) -> f64 {
        if self.total == 0 {
            return 1.0;
        }
        (self.iter as f64 / self.total as f64).clamp(0.0, 1.0)
    }

    /// Linear schedule from `start` at iteration 0 to `end` at `total`.
    pub fn linear(&self, start: f64, end: f64) -> f64 {
        let t = self.fraction();
        start * (1.0 - t) + end * t
    }
}

/// A population-based optimizer driven one iteration at a time by [`run`].
pub trait Optimizer {
    fn name(&self) -> &'static str;

    fn min_population(&self) -> usize {
        2
    }

    /// Objective evaluations performed by one call to [`Optimizer::step`].
    fn evals_per_iteration(&self, pop_size: usize) -> usize;

    /// Called once after the population has been initialised.
    fn start(&mut self, _pop: &Population, _space: &SearchSpace, _rng: &mut RunRng) -> Result<()> {
        Ok(())
    }

    fn step(
        &mut self,
        pop: &mut Population,
        space: &SearchSpace,
        progress: Progress,
        rng: &mut RunRng,
        eval: &mut Evaluator<'_>,
    ) -> Result<()>;

    /// Best element known to the optimizer. Optimizers that keep memory
    /// outside the population (personal bests, leaders) override this.
    fn best<'a>(&'a self, pop: &'a Population) -> &'a Element {
        pop.best()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunTrace {
    /// Best-so-far fitness after each iteration; non-increasing.
    pub best_per_iter: Vec<f64>,
    pub eval_count: usize,
    /// Candidates rejected for non-finite fitness.
    pub warnings: usize,
    pub final_best: Element,
}

impl RunTrace {
    pub fn final_fitness(&self) -> f64 {
        self.final_best.fitness
    }
}

/// Runs `optimizer` for `iters` iterations from a uniform initial population.
pub fn run(
    optimizer: &mut dyn Optimizer,
    space: &SearchSpace,
    pop_size: usize,
    iters: usize,
    seed: u64,
    objective: &dyn Objective,
) -> Result<RunTrace> {
    if iters == 0 {
        return Err(Error::invalid("iteration count must be at least 1"));
    }
    if pop_size < optimizer.min_population() {
        return Err(Error::invalid(format!(
            "{} needs a population of at least {}, got {pop_size}",
            optimizer.name(),
            optimizer.min_population()
        )));
    }
    let mut rng = RunRng::seed_from_u64(seed);
    let mut eval = Evaluator::new(objective);
    let mut pop = Population::init(space, pop_size, &mut rng, &mut eval)?;
    optimizer.start(&pop, space, &mut rng)?;

    let mut best = optimizer.best(&pop).clone();
    let mut best_per_iter = Vec::with_capacity(iters);
    for k in 1..=iters {
        optimizer.step(
            &mut pop,
            space,
            Progress::new(k, iters),
            &mut rng,
            &mut eval,
        )?;
        let current = optimizer.best(&pop);
        if current.fitness < best.fitness {
            best = current.clone();
        }
        best_per_iter.push(best.fitness);
    }
    Ok(RunTrace {
        best_per_iter,
        eval_count: eval.count(),
        warnings: eval.warnings(),
        final_best: best,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    /// Minimal optimizer: one random re-sample per element, greedy accept.
    struct RandomSearch;

    impl Optimizer for RandomSearch {
        fn name(&self) -> &'static str {
            "random"
        }

        fn evals_per_iteration(&self, pop_size: usize) -> usize {
            pop_size
        }

        fn step(
            &mut self,
            pop: &mut Population,
            space: &SearchSpace,
            _progress: Progress,
            rng: &mut RunRng,
            eval: &mut Evaluator<'_>,
        ) -> Result<()> {
            for e in &mut pop.elements {
                let candidate = space.lerp(rng.random());
                eval.greedy_select(e, candidate);
            }
            pop.refresh_best();
            Ok(())
        }
    }

    fn sphere(x: &[f64]) -> f64 {
        x.iter().map(|v| v * v).sum()
    }

    #[test]
    fn progress_schedule_endpoints() {
        assert_eq!(Progress::new(0, 10).linear(0.4, 0.1), 0.4);
        assert_eq!(Progress::new(10, 10).linear(0.4, 0.1), 0.1);
        assert_eq!(Progress::new(10, 10).fraction(), 1.0);
    }

    #[test]
    fn trace_length_and_budget() {
        let space = SearchSpace::uniform(3, -1.0, 1.0).unwrap();
        let t = run(&mut RandomSearch, &space, 5, 7, 1, &sphere).unwrap();
        assert_eq!(t.best_per_iter.len(), 7);
        assert_eq!(t.eval_count, 5 + 7 * 5);
        let t1 = run(&mut RandomSearch, &space, 5, 1, 1, &sphere).unwrap();
        assert_eq!(t1.best_per_iter.len(), 1);
    }

    #[test]
    fn zero_iterations_rejected() {
        let space = SearchSpace::uniform(1, -1.0, 1.0).unwrap();
        assert!(run(&mut RandomSearch, &space, 5, 0, 1, &sphere).is_err());
    }
}

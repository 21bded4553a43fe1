//! Interior search algorithm.
//!
//! Each iteration the global best takes a small Gaussian walk, and every
//! other element either reflects through a mirror placed between itself and
//! the global best (with probability `partition_threshold`) or is recomposed.
//! All candidates are clamped to the box and accepted only on strict
//! improvement.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::optim::{Evaluator, Optimizer, Population, Progress, RunRng, SearchSpace};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IsaConfig {
    /// Probability of the mirror branch for non-best elements.
    pub partition_threshold: f64,
    /// Random walk scale as a fraction of each dimension's width.
    pub walk_scale_fraction: f64,
    /// Re-sample composition elements uniformly in the box, one coefficient
    /// per dimension. With `false` a single coefficient per element is used,
    /// which confines every re-sampled point to the box diagonal.
    pub composition_per_dimension: bool,
    /// One mirror coefficient per dimension instead of one per element.
    pub mirror_per_dimension: bool,
}

impl Default for IsaConfig {
    fn default() -> Self {
        Self {
            partition_threshold: 0.2,
            walk_scale_fraction: 0.01,
            composition_per_dimension: true,
            mirror_per_dimension: false,
        }
    }
}

impl IsaConfig {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.partition_threshold) {
            return Err(Error::invalid(format!(
                "partition threshold {} outside [0, 1]",
                self.partition_threshold
            )));
        }
        if self.walk_scale_fraction.is_nan() || self.walk_scale_fraction <= 0.0 {
            return Err(Error::invalid("walk scale fraction must be positive"));
        }
        Ok(())
    }
}

/// `lower + r2 * (upper - lower)`.
pub fn composition_random(space: &SearchSpace, r2: f64) -> Vec<f64> {
    space.lerp(r2)
}

/// Mirror point `r3 * current + (1 - r3) * gbest`.
pub fn mirror_point(current: &[f64], gbest: &[f64], r3: f64) -> Vec<f64> {
    current
        .iter()
        .zip(gbest)
        .map(|(x, g)| r3 * x + (1.0 - r3) * g)
        .collect()
}

/// Image of `current` reflected through the mirror point, before clamping.
pub fn mirror_update(current: &[f64], gbest: &[f64], r3: f64) -> Vec<f64> {
    mirror_point(current, gbest, r3)
        .iter()
        .zip(current)
        .map(|(m, x)| 2.0 * m - x)
        .collect()
}

/// `gbest + normals * walk_scale_fraction * (upper - lower)`, before clamping.
pub fn walk_candidate(
    gbest: &[f64],
    space: &SearchSpace,
    cfg: &IsaConfig,
    normals: &[f64],
) -> Vec<f64> {
    gbest
        .iter()
        .zip(normals)
        .enumerate()
        .map(|(d, (g, n))| g + n * cfg.walk_scale_fraction * space.width(d))
        .collect()
}

/// Number of times each branch was taken.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct BranchCounts {
    pub walk: usize,
    pub mirror: usize,
    pub composition: usize,
}

impl BranchCounts {
    pub fn add(&mut self, other: BranchCounts) {
        self.walk += other.walk;
        self.mirror += other.mirror;
        self.composition += other.composition;
    }
}

/// One interior-search iteration with a pluggable composition move.
///
/// Candidates are generated for the whole population against the
/// iteration-start global best, then evaluated in index order and greedily
/// accepted. `compose(i, pop, rng)` returns the unclamped composition
/// candidate for element `i`.
pub fn interior_iteration<C>(
    pop: &mut Population,
    space: &SearchSpace,
    cfg: &IsaConfig,
    rng: &mut RunRng,
    eval: &mut Evaluator<'_>,
    mut compose: C,
) -> Result<BranchCounts>
where
    C: FnMut(usize, &Population, &mut RunRng) -> Result<Vec<f64>>,
{
    let best = pop.best_index();
    let gbest = pop.best().position.clone();
    let dim = space.dim();
    let mut counts = BranchCounts::default();

    let mut candidates = Vec::with_capacity(pop.len());
    for i in 0..pop.len() {
        let candidate = if i == best {
            counts.walk += 1;
            let normals: Vec<f64> = (0..dim).map(|_| rng.sample(StandardNormal)).collect();
            walk_candidate(&gbest, space, cfg, &normals)
        } else if rng.random::<f64>() <= cfg.partition_threshold {
            counts.mirror += 1;
            let current = &pop.elements[i].position;
            if cfg.mirror_per_dimension {
                current
                    .iter()
                    .zip(&gbest)
                    .map(|(x, g)| {
                        let r3: f64 = rng.random();
                        2.0 * (r3 * x + (1.0 - r3) * g) - x
                    })
                    .collect()
            } else {
                mirror_update(current, &gbest, rng.random())
            }
        } else {
            counts.composition += 1;
            compose(i, pop, rng)?
        };
        candidates.push(space.clamp(candidate));
    }

    for (element, candidate) in pop.elements.iter_mut().zip(candidates) {
        eval.greedy_select(element, candidate);
    }
    pop.refresh_best();
    Ok(counts)
}

/// Plain interior search with random recomposition.
#[derive(Clone, Debug, Default)]
pub struct Isa {
    pub config: IsaConfig,
    pub branches: BranchCounts,
}

impl Isa {
    pub fn new(config: IsaConfig) -> Result<Self> {
        config.validate()?;
        Ok(Self {
            config,
            branches: BranchCounts::default(),
        })
    }
}

impl Optimizer for Isa {
    fn name(&self) -> &'static str {
        "ISA"
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
        let per_dimension = self.config.composition_per_dimension;
        let counts = interior_iteration(pop, space, &self.config, rng, eval, |_, _, rng| {
            Ok(if per_dimension {
                space
                    .lower()
                    .iter()
                    .zip(space.upper())
                    .map(|(lo, hi)| lo + rng.random::<f64>() * (hi - lo))
                    .collect()
            } else {
                composition_random(space, rng.random())
            })
        })?;
        self.branches.add(counts);
        Ok(())
    }
}

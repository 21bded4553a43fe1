//! Interior search with experience-based composition and chaotic learning.
//!
//! Two changes relative to [`crate::isa`]:
//!
//! * composition moves an element along the direction from the less fit to
//!   the fitter of two random peers instead of re-sampling it;
//! * after the interior phase the global best is blended with `N` chaotic
//!   points in the box, `Z = w * gbest + (1 - w) * (lower + C * width)` with
//!   `w = k / k_max`, and the best blend replaces the global best on strict
//!   improvement.

use rand::Rng;

use crate::chaos::ChaosState;
use crate::error::{Error, Result};
use crate::isa::{interior_iteration, BranchCounts, IsaConfig};
use crate::optim::{Element, Evaluator, Optimizer, Population, Progress, RunRng, SearchSpace};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IsaclConfig {
    pub isa: IsaConfig,
    /// Number of chaotic maps, i.e. rows of the chaos matrix.
    pub n_maps: usize,
    /// Chaotic-learning passes per outer iteration.
    pub cl_inner_iters: usize,
}

impl Default for IsaclConfig {
    fn default() -> Self {
        Self {
            isa: IsaConfig::default(),
            n_maps: 10,
            cl_inner_iters: 1,
        }
    }
}

impl IsaclConfig {
    pub fn validate(&self) -> Result<()> {
        self.isa.validate()?;
        if self.n_maps == 0 {
            return Err(Error::invalid("n_maps must be at least 1"));
        }
        if self.cl_inner_iters == 0 {
            return Err(Error::invalid("cl_inner_iters must be at least 1"));
        }
        Ok(())
    }
}

/// Blend weight `k / k_max` for the chaotic phase.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ClWeight(f64);

impl ClWeight {
    pub fn new(value: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&value) {
            return Err(Error::invalid(format!(
                "chaotic weight {value} outside [0, 1]"
            )));
        }
        Ok(Self(value))
    }

    pub fn from_progress(progress: Progress) -> Self {
        Self(progress.fraction())
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// Experience-based composition move for `current`, before clamping.
pub fn composition_experience(
    current: &Element,
    peer_l: &Element,
    peer_r: &Element,
    r2: f64,
) -> Vec<f64> {
    let (toward, away) = if peer_r.fitness < peer_l.fitness {
        (peer_r, peer_l)
    } else {
        (peer_l, peer_r)
    };
    current
        .position
        .iter()
        .zip(toward.position.iter().zip(&away.position))
        .map(|(x, (t, a))| x + r2 * (t - a))
        .collect()
}

/// Two distinct peer indices, both different from `i`, drawn uniformly.
pub fn pick_peers<R: Rng + ?Sized>(
    i: usize,
    pop_size: usize,
    rng: &mut R,
) -> Result<(usize, usize)> {
    if pop_size < 3 {
        return Err(Error::invalid(format!(
            "experience composition needs a population of at least 3, got {pop_size}"
        )));
    }
    let l = loop {
        let l = rng.random_range(0..pop_size);
        if l != i {
            break l;
        }
    };
    let r = loop {
        let r = rng.random_range(0..pop_size);
        if r != i && r != l {
            break r;
        }
    };
    Ok((l, r))
}

/// Rows of `Z = w * gbest + (1 - w) * (lower + C * width)`, one per chaos row.
pub fn chaotic_candidates(
    gbest: &[f64],
    chaos: &ChaosState,
    space: &SearchSpace,
    weight: ClWeight,
) -> Vec<Vec<f64>> {
    let w = weight.value();
    chaos
        .rows()
        .map(|c| {
            gbest
                .iter()
                .zip(c)
                .enumerate()
                .map(|(d, (g, c))| {
                    let feasible = space.lower()[d] + c * space.width(d);
                    w * g + (1.0 - w) * feasible
                })
                .collect()
        })
        .collect()
}

/// Advances the chaos state, evaluates all `N` blended candidates and lets
/// the best of them replace `gbest` on strict improvement. Exactly `N`
/// evaluations. Returns whether `gbest` changed.
pub fn chaotic_learning_phase(
    gbest: &mut Element,
    chaos: &mut ChaosState,
    space: &SearchSpace,
    weight: ClWeight,
    eval: &mut Evaluator<'_>,
) -> Result<bool> {
    if chaos.dim() != space.dim() || gbest.position.len() != space.dim() {
        return Err(Error::invalid(format!(
            "chaos dimension {} does not match search dimension {}",
            chaos.dim(),
            space.dim()
        )));
    }
    chaos.advance();
    let mut best: Option<(f64, Vec<f64>)> = None;
    for candidate in chaotic_candidates(&gbest.position, chaos, space, weight) {
        let candidate = space.clamp(candidate);
        if let Some(f) = eval.evaluate_or_reject(&candidate) {
            if best.as_ref().is_none_or(|(bf, _)| f < *bf) {
                best = Some((f, candidate));
            }
        }
    }
    match best {
        Some((f, position)) if f < gbest.fitness => {
            gbest.position = position;
            gbest.fitness = f;
            Ok(true)
        }
        _ => Ok(false),
    }
}

#[derive(Clone, Debug)]
pub struct Isacl {
    pub config: IsaclConfig,
    pub branches: BranchCounts,
    /// Outer iterations in which the chaotic phase improved the global best.
    pub chaotic_improvements: usize,
    chaos: Option<ChaosState>,
}

impl Default for Isacl {
    fn default() -> Self {
        Self::new(IsaclConfig::default()).expect("default config is valid")
    }
}

impl Isacl {
    pub fn new(config: IsaclConfig) -> Result<Self> {
        config.validate()?;
        Ok(Self {
            config,
            branches: BranchCounts::default(),
            chaotic_improvements: 0,
            chaos: None,
        })
    }

    pub fn chaos(&self) -> Option<&ChaosState> {
        self.chaos.as_ref()
    }
}

impl Optimizer for Isacl {
    fn name(&self) -> &'static str {
        "ISACL"
    }

    fn min_population(&self) -> usize {
        3
    }

    fn evals_per_iteration(&self, pop_size: usize) -> usize {
        pop_size + self.config.n_maps * self.config.cl_inner_iters
    }

    fn start(&mut self, _pop: &Population, space: &SearchSpace, rng: &mut RunRng) -> Result<()> {
        self.chaos = Some(ChaosState::new(self.config.n_maps, space.dim(), rng)?);
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
        if self.chaos.is_none() {
            self.start(pop, space, rng)?;
        }
        let counts = interior_iteration(pop, space, &self.config.isa, rng, eval, |i, pop, rng| {
            let (l, r) = pick_peers(i, pop.len(), rng)?;
            let r2: f64 = rng.random();
            Ok(composition_experience(
                &pop.elements[i],
                &pop.elements[l],
                &pop.elements[r],
                r2,
            ))
        })?;
        self.branches.add(counts);

        let chaos = self.chaos.as_mut().expect("chaos initialised above");
        let weight = ClWeight::from_progress(progress);
        let mut improved = false;
        for _ in 0..self.config.cl_inner_iters {
            improved |= chaotic_learning_phase(pop.best_mut(), chaos, space, weight, eval)?;
        }
        if improved {
            self.chaotic_improvements += 1;
        }
        Ok(())
    }
}

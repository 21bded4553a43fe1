use rand::Rng;

use super::SearchSpace;
use crate::error::{Error, Result};

/// A function to minimize. Must be a pure function of its input.
pub trait Objective: Sync {
    fn evaluate(&self, x: &[f64]) -> f64;
}

impl<F> Objective for F
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    fn evaluate(&self, x: &[f64]) -> f64 {
        self(x)
    }
}

/// A candidate solution and its cached fitness.
#[derive(Clone, Debug, PartialEq)]
pub struct Element {
    pub position: Vec<f64>,
    pub fitness: f64,
}

impl Element {
    pub fn new(position: Vec<f64>, fitness: f64) -> Self {
        Self { position, fitness }
    }
}

/// Counts objective calls and non-finite rejections for one run.
pub struct Evaluator<'a> {
    objective: &'a dyn Objective,
    count: usize,
    warnings: usize,
}

impl<'a> Evaluator<'a> {
    pub fn new(objective: &'a dyn Objective) -> Self {
        Self {
            objective,
            count: 0,
            warnings: 0,
        }
    }

    pub fn count(&self) -> usize {
        self.count
    }

    /// Number of candidates rejected because their fitness was not finite.
    pub fn warnings(&self) -> usize {
        self.warnings
    }

    /// Raw evaluation; the value may be non-finite.
    pub fn evaluate(&mut self, x: &[f64]) -> f64 {
        self.count += 1;
        self.objective.evaluate(x)
    }

    /// Evaluation that fails on a non-finite value.
    pub fn evaluate_finite(&mut self, x: &[f64]) -> Result<f64> {
        let value = self.evaluate(x);
        if value.is_finite() {
            Ok(value)
        } else {
            Err(Error::Evaluation {
                value,
                position: x.to_vec(),
            })
        }
    }

    /// Evaluates a candidate and returns its fitness if finite; a non-finite
    /// value is counted as a warning and yields `None`.
    pub fn evaluate_or_reject(&mut self, x: &[f64]) -> Option<f64> {
        let value = self.evaluate(x);
        if value.is_finite() {
            Some(value)
        } else {
            self.warnings += 1;
            None
        }
    }

    /// Greedy replacement: `old` takes the candidate only on strict
    /// improvement. Exactly one objective evaluation. Returns whether the
    /// candidate was accepted.
    pub fn greedy_select(&mut self, old: &mut Element, candidate: Vec<f64>) -> bool {
        match self.evaluate_or_reject(&candidate) {
            Some(f) if f < old.fitness => {
                old.position = candidate;
                old.fitness = f;
                true
            }
            _ => false,
        }
    }

    /// Evaluates a position into a new element, keeping non-finite fitness
    /// as `+inf` so it never wins a comparison.
    pub fn element(&mut self, position: Vec<f64>) -> Element {
        let fitness = self.evaluate_or_reject(&position).unwrap_or(f64::INFINITY);
        Element { position, fitness }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Population {
    pub elements: Vec<Element>,
    best: usize,
}

impl Population {
    /// Uniform initialisation inside the box; `pop_size` evaluations.
    pub fn init<R: Rng + ?Sized>(
        space: &SearchSpace,
        pop_size: usize,
        rng: &mut R,
        eval: &mut Evaluator<'_>,
    ) -> Result<Self> {
        if pop_size < 2 {
            return Err(Error::invalid(format!(
                "population size must be at least 2, got {pop_size}"
            )));
        }
        let mut elements = Vec::with_capacity(pop_size);
        for _ in 0..pop_size {
            let position: Vec<f64> = space
                .lower()
                .iter()
                .zip(space.upper())
                .map(|(lo, hi)| lo + rng.random::<f64>() * (hi - lo))
                .collect();
            let fitness = eval.evaluate_finite(&position)?;
            elements.push(Element { position, fitness });
        }
        Ok(Self::from_elements(elements))
    }

    pub fn from_elements(elements: Vec<Element>) -> Self {
        assert!(!elements.is_empty(), "population cannot be empty");
        let mut pop = Self { elements, best: 0 };
        pop.refresh_best();
        pop
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn best_index(&self) -> usize {
        self.best
    }

    pub fn best(&self) -> &Element {
        &self.elements[self.best]
    }

    pub fn best_mut(&mut self) -> &mut Element {
        &mut self.elements[self.best]
    }

    /// Recomputes the argmin; ties resolve to the lowest index.
    pub fn refresh_best(&mut self) {
        self.best = argmin(self.elements.iter().map(|e| e.fitness));
    }

    /// Indices sorted by fitness, ascending, stable.
    pub fn ranking(&self) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.len()).collect();
        idx.sort_by(|&a, &b| {
            self.elements[a]
                .fitness
                .total_cmp(&self.elements[b].fitness)
        });
        idx
    }
}

/// Index of the smallest value, lowest index on ties.
pub fn argmin(values: impl IntoIterator<Item = f64>) -> usize {
    let mut best = 0;
    let mut best_value = f64::INFINITY;
    for (i, v) in values.into_iter().enumerate() {
        if i == 0 || v < best_value {
            best = i;
            best_value = v;
        }
    }
    best
}

use rand::Rng;

use crate::error::Result;
use crate::optim::{Element, Evaluator, Optimizer, Population, Progress, RunRng, SearchSpace};

#[derive(Clone, Debug, PartialEq)]
pub struct GwoConfig {
    pub a_start: f64,
    pub a_end: f64,
}

impl Default for GwoConfig {
    fn default() -> Self {
        Self {
            a_start: 2.0,
            a_end: 0.0,
        }
    }
}

impl GwoConfig {
    pub fn a(&self, progress: Progress) -> f64 {
        progress.linear(self.a_start, self.a_end)
    }
}

/// Pull of one leader on one coordinate: `x_p - A * |C * x_p - x|` with
/// `A = 2 a r2 - a` and `C = 2 r1`.
pub fn leader_pull(x: f64, leader: f64, a: f64, r1: f64, r2: f64) -> f64 {
    let big_a = 2.0 * a * r2 - a;
    let big_c = 2.0 * r1;
    leader - big_a * (big_c * leader - x).abs()
}

/// Grey wolf optimizer. Alpha, beta and delta are the three best positions
/// found so far; each wolf moves to the mean of the three leader pulls.
#[derive(Clone, Debug, Default)]
pub struct Gwo {
    pub config: GwoConfig,
    leaders: Vec<Element>,
}

impl Gwo {
    pub fn new(config: GwoConfig) -> Self {
        Self {
            config,
            leaders: Vec::new(),
        }
    }

    pub fn leaders(&self) -> &[Element] {
        &self.leaders
    }

    fn offer(&mut self, wolf: &Element) {
        if let Some(pos) = self.leaders.iter().position(|l| wolf.fitness < l.fitness) {
            self.leaders.insert(pos, wolf.clone());
            self.leaders.truncate(3);
        }
    }
}

impl Optimizer for Gwo {
    fn name(&self) -> &'static str {
        "GWO"
    }

    fn min_population(&self) -> usize {
        3
    }

    fn evals_per_iteration(&self, pop_size: usize) -> usize {
        pop_size
    }

    fn start(&mut self, pop: &Population, _space: &SearchSpace, _rng: &mut RunRng) -> Result<()> {
        self.leaders = pop
            .ranking()
            .into_iter()
            .take(3)
            .map(|i| pop.elements[i].clone())
            .collect();
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
        if self.leaders.len() < 3 {
            self.start(pop, space, rng)?;
        }
        let a = self.config.a(progress);
        for wolf in pop.elements.iter_mut() {
            let mut next = vec![0.0; space.dim()];
            for (d, slot) in next.iter_mut().enumerate() {
                let x = wolf.position[d];
                let mut sum = 0.0;
                for leader in &self.leaders {
                    let (r1, r2): (f64, f64) = (rng.random(), rng.random());
                    sum += leader_pull(x, leader.position[d], a, r1, r2);
                }
                *slot = sum / self.leaders.len() as f64;
            }
            *wolf = eval.element(space.clamp(next));
        }
        pop.refresh_best();
        for wolf in &pop.elements {
            self.offer(wolf);
        }
        Ok(())
    }

    fn best<'a>(&'a self, pop: &'a Population) -> &'a Element {
        self.leaders.first().unwrap_or_else(|| pop.best())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::optim::functions::sphere;
    use rand::SeedableRng;

    #[test]
    fn schedule_endpoints() {
        let cfg = GwoConfig::default();
        assert_eq!(cfg.a(Progress::new(0, 10)), 2.0);
        assert_eq!(cfg.a(Progress::new(10, 10)), 0.0);
    }

    #[test]
    fn pull_arithmetic() {
        // a = 2, r2 = 0.5 -> A = 0, r1 = 0.5 -> C = 1
        assert_eq!(leader_pull(0.0, 2.0, 2.0, 0.5, 0.5), 2.0);
        // a = 0 -> A = 0 regardless of the draws
        assert_eq!(leader_pull(-7.0, 3.0, 0.0, 0.9, 0.1), 3.0);
        // consensus: x on the leader with C = 1 -> D = 0
        assert_eq!(leader_pull(1.5, 1.5, 1.3, 0.5, 0.8), 1.5);
    }

    #[test]
    fn final_iteration_moves_to_leader_mean() {
        let space = SearchSpace::uniform(1, -10.0, 10.0).unwrap();
        let pop_elems = vec![
            Element::new(vec![1.0], 1.0),
            Element::new(vec![2.0], 4.0),
            Element::new(vec![3.0], 9.0),
            Element::new(vec![-5.0], 25.0),
        ];
        let mut pop = Population::from_elements(pop_elems);
        let mut rng = RunRng::seed_from_u64(0);
        let mut eval = Evaluator::new(&sphere);
        let mut gwo = Gwo::default();
        gwo.start(&pop, &space, &mut rng).unwrap();
        gwo.step(&mut pop, &space, Progress::new(10, 10), &mut rng, &mut eval)
            .unwrap();
        for e in &pop.elements {
            assert!((e.position[0] - 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn leaders_monotone_and_in_box() {
        let space = SearchSpace::uniform(6, -4.0, 4.0).unwrap();
        let mut rng = RunRng::seed_from_u64(21);
        let mut eval = Evaluator::new(&sphere);
        let mut pop = Population::init(&space, 10, &mut rng, &mut eval).unwrap();
        let mut gwo = Gwo::default();
        gwo.start(&pop, &space, &mut rng).unwrap();
        let mut last = gwo.best(&pop).fitness;
        for k in 1..=100 {
            gwo.step(&mut pop, &space, Progress::new(k, 100), &mut rng, &mut eval)
                .unwrap();
            assert!(pop.elements.iter().all(|e| space.contains(&e.position)));
            let l = gwo.leaders();
            assert!(l[0].fitness <= l[1].fitness && l[1].fitness <= l[2].fitness);
            assert!(l[0].fitness <= last);
            last = l[0].fitness;
        }
    }
}

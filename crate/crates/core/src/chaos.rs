//! Chaotic value generators for the chaotic-learning phase.
//!
//! A [`ChaosState`] is an `N x D` matrix of values in the open interval
//! `(0, 1)`. Row `j` is driven by its own one-dimensional map, so the `N`
//! rows explore the unit cube in parallel with different dynamics.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Lower/upper clamp margin keeping every entry strictly inside `(0, 1)`.
pub const EPSILON: f64 = 1e-12;

/// Distance below which a seed is considered to coincide with a forbidden value.
const FORBIDDEN_TOLERANCE: f64 = 1e-9;

/// The ten classic one-dimensional chaotic maps.
///
/// Maps whose natural domain is `[-1, 1]` (Chebyshev, iterative) are
/// conjugated to `(0, 1)` through `y = 2u - 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ChaosMap {
    Chebyshev,
    Circle,
    Gauss,
    Iterative,
    Logistic,
    Piecewise,
    Sine,
    Singer,
    Sinusoidal,
    Tent,
}

impl ChaosMap {
    pub const ALL: [ChaosMap; 10] = [
        ChaosMap::Logistic,
        ChaosMap::Sine,
        ChaosMap::Tent,
        ChaosMap::Chebyshev,
        ChaosMap::Circle,
        ChaosMap::Gauss,
        ChaosMap::Iterative,
        ChaosMap::Piecewise,
        ChaosMap::Singer,
        ChaosMap::Sinusoidal,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ChaosMap::Chebyshev => "chebyshev",
            ChaosMap::Circle => "circle",
            ChaosMap::Gauss => "gauss",
            ChaosMap::Iterative => "iterative",
            ChaosMap::Logistic => "logistic",
            ChaosMap::Piecewise => "piecewise",
            ChaosMap::Sine => "sine",
            ChaosMap::Singer => "singer",
            ChaosMap::Sinusoidal => "sinusoidal",
            ChaosMap::Tent => "tent",
        }
    }

    /// One raw iterate of the map. The result may touch or leave `(0, 1)`;
    /// [`ChaosMap::step`] applies the clamp.
    pub fn apply(self, x: f64) -> f64 {
        use std::f64::consts::PI;
        match self {
            ChaosMap::Logistic => 4.0 * x * (1.0 - x),
            ChaosMap::Sine => (PI * x).sin(),
            ChaosMap::Tent => {
                if x < 0.7 {
                    x / 0.7
                } else {
                    10.0 / 3.0 * (1.0 - x)
                }
            }
            ChaosMap::Chebyshev => {
                let y = (2.0 * x - 1.0).clamp(-1.0, 1.0);
                let next = (4.0 * y.acos()).cos();
                0.5 * (next + 1.0)
            }
            ChaosMap::Circle => {
                let (a, b) = (0.5, 0.2);
                (x + b - a / (2.0 * PI) * (2.0 * PI * x).sin()).rem_euclid(1.0)
            }
            ChaosMap::Gauss => {
                if x == 0.0 {
                    0.0
                } else {
                    (1.0 / x).rem_euclid(1.0)
                }
            }
            ChaosMap::Iterative => {
                let mut y = 2.0 * x - 1.0;
                if y.abs() < EPSILON {
                    y = EPSILON.copysign(y);
                }
                let next = (0.7 * PI / y).sin();
                0.5 * (next + 1.0)
            }
            ChaosMap::Piecewise => {
                let p = 0.4;
                if x < p {
                    x / p
                } else if x < 0.5 {
                    (x - p) / (0.5 - p)
                } else if x < 1.0 - p {
                    (1.0 - p - x) / (0.5 - p)
                } else {
                    (1.0 - x) / p
                }
            }
            ChaosMap::Singer => {
                let mu = 1.07;
                mu * (7.86 * x - 23.31 * x.powi(2) + 28.75 * x.powi(3) - 13.302875 * x.powi(4))
            }
            ChaosMap::Sinusoidal => 2.3 * x * x * (PI * x).sin(),
        }
    }

    /// One clamped iterate: always lands in `[EPSILON, 1 - EPSILON]`.
    pub fn step(self, x: f64) -> f64 {
        let next = self.apply(x);
        if next.is_nan() {
            return 0.5;
        }
        next.clamp(EPSILON, 1.0 - EPSILON)
    }

    /// Fixed points and short pre-images of fixed points. A seed equal to any
    /// of these produces a constant orbit.
    pub fn forbidden_seeds(self) -> &'static [f64] {
        match self {
            ChaosMap::Logistic => &[0.0, 0.25, 0.5, 0.75, 1.0],
            ChaosMap::Sine => &[0.0, 0.5, 1.0],
            ChaosMap::Tent => &[0.0, 0.7, 1.0, 10.0 / 13.0, 0.7 * 10.0 / 13.0],
            ChaosMap::Chebyshev => &[0.0, 0.5, 1.0],
            ChaosMap::Circle => &[0.0, 1.0],
            ChaosMap::Gauss => &[0.0, 0.5, 1.0],
            ChaosMap::Iterative => &[0.0, 0.5, 1.0],
            ChaosMap::Piecewise => &[0.0, 0.4, 0.5, 0.6, 1.0],
            ChaosMap::Singer => &[0.0, 1.0],
            ChaosMap::Sinusoidal => &[0.0, 1.0],
        }
    }

    fn is_forbidden(self, x: f64) -> bool {
        self.forbidden_seeds()
            .iter()
            .any(|f| (x - f).abs() < FORBIDDEN_TOLERANCE)
    }
}

/// `N x D` matrix of chaotic values, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct ChaosState {
    maps: Vec<ChaosMap>,
    dim: usize,
    values: Vec<f64>,
}

impl ChaosState {
    /// Builds a state using the default map roster, cycling through
    /// [`ChaosMap::ALL`] when `n_maps` exceeds ten.
    pub fn new<R: Rng + ?Sized>(n_maps: usize, dim: usize, rng: &mut R) -> Result<Self> {
        if n_maps == 0 {
            return Err(Error::invalid("chaos: n_maps must be at least 1"));
        }
        let maps = (0..n_maps)
            .map(|j| ChaosMap::ALL[j % ChaosMap::ALL.len()])
            .collect();
        Self::with_maps(maps, dim, rng)
    }

    pub fn from_seed(n_maps: usize, dim: usize, seed: u64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Self::new(n_maps, dim, &mut rng)
    }

    /// Draws every entry uniformly in `(0, 1)`, redrawing values that would
    /// pin the row's map to a fixed point.
    pub fn with_maps<R: Rng + ?Sized>(
        maps: Vec<ChaosMap>,
        dim: usize,
        rng: &mut R,
    ) -> Result<Self> {
        if maps.is_empty() {
            return Err(Error::invalid("chaos: n_maps must be at least 1"));
        }
        if dim == 0 {
            return Err(Error::invalid("chaos: dimension must be at least 1"));
        }
        let mut values = Vec::with_capacity(maps.len() * dim);
        for &map in &maps {
            for _ in 0..dim {
                let x = loop {
                    let x: f64 = rng.random();
                    if x > 0.0 && x < 1.0 && !map.is_forbidden(x) {
                        break x;
                    }
                };
                values.push(x);
            }
        }
        Ok(Self { maps, dim, values })
    }

    /// Builds a state from explicit values; entries are clamped into the
    /// open interval.
    pub fn from_values(maps: Vec<ChaosMap>, dim: usize, values: Vec<f64>) -> Result<Self> {
        if maps.is_empty() || dim == 0 {
            return Err(Error::invalid(
                "chaos: n_maps and dimension must be at least 1",
            ));
        }
        if values.len() != maps.len() * dim {
            return Err(Error::invalid(format!(
                "chaos: expected {} values, got {}",
                maps.len() * dim,
                values.len()
            )));
        }
        let values = values
            .into_iter()
            .map(|v| v.clamp(EPSILON, 1.0 - EPSILON))
            .collect();
        Ok(Self { maps, dim, values })
    }

    pub fn n_maps(&self) -> usize {
        self.maps.len()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn maps(&self) -> &[ChaosMap] {
        &self.maps
    }

    pub fn row(&self, j: usize) -> &[f64] {
        &self.values[j * self.dim..(j + 1) * self.dim]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.values.chunks_exact(self.dim)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Advances every row one step under its own map.
    pub fn advance(&mut self) {
        for (row, &map) in self.values.chunks_exact_mut(self.dim).zip(&self.maps) {
            for v in row {
                *v = map.step(*v);
            }
        }
    }

    /// Value-returning form of [`ChaosState::advance`].
    pub fn advanced(mut self) -> Self {
        self.advance();
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn logistic_arithmetic() {
        assert_abs_diff_eq!(ChaosMap::Logistic.step(0.2), 0.64, epsilon = 1e-15);
        assert_abs_diff_eq!(ChaosMap::Logistic.step(0.64), 0.9216, epsilon = 1e-15);
        assert_eq!(ChaosMap::Logistic.step(0.75), 0.75);
    }

    #[test]
    fn init_shape_and_range() {
        let s = ChaosState::from_seed(10, 140, 42).unwrap();
        assert_eq!(s.n_maps(), 10);
        assert_eq!(s.dim(), 140);
        assert_eq!(s.values().len(), 1400);
        assert!(s.values().iter().all(|&v| v > 0.0 && v < 1.0));
    }

    #[test]
    fn init_is_deterministic() {
        let a = ChaosState::from_seed(1, 1, 7).unwrap();
        let b = ChaosState::from_seed(1, 1, 7).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn init_rejects_zero_sizes() {
        assert!(matches!(
            ChaosState::from_seed(0, 5, 1),
            Err(Error::InvalidArgument(_))
        ));
        assert!(matches!(
            ChaosState::from_seed(3, 0, 1),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn rows_follow_their_maps() {
        let maps = vec![ChaosMap::Logistic, ChaosMap::Tent];
        let s = ChaosState::from_values(maps, 2, vec![0.2, 0.64, 0.35, 0.8])
            .unwrap()
            .advanced();
        assert_abs_diff_eq!(s.row(0)[0], 0.64, epsilon = 1e-15);
        assert_abs_diff_eq!(s.row(0)[1], 0.9216, epsilon = 1e-15);
        assert_abs_diff_eq!(s.row(1)[0], 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(s.row(1)[1], 10.0 / 3.0 * 0.2, epsilon = 1e-15);
    }

    #[test]
    fn degenerate_values_are_clamped() {
        // 0.5 maps to 1.0 under the logistic map, which must be pulled back inside.
        assert_eq!(ChaosMap::Logistic.step(0.5), 1.0 - EPSILON);
        assert_eq!(ChaosMap::Gauss.step(0.5), EPSILON);
        for map in ChaosMap::ALL {
            for x in [EPSILON, 0.5, 1.0 - EPSILON] {
                let y = map.step(x);
                assert!(y > 0.0 && y < 1.0, "{} at {x} -> {y}", map.name());
            }
        }
    }

    #[test]
    fn every_map_stays_inside_unit_interval() {
        let mut s = ChaosState::from_seed(10, 8, 3).unwrap();
        for _ in 0..10_000 {
            s.advance();
            assert!(s.values().iter().all(|&v| v > 0.0 && v < 1.0));
        }
    }
}

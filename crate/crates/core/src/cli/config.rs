use chrono::NaiveDate;

use crate::algorithm::Algorithm;
use crate::dataset::SplitPolicy;
use crate::error::{Error, Result};
use crate::metrics::Denominator;
use crate::mfnn::NetworkSpec;

/// Last training day of the reference window (the final four days of a
/// 2020-01-22..2020-04-03 series are held out).
pub const DEFAULT_SPLIT_DATE: (i32, u32, u32) = (2020, 3, 30);

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub algorithm: Algorithm,
    /// Optimizer iterations, or epochs for back-propagation.
    pub iters: usize,
    pub pop_size: usize,
    pub seed: u64,
    pub network: NetworkSpec,
    /// Box applied to every weight and bias.
    pub bounds: (f64, f64),
    pub split: SplitPolicy,
    pub horizon_days: usize,
    pub denominator: Denominator,
    pub learning_rate: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        let (y, m, d) = DEFAULT_SPLIT_DATE;
        Self {
            algorithm: Algorithm::Isacl,
            iters: 500,
            pop_size: 10,
            seed: 1,
            network: NetworkSpec::default(),
            bounds: (-10.0, 10.0),
            split: SplitPolicy::Date(NaiveDate::from_ymd_opt(y, m, d).expect("valid date")),
            horizon_days: 12,
            denominator: Denominator::Model,
            learning_rate: 0.1,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if self.iters == 0 {
            return Err(Error::invalid("iters must be at least 1"));
        }
        if self.pop_size < 2 {
            return Err(Error::invalid("pop must be at least 2"));
        }
        let (lo, hi) = self.bounds;
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::invalid(format!(
                "bounds {lo},{hi} must satisfy lower < upper"
            )));
        }
        if self.horizon_days == 0 {
            return Err(Error::invalid("horizon must be at least 1 day"));
        }
        if self.learning_rate.is_nan() || self.learning_rate <= 0.0 {
            return Err(Error::invalid("learning rate must be positive"));
        }
        Ok(())
    }
}

/// Parses `LO,HI`, or a single `B` meaning `-B,B`.
pub fn parse_bounds(s: &str) -> Result<(f64, f64)> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let num = |p: &str| {
        p.parse::<f64>()
            .map_err(|_| Error::invalid(format!("bad bound {p:?}")))
    };
    let (lo, hi) = match parts.as_slice() {
        [b] => {
            let b = num(b)?.abs();
            (-b, b)
        }
        [lo, hi] => (num(lo)?, num(hi)?),
        _ => return Err(Error::invalid(format!("bounds must be LO,HI, got {s:?}"))),
    };
    if lo.is_nan() || hi.is_nan() || lo >= hi {
        return Err(Error::invalid(format!(
            "bounds {lo},{hi} must satisfy lower < upper"
        )));
    }
    Ok((lo, hi))
}

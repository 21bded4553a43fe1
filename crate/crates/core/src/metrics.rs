//! Forecast accuracy indices: RMSE, MAE, MAPE, RMSRE and R².
//!
//! MAPE and RMSRE divide by the *model* value by default; the conventional
//! actual-value denominator is available through [`Denominator::Actual`].
//! R² uses the mean of the actual series.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Denominator {
    #[default]
    Model,
    Actual,
}

impl fmt::Display for Denominator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Denominator::Model => "model",
            Denominator::Actual => "actual",
        })
    }
}

impl FromStr for Denominator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "model" => Ok(Denominator::Model),
            "actual" => Ok(Denominator::Actual),
            other => Err(Error::invalid(format!("unknown denominator {other:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MetricsReport {
    pub rmse: f64,
    pub mae: f64,
    pub mape: f64,
    pub rmsre: f64,
    pub r2: f64,
}

impl MetricsReport {
    pub const FIELDS: [&'static str; 5] = ["rmse", "mae", "mape", "rmsre", "r2"];

    pub fn values(&self) -> [f64; 5] {
        [self.rmse, self.mae, self.mape, self.rmsre, self.r2]
    }

    pub fn from_values(v: [f64; 5]) -> Self {
        Self {
            rmse: v[0],
            mae: v[1],
            mape: v[2],
            rmsre: v[3],
            r2: v[4],
        }
    }
}

pub fn compute_metrics(actual: &[f64], model: &[f64]) -> Result<MetricsReport> {
    compute_metrics_with(actual, model, Denominator::Model)
}

pub fn compute_metrics_with(
    actual: &[f64],
    model: &[f64],
    denominator: Denominator,
) -> Result<MetricsReport> {
    if actual.len() != model.len() {
        return Err(Error::invalid(format!(
            "series lengths differ: {} actual vs {} model",
            actual.len(),
            model.len()
        )));
    }
    if actual.len() < 2 {
        return Err(Error::invalid("metrics need at least two points"));
    }
    let n = actual.len() as f64;

    let mut sq = 0.0;
    let mut abs = 0.0;
    let mut rel_abs = 0.0;
    let mut rel_sq = 0.0;
    for (i, (&a, &m)) in actual.iter().zip(model).enumerate() {
        let err = a - m;
        sq += err * err;
        abs += err.abs();
        let denom = match denominator {
            Denominator::Model => m,
            Denominator::Actual => a,
        };
        if denom == 0.0 {
            return Err(Error::DivisionGuard {
                metric: "mape",
                index: i,
            });
        }
        let rel = err / denom;
        rel_abs += rel.abs();
        rel_sq += rel * rel;
    }

    let mean = actual.iter().sum::<f64>() / n;
    let total: f64 = actual.iter().map(|a| (a - mean).powi(2)).sum();
    if total == 0.0 {
        return Err(Error::R2Undefined);
    }

    Ok(MetricsReport {
        rmse: (sq / n).sqrt(),
        mae: abs / n,
        mape: rel_abs / n,
        rmsre: (rel_sq / n).sqrt(),
        r2: 1.0 - sq / total,
    })
}

/// Formats `x` with six significant digits in plain decimal notation, or
/// scientific notation for very large or small magnitudes.
pub fn sig6(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let mag = x.abs().log10().floor() as i32;
    if !(-4..15).contains(&mag) {
        return format!("{x:.5e}");
    }
    // round through scientific notation so that 999999.5 carries into the next decade
    let rounded: f64 = format!("{x:.5e}").parse().expect("valid float");
    let mag = rounded.abs().log10().floor() as i32;
    let decimals = (5 - mag).max(0) as usize;
    format!("{rounded:.decimals$}")
}

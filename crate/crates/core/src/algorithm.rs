use std::fmt;
use std::str::FromStr;

use crate::baselines::{BaselineConfig, BaselineKind};
use crate::error::{Error, Result};
use crate::isa::{Isa, IsaConfig};
use crate::isacl::{Isacl, IsaclConfig};
use crate::optim::Optimizer;

/// Every training method offered by the library. All but [`Algorithm::MfnnBp`]
/// are population optimizers driven by [`crate::optim::run`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Algorithm {
    MfnnBp,
    Ga,
    Pso,
    Gwo,
    Sca,
    Isa,
    Isacl,
}

impl Algorithm {
    pub const ALL: [Algorithm; 7] = [
        Algorithm::MfnnBp,
        Algorithm::Ga,
        Algorithm::Pso,
        Algorithm::Gwo,
        Algorithm::Sca,
        Algorithm::Isa,
        Algorithm::Isacl,
    ];

    pub const METAHEURISTICS: [Algorithm; 6] = [
        Algorithm::Isa,
        Algorithm::Isacl,
        Algorithm::Pso,
        Algorithm::Ga,
        Algorithm::Gwo,
        Algorithm::Sca,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::MfnnBp => "MFNN-BP",
            Algorithm::Ga => "GA",
            Algorithm::Pso => "PSO",
            Algorithm::Gwo => "GWO",
            Algorithm::Sca => "SCA",
            Algorithm::Isa => "ISA",
            Algorithm::Isacl => "ISACL",
        }
    }

    /// Builds the optimizer with its default parameters; `None` for
    /// gradient back-propagation.
    pub fn optimizer(self) -> Option<Box<dyn Optimizer + Send>> {
        let baselines = BaselineConfig::default();
        let kind = match self {
            Algorithm::MfnnBp => return None,
            Algorithm::Isa => {
                return Some(Box::new(Isa::new(IsaConfig::default()).expect("valid")))
            }
            Algorithm::Isacl => {
                return Some(Box::new(Isacl::new(IsaclConfig::default()).expect("valid")))
            }
            Algorithm::Pso => BaselineKind::Pso,
            Algorithm::Ga => BaselineKind::Ga,
            Algorithm::Gwo => BaselineKind::Gwo,
            Algorithm::Sca => BaselineKind::Sca,
        };
        Some(
            baselines
                .build(kind)
                .expect("default baseline config is valid"),
        )
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_uppercase();
        match key.as_str() {
            "MFNN-BP" | "MFNN" | "BP" => Ok(Algorithm::MfnnBp),
            _ => Algorithm::ALL
                .into_iter()
                .find(|a| a.name() == key)
                .ok_or_else(|| Error::invalid(format!("unknown algorithm {s:?}"))),
        }
    }
}

//! Comparison optimizers: particle swarm, genetic algorithm, grey wolf and
//! sine cosine, each with the parameter set used for the benchmark grid.

mod ga;
mod gwo;
mod pso;
mod sca;

pub use ga::{arithmetic_crossover, Ga, GaConfig};
pub use gwo::{leader_pull, Gwo, GwoConfig};
pub use pso::{velocity, Pso, PsoConfig};
pub use sca::{sca_move, Sca, ScaConfig};

use crate::error::Result;
use crate::optim::Optimizer;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BaselineKind {
    Pso,
    Ga,
    Gwo,
    Sca,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct BaselineConfig {
    pub pso: PsoConfig,
    pub ga: GaConfig,
    pub gwo: GwoConfig,
    pub sca: ScaConfig,
}

impl BaselineConfig {
    pub fn build(&self, kind: BaselineKind) -> Result<Box<dyn Optimizer + Send>> {
        Ok(match kind {
            BaselineKind::Pso => Box::new(Pso::new(self.pso.clone())),
            BaselineKind::Ga => Box::new(Ga::new(self.ga.clone())?),
            BaselineKind::Gwo => Box::new(Gwo::new(self.gwo.clone())),
            BaselineKind::Sca => Box::new(Sca::new(self.sca.clone())),
        })
    }
}

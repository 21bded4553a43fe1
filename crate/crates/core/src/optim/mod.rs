//! Population machinery shared by every optimizer: search box, elements,
//! greedy replacement, evaluation accounting and the run driver.

mod driver;
pub mod functions;
mod population;
mod space;

pub use driver::{run, Optimizer, Progress, RunRng, RunTrace};
pub use population::{argmin, Element, Evaluator, Objective, Population};
pub use space::SearchSpace;

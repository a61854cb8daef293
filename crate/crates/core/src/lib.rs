pub mod adversarial;
pub mod bounds;
pub mod error;
pub mod experiment;
pub mod io;
pub mod linalg;
pub mod polytope;
pub mod problem;
pub mod ric;
pub mod rng;
pub mod solvers;

pub use error::{Error, Result};

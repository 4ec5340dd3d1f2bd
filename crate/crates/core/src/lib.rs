pub mod coefficients;
pub mod counterexample;
pub mod engine;
pub mod error;
pub mod expr;
pub mod fourier_model;
pub mod hypotheses;
pub mod processes;
pub mod quadrature;
pub mod rng;
pub mod summation;
pub mod trend;

pub use error::{Error, Result};

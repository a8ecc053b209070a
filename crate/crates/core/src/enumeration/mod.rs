//! Exact counts of triangulations and the λ/h parameter algebra.

pub mod gj;
pub mod krikun;
pub mod params;
pub mod series;
pub mod table;

use thiserror::Error;

pub use gj::{catalan, tilde_tau, GjRecursion};
pub use krikun::tau_planar_polygon;
pub use params::{
    d_of_h, d_of_lambda, h_of_lambda, lambda_of_h, lambda_of_theta, LambdaParams, WTable,
    LAMBDA_C,
};
pub use series::{harmonicity_residual, peeling_mass, MassReport};
pub use table::{CountTable, Provenance};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EnumError {
    #[error("outside the domain: {0}")]
    Domain(String),
    #[error("root finding did not reach tolerance: {0}")]
    Convergence(String),
    #[error("base value for genus {g} is not seeded")]
    BaseCaseMissing { g: usize },
    #[error("table i/o: {0}")]
    Io(String),
}

//! Brute-force two-point oracle on explicit space-form embeddings.
//!
//! The reduced distance SDE makes a prediction `(M(r), σ²)` per coupling;
//! this module checks it from the other side. Genuinely coupled Brownian
//! particles are simulated as a geodesic random walk on ℝⁿ, the unit sphere
//! Sⁿ, or the unit hyperboloid Hⁿ — closed-form geodesics and parallel
//! transport, frames re-derived from the connecting geodesic each step —
//! and the observed distance increments are binned into empirical drift and
//! quadratic-variation estimates with standard errors.

mod frame;
mod run;
mod spaceform;

pub use frame::{FramePair, TRANSPORT_TOL};
pub use run::{
    run_oracle, step_coupled, OracleBinRow, OracleCoupling, OracleReport, MIN_BIN_SAMPLES,
};
pub use spaceform::{
    distance, exp_map, log_map, parallel_transport, EmbeddedPoint, SpaceFormKind, POINT_TOL,
};

use crate::coupling::CouplingError;
use crate::geometry::GeomError;
use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum OracleError {
    #[error("point is off the embedded model (defect {defect})")]
    InvalidPoint { defect: f64 },
    #[error("configuration at or beyond the cut locus (rho = {rho})")]
    CutLocus { rho: f64 },
    #[error("the two points coincide; no connecting geodesic direction")]
    CoincidentPoints,
    #[error("could only build {accepted} of {needed} frame vectors")]
    FrameConstruction { accepted: usize, needed: usize },
    #[error(transparent)]
    Coupling(#[from] CouplingError),
    #[error(transparent)]
    Geometry(#[from] GeomError),
    #[error("invalid parameter `{name}`: {message}")]
    Parameter { name: &'static str, message: String },
}

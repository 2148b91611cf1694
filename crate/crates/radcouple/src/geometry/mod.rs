//! Radial curvature data for the model-manifold zoo.
//!
//! All geometries handled here are *radially isoparametric*: the geodesic
//! sphere of radius `r` about the base point has principal curvatures
//! `κ_1(r), …, κ_{n−1}(r)` depending only on `r`, with mean curvature
//! `A(r) = Σ κ_i(r) = Δr`. The module provides closed forms for that data
//! across the zoo (space forms, warped products, rank-one symmetric spaces,
//! perturbed hyperbolic models), the scalar Riccati flow
//! `κ' + κ² + K(r) = 0` relating curvature profiles to shape data, and
//! Hessian/Laplacian comparison certificates.

mod comparison;
mod model;
mod profile;
mod riccati;
mod spectrum;

pub use comparison::{
    comparison_certificate, generalized_cot, generalized_sin, radial_sectional_from_kappa,
    ComparisonPoint, ComparisonReport, COMPARISON_TOL,
};
pub use model::{ModelKind, ModelManifold, RossType};
pub use profile::WarpingProfile;
pub use riccati::riccati_flow;
pub use spectrum::{CurvatureSpectrum, SpectrumEntry};

use thiserror::Error;

/// Errors raised by the radial-geometry layer.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum GeomError {
    #[error("radius {r} outside the valid domain (0, {r_max})")]
    RadiusOutOfDomain { r: f64, r_max: f64 },
    #[error("r = {r} reaches the conjugate radius {limit} for curvature {curvature}")]
    BeyondConjugateRadius { curvature: f64, r: f64, limit: f64 },
    #[error("manifold dimension must be at least 2, got {0}")]
    DimensionTooSmall(usize),
    #[error("parameter `{name}` must be positive, got {value}")]
    NonPositiveParameter { name: &'static str, value: f64 },
    #[error("multiplicities {m_alpha} + {m_2alpha} must sum to dim - 1 = {expected}")]
    MultiplicityMismatch {
        m_alpha: u32,
        m_2alpha: u32,
        expected: u32,
    },
    #[error("warping profile violates f(0)=0, f'(0)=1: f(h)/h = {value_ratio}, f'(h) = {derivative} at h = 1e-8")]
    ProfileNormalization { value_ratio: f64, derivative: f64 },
    #[error("warping profile not positive at r = {r} (f = {value})")]
    NonPositiveProfile { r: f64, value: f64 },
    #[error("curvature flow blew up near r = {r} (|kappa| > 1e12; focal point crossed)")]
    RiccatiBlowUp { r: f64 },
    #[error("Riccati step control failed: halving left a residual of {residual}")]
    RiccatiStepControl { residual: f64 },
    #[error("evaluation hits a pole of tan/cot at r = {r}")]
    TrigPole { r: f64 },
}

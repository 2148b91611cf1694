//! Coadapted Brownian couplings on radial model geometries.
//!
//! Two Brownian motions on a manifold can be driven by correlated noises
//! `(J, K)` subject to the covariance constraint `J Jᵀ + K Kᵀ = I`. When the
//! geodesic spheres of the space have principal curvatures depending only on
//! the radius, the inter-particle distance obeys a one-dimensional SDE whose
//! deterministic rate is confined to the window
//!
//! ```text
//! A(ρ) − Σ|κ_i(ρ)|  ≤  ρ'(t)  ≤  A(ρ) + Σ|κ_i(ρ)|
//! ```
//!
//! with `A` the mean curvature of the sphere of radius `ρ` and `κ_i` its
//! principal curvatures. This crate computes the curvature data for a zoo of
//! model geometries, evaluates and attains the window, synthesizes coupling
//! controls realizing prescribed distance laws, simulates the reduced distance
//! SDE, and cross-validates all of it against a brute-force two-point
//! simulation in explicit space-form embeddings.
//!
//! Modules:
//!
//! - [`geometry`] — model manifolds, principal curvature spectra, Riccati
//!   flow, Hessian/Laplacian comparison certificates.
//! - [`window`] — drift windows, constant-curvature specializations, control
//!   synthesis, fixed-distance feasibility, asymptotic speed intervals.
//! - [`coupling`] — full `(J, K)` matrices from reduced controls,
//!   admissibility completion, deterministic-distance condition checks.
//! - [`sde`] — Euler–Maruyama simulation of the reduced distance process,
//!   RK4 integration of deterministic distance laws, the radial process,
//!   asymptotic speed estimation.
//! - [`oracle`] — geodesic random walk for genuinely coupled particles on
//!   ℝⁿ, Sⁿ, Hⁿ with closed-form transport, plus binned drift/variance
//!   estimates for comparison against the reduced predictions.
//! - [`cli`] — config-driven experiment harness with CSV outputs.
//!
//! Every stochastic routine draws noise from a counter-based generator keyed
//! by `(seed, path, step)`, so runs are bit-reproducible under any degree of
//! parallelism. Start with the `examples/` directory: each file exercises one
//! capability end to end.

pub mod cli;
pub mod coupling;
pub mod geometry;
pub mod oracle;
pub mod rng;
pub mod sde;
pub mod stats;
pub mod window;

pub use coupling::{CouplingControl, CouplingMatrices};
pub use geometry::{CurvatureSpectrum, ModelManifold, WarpingProfile};
pub use sde::{ControlSchedule, DistancePath, TargetLaw};
pub use window::{ControlSolution, DriftWindow};

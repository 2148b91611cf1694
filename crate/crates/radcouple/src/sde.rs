//! Reduced one-dimensional simulation of the inter-particle distance.
//!
//! Under a coadapted coupling the distance obeys `dρ = M dt + σ dβ` with
//! drift `M = A(ρ) − Σ mult·κ_i·α_i` and diffusion
//! `σ² = (1 − j_r)² + k_r²` in aligned frames. Stochastic paths use
//! Euler–Maruyama (weak order 1 is enough for the moment checks);
//! deterministic distance laws are integrated with RK4 under an online
//! window-feasibility check that synthesizes the realizing control at every
//! step. All noise is counter-keyed by `(seed, path, step)`, so path sets
//! are identical under any parallel execution order.

use crate::coupling::{CouplingControl, CouplingError};
use crate::geometry::{GeomError, ModelManifold};
use crate::rng;
use crate::stats;
use crate::window::{self, ControlSolution, WindowError};
use rayon::prelude::*;
use std::sync::Arc;

#[derive(Debug, Clone, thiserror::Error)]
pub enum SdeError {
    #[error(transparent)]
    Geometry(#[from] GeomError),
    #[error(transparent)]
    Window(#[from] WindowError),
    #[error(transparent)]
    Coupling(#[from] CouplingError),
    #[error("invalid parameter `{name}`: {message}")]
    Parameter { name: &'static str, message: String },
    #[error("target speed {target} leaves the window [{lo}, {hi}] at t = {t}, rho = {rho}")]
    WindowViolation {
        t: f64,
        rho: f64,
        target: f64,
        lo: f64,
        hi: f64,
    },
    #[error("path left the radial domain at t = {t} (rho = {rho})")]
    DomainExit { t: f64, rho: f64 },
    #[error("path has not completed (termination: {0})")]
    PathNotCompleted(&'static str),
    #[error("too few samples after burn-in: {0} < 10")]
    PathTooShort(usize),
}

/// Why a path stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TerminationReason {
    /// Absorbed at `ρ ≤ dt`.
    HitZero,
    /// Absorbed at `ρ ≥ r_max − dt`.
    HitCut,
    /// Reached the final time.
    Completed,
    /// State became non-finite; the path is recorded up to the failure.
    NonFinite,
}

impl TerminationReason {
    pub fn as_str(&self) -> &'static str {
        match self {
            TerminationReason::HitZero => "hit_zero",
            TerminationReason::HitCut => "hit_cut",
            TerminationReason::Completed => "completed",
            TerminationReason::NonFinite => "non_finite",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Termination {
    pub time: f64,
    pub reason: TerminationReason,
}

/// Recorded time series of one distance path.
#[derive(Debug, Clone)]
pub struct DistancePath {
    pub times: Vec<f64>,
    pub values: Vec<f64>,
    pub seed: u64,
    pub path_index: u64,
    pub terminated: Option<Termination>,
}

impl DistancePath {
    pub fn terminal(&self) -> (f64, f64) {
        (
            *self.times.last().expect("path has at least one point"),
            *self.values.last().expect("path has at least one point"),
        )
    }

    pub fn completed(&self) -> bool {
        matches!(
            self.terminated,
            Some(Termination {
                reason: TerminationReason::Completed,
                ..
            })
        )
    }
}

/// Prescribed deterministic speed for the distance.
#[derive(Clone)]
pub enum TargetLaw {
    /// Constant speed.
    Constant(f64),
    /// `ρ' = A(ρ)`; realized by `α ≡ 0`.
    MeanCurvature,
    /// `ρ' = lo(ρ) + u·(hi(ρ) − lo(ρ))` for a fixed fraction `u ∈ [0, 1]`.
    WindowFraction(f64),
    /// Arbitrary `(t, ρ) ↦ speed`.
    Custom(Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>),
}

impl std::fmt::Debug for TargetLaw {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            TargetLaw::Constant(c) => write!(f, "Constant({c})"),
            TargetLaw::MeanCurvature => write!(f, "MeanCurvature"),
            TargetLaw::WindowFraction(u) => write!(f, "WindowFraction({u})"),
            TargetLaw::Custom(_) => write!(f, "Custom(..)"),
        }
    }
}

impl TargetLaw {
    pub fn eval(&self, model: &ModelManifold, t: f64, rho: f64) -> Result<f64, SdeError> {
        match self {
            TargetLaw::Constant(c) => Ok(*c),
            TargetLaw::MeanCurvature => {
                let (mean, _) = model.mean_and_abs_sum(rho)?;
                Ok(mean)
            }
            TargetLaw::WindowFraction(u) => {
                let (mean, abs_sum) = model.mean_and_abs_sum(rho)?;
                Ok(mean + (2.0 * u - 1.0) * abs_sum)
            }
            TargetLaw::Custom(f) => Ok(f(t, rho)),
        }
    }
}

/// How the coupling control is chosen along a path.
#[derive(Debug, Clone)]
pub enum ControlSchedule {
    /// One fixed admissible control.
    Constant(CouplingControl),
    /// Per-step deterministic synthesis toward a target speed.
    TargetSpeed(TargetLaw),
    /// Endpoint shorthand for [`CouplingControl::synchronous`].
    Synchronous,
    /// Endpoint shorthand for [`CouplingControl::reflection`].
    Reflection,
}

/// Reduced diffusion coefficient of the distance for a control:
/// `σ = sqrt((1 − j_r)² + k_r²)`. Only the radial rows contribute once the
/// frames are parallel-transport aligned.
pub fn diffusion_coefficient(control: &CouplingControl) -> f64 {
    let d = 1.0 - control.j_r();
    (d * d + control.k_r() * control.k_r()).sqrt()
}

struct StepModel<'a> {
    model: &'a ModelManifold,
    /// Tangential alphas expanded to one value per direction (fixed-control
    /// schedules), or `None` for per-step synthesis.
    alphas: Option<Vec<f64>>,
    sigma: f64,
    law: Option<&'a TargetLaw>,
}

impl<'a> StepModel<'a> {
    fn new(model: &'a ModelManifold, schedule: &'a ControlSchedule) -> Result<Self, SdeError> {
        let tangential = model.dim() - 1;
        let fixed = |control: &CouplingControl| -> Result<(Vec<f64>, f64), SdeError> {
            if control.tangential_dim() != tangential {
                return Err(CouplingError::DimensionMismatch {
                    control: control.tangential_dim(),
                    expected: tangential,
                }
                .into());
            }
            Ok((control.expanded_alphas(), diffusion_coefficient(control)))
        };
        match schedule {
            ControlSchedule::Constant(c) => {
                let (alphas, sigma) = fixed(c)?;
                Ok(StepModel {
                    model,
                    alphas: Some(alphas),
                    sigma,
                    law: None,
                })
            }
            ControlSchedule::Synchronous => {
                let (alphas, sigma) = fixed(&CouplingControl::synchronous(model.dim()))?;
                Ok(StepModel {
                    model,
                    alphas: Some(alphas),
                    sigma,
                    law: None,
                })
            }
            ControlSchedule::Reflection => {
                let (alphas, sigma) = fixed(&CouplingControl::reflection(model.dim()))?;
                Ok(StepModel {
                    model,
                    alphas: Some(alphas),
                    sigma,
                    law: None,
                })
            }
            ControlSchedule::TargetSpeed(law) => Ok(StepModel {
                model,
                alphas: None,
                sigma: 0.0,
                law: Some(law),
            }),
        }
    }

    /// Drift at `(t, rho)`; a window violation by a target law is an error.
    fn drift(&self, t: f64, rho: f64) -> Result<f64, SdeError> {
        match (&self.alphas, self.law) {
            (Some(alphas), _) => {
                let entries = self.model.curvature_entries(rho)?;
                let mut mean = 0.0;
                let mut trace = 0.0;
                let mut idx = 0;
                for e in &entries {
                    mean += e.multiplicity as f64 * e.kappa;
                    for _ in 0..e.multiplicity {
                        trace += e.kappa * alphas[idx];
                        idx += 1;
                    }
                }
                Ok(mean - trace)
            }
            (None, Some(law)) => {
                let target = law.eval(self.model, t, rho)?;
                match window::synthesize_controls(self.model, rho, target) {
                    Ok(sol) => Ok(sol.achieved_speed),
                    Err(WindowError::InfeasibleTarget { target, lo, hi }) => {
                        Err(SdeError::WindowViolation {
                            t,
                            rho,
                            target,
                            lo,
                            hi,
                        })
                    }
                    Err(e) => Err(e.into()),
                }
            }
            _ => unreachable!("schedule resolved to neither fixed control nor law"),
        }
    }
}

fn check_positive(name: &'static str, value: f64) -> Result<(), SdeError> {
    if !(value > 0.0) || !value.is_finite() {
        return Err(SdeError::Parameter {
            name,
            message: format!("must be positive and finite, got {value}"),
        });
    }
    Ok(())
}

struct EulerRun<'a> {
    stepper: &'a StepModel<'a>,
    r_max: f64,
    rho0: f64,
    t_final: f64,
    dt: f64,
    seed: u64,
    record_every: usize,
}

impl<'a> EulerRun<'a> {
    fn run_path(&self, path_index: u64) -> Result<DistancePath, SdeError> {
        let n_steps = (self.t_final / self.dt).round().max(1.0) as u64;
        let mut times = Vec::with_capacity(n_steps as usize / self.record_every + 2);
        let mut values = Vec::with_capacity(times.capacity());
        let mut rho = self.rho0;
        times.push(0.0);
        values.push(rho);
        let mut terminated = None;
        for k in 0..n_steps {
            let t = k as f64 * self.dt;
            let drift = self.stepper.drift(t, rho)?;
            let mut next = rho + drift * self.dt;
            if self.stepper.sigma > 0.0 {
                next += self.stepper.sigma * self.dt.sqrt() * rng::normal(self.seed, path_index, k, 0);
            }
            let t_next = (k + 1) as f64 * self.dt;
            if !next.is_finite() {
                terminated = Some(Termination {
                    time: t_next,
                    reason: TerminationReason::NonFinite,
                });
                break;
            }
            rho = next;
            let recorded = (k + 1) % self.record_every as u64 == 0;
            if recorded {
                times.push(t_next);
                values.push(rho);
            }
            if rho <= self.dt {
                terminated = Some(Termination {
                    time: t_next,
                    reason: TerminationReason::HitZero,
                });
                if !recorded {
                    times.push(t_next);
                    values.push(rho);
                }
                break;
            }
            if self.r_max.is_finite() && rho >= self.r_max - self.dt {
                terminated = Some(Termination {
                    time: t_next,
                    reason: TerminationReason::HitCut,
                });
                if !recorded {
                    times.push(t_next);
                    values.push(rho);
                }
                break;
            }
        }
        let terminated = terminated.unwrap_or(Termination {
            time: n_steps as f64 * self.dt,
            reason: TerminationReason::Completed,
        });
        if terminated.reason == TerminationReason::Completed
            && *times.last().unwrap() < terminated.time
        {
            times.push(terminated.time);
            values.push(rho);
        }
        Ok(DistancePath {
            times,
            values,
            seed: self.seed,
            path_index,
            terminated: Some(terminated),
        })
    }
}

#[allow(clippy::too_many_arguments)]
fn euler_paths(
    model: &ModelManifold,
    schedule: &ControlSchedule,
    rho0: f64,
    t_final: f64,
    dt: f64,
    seed: u64,
    n_paths: usize,
    record_every: usize,
) -> Result<Vec<DistancePath>, SdeError> {
    check_positive("t_final", t_final)?;
    check_positive("dt", dt)?;
    if dt > t_final / 10.0 {
        return Err(SdeError::Parameter {
            name: "dt",
            message: format!("must satisfy dt <= t_final/10, got {dt} vs {t_final}"),
        });
    }
    if n_paths == 0 || record_every == 0 {
        return Err(SdeError::Parameter {
            name: "n_paths/record_every",
            message: "must be at least 1".into(),
        });
    }
    model.check_radius(rho0).map_err(SdeError::from)?;
    let stepper = StepModel::new(model, schedule)?;
    // fail fast on an initially infeasible target before spawning paths
    stepper.drift(0.0, rho0)?;
    let run = EulerRun {
        stepper: &stepper,
        r_max: model.r_max(),
        rho0,
        t_final,
        dt,
        seed,
        record_every,
    };
    (0..n_paths as u64)
        .into_par_iter()
        .map(|p| run.run_path(p))
        .collect()
}

/// Euler–Maruyama simulation of `dρ = M dt + σ dβ` under a control schedule.
///
/// Paths absorb at `ρ ≤ dt` (`hit_zero`) and at `ρ ≥ r_max − dt`
/// (`hit_cut`). Noise is keyed by `(seed, path, step)`; the returned paths
/// are bit-identical for a given seed no matter how many run concurrently.
/// `record_every` thins the stored series (1 keeps every step); termination
/// points are always recorded.
#[allow(clippy::too_many_arguments)]
pub fn simulate_distance(
    model: &ModelManifold,
    schedule: &ControlSchedule,
    rho0: f64,
    t_final: f64,
    dt: f64,
    seed: u64,
    n_paths: usize,
    record_every: usize,
) -> Result<Vec<DistancePath>, SdeError> {
    euler_paths(
        model,
        schedule,
        rho0,
        t_final,
        dt,
        seed,
        n_paths,
        record_every,
    )
}

/// Result of a deterministic distance-law integration.
#[derive(Debug, Clone)]
pub struct DeterministicRun {
    pub path: DistancePath,
    /// Synthesized control at the start of each accepted step.
    pub controls: Vec<ControlSolution>,
}

/// RK4 integration of `ρ' = target(t, ρ)` with per-step control synthesis.
///
/// Every RK4 stage checks that the requested speed lies in the drift window
/// at the stage state; the first violation aborts with the offending
/// `(t, ρ, window)`. The control log records the solution synthesized at
/// each step start.
pub fn integrate_deterministic(
    model: &ModelManifold,
    target: &TargetLaw,
    rho0: f64,
    t_final: f64,
    dt: f64,
) -> Result<DeterministicRun, SdeError> {
    check_positive("t_final", t_final)?;
    check_positive("dt", dt)?;
    model.check_radius(rho0).map_err(SdeError::from)?;

    let speed_at = |t: f64, rho: f64| -> Result<(f64, ControlSolution), SdeError> {
        if rho <= 0.0 || rho >= model.r_max() {
            return Err(SdeError::DomainExit { t, rho });
        }
        let requested = target.eval(model, t, rho)?;
        match window::synthesize_controls(model, rho, requested) {
            Ok(sol) => Ok((sol.achieved_speed, sol)),
            Err(WindowError::InfeasibleTarget { target, lo, hi }) => Err(SdeError::WindowViolation {
                t,
                rho,
                target,
                lo,
                hi,
            }),
            Err(e) => Err(e.into()),
        }
    };

    let n_full = (t_final / dt).floor() as u64;
    let mut times = Vec::with_capacity(n_full as usize + 2);
    let mut values = Vec::with_capacity(n_full as usize + 2);
    let mut controls = Vec::with_capacity(n_full as usize + 1);
    let mut t = 0.0;
    let mut rho = rho0;
    times.push(t);
    values.push(rho);
    while t < t_final - 1e-12 * t_final {
        let h = dt.min(t_final - t);
        let (k1, sol) = speed_at(t, rho)?;
        let (k2, _) = speed_at(t + h / 2.0, rho + h / 2.0 * k1)?;
        let (k3, _) = speed_at(t + h / 2.0, rho + h / 2.0 * k2)?;
        let (k4, _) = speed_at(t + h, rho + h * k3)?;
        rho += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        t += h;
        if rho <= 0.0 || (model.r_max().is_finite() && rho >= model.r_max()) {
            return Err(SdeError::DomainExit { t, rho });
        }
        controls.push(sol);
        times.push(t);
        values.push(rho);
    }
    Ok(DeterministicRun {
        path: DistancePath {
            times,
            values,
            seed: 0,
            path_index: 0,
            terminated: Some(Termination {
                time: t,
                reason: TerminationReason::Completed,
            }),
        },
        controls,
    })
}

/// Euler–Maruyama simulation of the radial process
/// `dr = dβ + ½ A(r) dt` of a single Brownian particle.
pub fn radial_process(
    model: &ModelManifold,
    r0: f64,
    t_final: f64,
    dt: f64,
    seed: u64,
    n_paths: usize,
    record_every: usize,
) -> Result<Vec<DistancePath>, SdeError> {
    check_positive("t_final", t_final)?;
    check_positive("dt", dt)?;
    if n_paths == 0 || record_every == 0 {
        return Err(SdeError::Parameter {
            name: "n_paths/record_every",
            message: "must be at least 1".into(),
        });
    }
    model.check_radius(r0).map_err(SdeError::from)?;
    let r_max = model.r_max();
    let n_steps = (t_final / dt).round().max(1.0) as u64;
    (0..n_paths as u64)
        .into_par_iter()
        .map(|p| {
            let mut times = vec![0.0];
            let mut values = vec![r0];
            let mut r = r0;
            let mut terminated = None;
            for k in 0..n_steps {
                let (mean, _) = match model.mean_and_abs_sum(r) {
                    Ok(v) => v,
                    Err(_) => {
                        terminated = Some(Termination {
                            time: k as f64 * dt,
                            reason: TerminationReason::NonFinite,
                        });
                        break;
                    }
                };
                let next = r + 0.5 * mean * dt + dt.sqrt() * rng::normal(seed, p, k, 0);
                let t_next = (k + 1) as f64 * dt;
                if !next.is_finite() {
                    terminated = Some(Termination {
                        time: t_next,
                        reason: TerminationReason::NonFinite,
                    });
                    break;
                }
                r = next;
                let recorded = (k + 1) % record_every as u64 == 0;
                if recorded {
                    times.push(t_next);
                    values.push(r);
                }
                let reason = if r <= dt {
                    Some(TerminationReason::HitZero)
                } else if r_max.is_finite() && r >= r_max - dt {
                    Some(TerminationReason::HitCut)
                } else {
                    None
                };
                if let Some(reason) = reason {
                    terminated = Some(Termination {
                        time: t_next,
                        reason,
                    });
                    if !recorded {
                        times.push(t_next);
                        values.push(r);
                    }
                    break;
                }
            }
            let terminated = terminated.unwrap_or(Termination {
                time: n_steps as f64 * dt,
                reason: TerminationReason::Completed,
            });
            if terminated.reason == TerminationReason::Completed
                && *times.last().unwrap() < terminated.time
            {
                times.push(terminated.time);
                values.push(r);
            }
            Ok(DistancePath {
                times,
                values,
                seed,
                path_index: p,
                terminated: Some(terminated),
            })
        })
        .collect()
}

/// Least-squares slope of `ρ(t)` over the post-burn-in window.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlopeEstimate {
    pub slope: f64,
    pub stderr: f64,
}

/// Estimate the asymptotic speed of a completed path by regressing `ρ`
/// against `t` after discarding the first `burn_in_fraction` of the samples.
pub fn estimate_asymptotic_speed(
    path: &DistancePath,
    burn_in_fraction: f64,
) -> Result<SlopeEstimate, SdeError> {
    if !(0.0..=0.9).contains(&burn_in_fraction) {
        return Err(SdeError::Parameter {
            name: "burn_in_fraction",
            message: format!("must lie in [0, 0.9], got {burn_in_fraction}"),
        });
    }
    match &path.terminated {
        Some(t) if t.reason == TerminationReason::Completed => {}
        Some(t) => return Err(SdeError::PathNotCompleted(t.reason.as_str())),
        None => return Err(SdeError::PathNotCompleted("unterminated")),
    }
    let skip = (path.times.len() as f64 * burn_in_fraction).floor() as usize;
    let ts = &path.times[skip..];
    let xs = &path.values[skip..];
    if ts.len() < 10 {
        return Err(SdeError::PathTooShort(ts.len()));
    }
    let (slope, stderr) = stats::linear_fit(ts, xs);
    Ok(SlopeEstimate { slope, stderr })
}

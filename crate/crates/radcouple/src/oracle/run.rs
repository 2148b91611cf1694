//! Coupled geodesic random walk and binned drift/variance estimation.
//!
//! The walk discretizes stochastic development directly in the embedding:
//! per step, frames adapted to the connecting geodesic are re-derived, the
//! first particle moves by `exp_x(u(ΔB))`, the second by
//! `exp_y(v(J ΔB + K ΔW))`, with `ΔB, ΔW = √dt · noise`. Recording the true
//! distance before and after each step yields empirical drift `a(r)` and
//! quadratic-variation rate `b(r)` per radius bin, which the report puts
//! side by side with the reduced predictions `M(r)` and `σ²`.

use super::frame::FramePair;
use super::spaceform::{self, EmbeddedPoint, SpaceFormKind};
use super::OracleError;
use crate::coupling::{self, CouplingControl, CouplingMatrices};
use crate::geometry::ModelManifold;
use crate::rng;
use crate::sde::TerminationReason;
use rayon::prelude::*;
use std::collections::BTreeMap;

/// Bins with fewer samples than this are dropped from reports; their
/// standard errors would be meaningless.
pub const MIN_BIN_SAMPLES: u64 = 30;

/// Coupling specification accepted by the oracle.
#[derive(Debug, Clone)]
pub enum OracleCoupling {
    Control(CouplingControl),
    Matrices(CouplingMatrices),
}

impl From<CouplingControl> for OracleCoupling {
    fn from(c: CouplingControl) -> Self {
        OracleCoupling::Control(c)
    }
}

impl From<CouplingMatrices> for OracleCoupling {
    fn from(m: CouplingMatrices) -> Self {
        OracleCoupling::Matrices(m)
    }
}

impl OracleCoupling {
    fn into_completed(self, n: usize) -> Result<CouplingMatrices, OracleError> {
        let m = match self {
            OracleCoupling::Control(c) => coupling::assemble_j(&c, n)?,
            OracleCoupling::Matrices(m) => {
                if m.dim() != n {
                    return Err(coupling::CouplingError::DimensionMismatch {
                        control: m.dim(),
                        expected: n,
                    }
                    .into());
                }
                m
            }
        };
        if m.k().is_some() {
            Ok(m)
        } else {
            Ok(coupling::complete_k(m)?)
        }
    }
}

struct Stepper {
    kind: SpaceFormKind,
    n: usize,
    j: Vec<f64>,
    k: Option<Vec<f64>>,
    frames: FramePair,
    db: Vec<f64>,
    coeff: Vec<f64>,
    disp: Vec<f64>,
    scratch: Vec<f64>,
}

impl Stepper {
    fn new(kind: SpaceFormKind, matrices: &CouplingMatrices) -> Self {
        let n = matrices.dim();
        let flat = |m: &nalgebra::DMatrix<f64>| -> Vec<f64> {
            let mut out = vec![0.0; n * n];
            for row in 0..n {
                for col in 0..n {
                    out[row * n + col] = m[(row, col)];
                }
            }
            out
        };
        let k = matrices.k().map(flat);
        let k = match k {
            Some(kk) if kk.iter().all(|v| v.abs() < 1e-14) => None,
            other => other,
        };
        Stepper {
            kind,
            n,
            j: flat(matrices.j()),
            k,
            frames: FramePair::empty(n),
            db: vec![0.0; n],
            coeff: vec![0.0; n],
            disp: vec![0.0; n + 1],
            scratch: vec![0.0; n + 1],
        }
    }

    /// Advance both particles one step using the frames already built for
    /// the current configuration. Noise components `0..n` feed `ΔB`,
    /// components `n..2n` feed `ΔW`.
    fn advance(
        &mut self,
        x: &mut [f64],
        y: &mut [f64],
        dt: f64,
        seed: u64,
        path: u64,
        step: u64,
    ) {
        let sqrt_dt = dt.sqrt();
        let n = self.n;
        for i in 0..n {
            self.db[i] = sqrt_dt * rng::normal(seed, path, step, i as u64);
        }
        for row in 0..n {
            let mut c = 0.0;
            for col in 0..n {
                c += self.j[row * n + col] * self.db[col];
            }
            self.coeff[row] = c;
        }
        if let Some(k) = &self.k {
            for row in 0..n {
                let mut c = 0.0;
                for col in 0..n {
                    c += k[row * n + col]
                        * sqrt_dt
                        * rng::normal(seed, path, step, (n + col) as u64);
                }
                self.coeff[row] += c;
            }
        }

        // x moves along its frame by dB
        self.disp.iter_mut().for_each(|d| *d = 0.0);
        for i in 0..n {
            let e = self.frames.frame_at_x(i);
            for (d, ei) in self.disp.iter_mut().zip(e) {
                *d += self.db[i] * ei;
            }
        }
        spaceform::exp_map_into(self.kind, x, &self.disp, &mut self.scratch);
        x.copy_from_slice(&self.scratch);

        // y moves along its frame by J dB + K dW
        self.disp.iter_mut().for_each(|d| *d = 0.0);
        for i in 0..n {
            let e = self.frames.frame_at_y(i);
            for (d, ei) in self.disp.iter_mut().zip(e) {
                *d += self.coeff[i] * ei;
            }
        }
        spaceform::exp_map_into(self.kind, y, &self.disp, &mut self.scratch);
        y.copy_from_slice(&self.scratch);
    }
}

/// One coupled step of the geodesic random walk.
///
/// `noise_b` and `noise_w` are standard-normal n-vectors; the increments
/// used are `√dt` times them. Returns the updated pair re-projected onto
/// the embedding.
pub fn step_coupled(
    kind: SpaceFormKind,
    x: &EmbeddedPoint,
    y: &EmbeddedPoint,
    matrices: &CouplingMatrices,
    dt: f64,
    noise_b: &[f64],
    noise_w: &[f64],
) -> Result<(EmbeddedPoint, EmbeddedPoint), OracleError> {
    let n = x.dim();
    if matrices.dim() != n || noise_b.len() != n || noise_w.len() != n {
        return Err(coupling::CouplingError::DimensionMismatch {
            control: matrices.dim(),
            expected: n,
        }
        .into());
    }
    let rho = spaceform::distance(kind, x, y)?;
    if kind == SpaceFormKind::Sphere && rho > kind.r_max() - 10.0 * dt.sqrt() {
        return Err(OracleError::CutLocus { rho });
    }
    let frames = FramePair::new(kind, x, y)?;
    let sqrt_dt = dt.sqrt();

    let mut xc = x.coords().to_vec();
    let mut yc = y.coords().to_vec();
    let mut disp = vec![0.0; n + 1];
    let mut out = vec![0.0; n + 1];

    for i in 0..n {
        let e = frames.frame_at_x(i);
        for (d, ei) in disp.iter_mut().zip(e) {
            *d += sqrt_dt * noise_b[i] * ei;
        }
    }
    spaceform::exp_map_into(kind, &xc, &disp, &mut out);
    xc.copy_from_slice(&out);

    disp.iter_mut().for_each(|d| *d = 0.0);
    for i in 0..n {
        let mut c = 0.0;
        for col in 0..n {
            c += matrices.j()[(i, col)] * sqrt_dt * noise_b[col];
        }
        if let Some(k) = matrices.k() {
            for col in 0..n {
                c += k[(i, col)] * sqrt_dt * noise_w[col];
            }
        }
        let e = frames.frame_at_y(i);
        for (d, ei) in disp.iter_mut().zip(e) {
            *d += c * ei;
        }
    }
    spaceform::exp_map_into(kind, y.coords(), &disp, &mut out);
    yc.copy_from_slice(&out);

    Ok((
        EmbeddedPoint::from_raw(xc),
        EmbeddedPoint::from_raw(yc),
    ))
}

#[derive(Debug, Clone, Copy, Default)]
struct BinAccum {
    n: u64,
    sum_r: f64,
    sum_dr: f64,
    sum_dr2: f64,
}

impl BinAccum {
    fn record(&mut self, r: f64, dr: f64) {
        self.n += 1;
        self.sum_r += r;
        self.sum_dr += dr;
        self.sum_dr2 += dr * dr;
    }

    fn merge(&mut self, other: &BinAccum) {
        self.n += other.n;
        self.sum_r += other.sum_r;
        self.sum_dr += other.sum_dr;
        self.sum_dr2 += other.sum_dr2;
    }
}

/// Per-bin empirical estimates next to the reduced predictions.
#[derive(Debug, Clone, Copy)]
pub struct OracleBinRow {
    /// Mean radius of the samples in the bin.
    pub r_mean: f64,
    /// Empirical drift `E[Δρ]/dt` with standard error.
    pub drift_est: f64,
    pub drift_se: f64,
    /// Empirical QV rate `Var[Δρ]/dt` with (normal-theory) standard error.
    pub qv_est: f64,
    pub qv_se: f64,
    /// Reduced drift prediction `A(r) − tr(Jᵀ S_r)` at `r_mean`.
    pub m_pred: f64,
    /// Reduced QV prediction `σ²` of the coupling.
    pub sigma2_pred: f64,
    pub n_samples: u64,
}

/// Outcome of an oracle run.
#[derive(Debug, Clone)]
pub struct OracleReport {
    pub kind: SpaceFormKind,
    pub dim: usize,
    pub dt: f64,
    pub bin_width: f64,
    pub n_paths: usize,
    pub rows: Vec<OracleBinRow>,
    pub n_completed: usize,
    pub n_hit_zero: usize,
    pub n_hit_cut: usize,
}

impl OracleReport {
    /// Row whose mean radius is closest to `r`.
    pub fn row_nearest(&self, r: f64) -> Option<&OracleBinRow> {
        self.rows.iter().min_by(|a, b| {
            (a.r_mean - r)
                .abs()
                .partial_cmp(&(b.r_mean - r).abs())
                .unwrap()
        })
    }
}

/// Simulate coupled Brownian particles on a space form and report binned
/// drift / quadratic-variation estimates of the true distance.
///
/// Paths start at distance `r0`, absorb at `ρ ≤ dt`, and stop near the cut
/// locus on the sphere (`ρ ≥ π − 10√dt`). Bin width is
/// `max(0.05, 5√dt)`. The run is deterministic in `(seed, parameters)`
/// regardless of thread count.
#[allow(clippy::too_many_arguments)]
pub fn run_oracle(
    kind: SpaceFormKind,
    n: usize,
    coupling: OracleCoupling,
    r0: f64,
    t_final: f64,
    dt: f64,
    seed: u64,
    n_paths: usize,
) -> Result<OracleReport, OracleError> {
    if n < 2 {
        return Err(OracleError::Parameter {
            name: "n",
            message: format!("dimension must be at least 2, got {n}"),
        });
    }
    if !(dt > 0.0) || !(t_final >= dt) || n_paths == 0 {
        return Err(OracleError::Parameter {
            name: "t_final/dt/n_paths",
            message: "need dt > 0, t_final >= dt, n_paths >= 1".into(),
        });
    }
    if r0 <= 0.0 || r0 >= kind.r_max() {
        return Err(OracleError::CutLocus { rho: r0 });
    }
    let matrices = coupling.into_completed(n)?;
    let model = ModelManifold::space_form(kind.curvature(), n)?;
    let x0 = EmbeddedPoint::base(kind, n);
    let y0 = EmbeddedPoint::at_distance(kind, n, r0)?;
    let n_steps = (t_final / dt).round().max(1.0) as u64;
    let bin_width = (5.0 * dt.sqrt()).max(0.05);
    let cut_guard = kind.r_max() - 10.0 * dt.sqrt();

    let per_path: Vec<Result<(BTreeMap<i64, BinAccum>, TerminationReason), OracleError>> =
        (0..n_paths as u64)
            .into_par_iter()
            .map(|path| {
                let mut stepper = Stepper::new(kind, &matrices);
                let mut x = x0.coords().to_vec();
                let mut y = y0.coords().to_vec();
                let mut bins: BTreeMap<i64, BinAccum> = BTreeMap::new();
                let mut reason = TerminationReason::Completed;
                for step in 0..n_steps {
                    let rho = match stepper.frames.rebuild(kind, &x, &y) {
                        Ok(rho) => rho,
                        Err(OracleError::CutLocus { .. }) => {
                            reason = TerminationReason::HitCut;
                            break;
                        }
                        Err(OracleError::CoincidentPoints) => {
                            reason = TerminationReason::HitZero;
                            break;
                        }
                        Err(e) => return Err(e),
                    };
                    if rho <= dt {
                        reason = TerminationReason::HitZero;
                        break;
                    }
                    if rho >= cut_guard {
                        reason = TerminationReason::HitCut;
                        break;
                    }
                    stepper.advance(&mut x, &mut y, dt, seed, path, step);
                    let rho_next = match spaceform::distance_raw(kind, &x, &y) {
                        Ok(r) => r,
                        Err(OracleError::CutLocus { .. }) => {
                            reason = TerminationReason::HitCut;
                            break;
                        }
                        Err(e) => return Err(e),
                    };
                    let bin = (rho / bin_width).floor() as i64;
                    bins.entry(bin).or_default().record(rho, rho_next - rho);
                }
                Ok((bins, reason))
            })
            .collect();

    let mut merged: BTreeMap<i64, BinAccum> = BTreeMap::new();
    let mut n_completed = 0;
    let mut n_hit_zero = 0;
    let mut n_hit_cut = 0;
    for item in per_path {
        let (bins, reason) = item?;
        for (idx, acc) in bins {
            merged.entry(idx).or_default().merge(&acc);
        }
        match reason {
            TerminationReason::Completed => n_completed += 1,
            TerminationReason::HitZero => n_hit_zero += 1,
            TerminationReason::HitCut => n_hit_cut += 1,
            TerminationReason::NonFinite => {}
        }
    }

    let sigma2_pred = matrices.reduced_sigma_squared();
    let mut rows = Vec::with_capacity(merged.len());
    for acc in merged.values() {
        if acc.n < MIN_BIN_SAMPLES {
            continue;
        }
        let nf = acc.n as f64;
        let r_mean = acc.sum_r / nf;
        let mean_dr = acc.sum_dr / nf;
        let var = ((acc.sum_dr2 - nf * mean_dr * mean_dr) / (nf - 1.0)).max(0.0);
        let m_pred = model
            .principal_curvatures(r_mean)
            .ok()
            .and_then(|s| coupling::drift_of_matrices(&matrices, &s).ok())
            .unwrap_or(f64::NAN);
        rows.push(OracleBinRow {
            r_mean,
            drift_est: mean_dr / dt,
            drift_se: (var / nf).sqrt() / dt,
            qv_est: var / dt,
            qv_se: var / dt * (2.0 / (nf - 1.0)).sqrt(),
            m_pred,
            sigma2_pred,
            n_samples: acc.n,
        });
    }

    Ok(OracleReport {
        kind,
        dim: n,
        dt,
        bin_width,
        n_paths,
        rows,
        n_completed,
        n_hit_zero,
        n_hit_cut,
    })
}

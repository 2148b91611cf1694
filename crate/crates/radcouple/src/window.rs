//! The sharp drift window and its attainment.
//!
//! For a coadapted coupling on a radial model geometry, the deterministic
//! rate of the inter-particle distance is confined to
//! `[A(r) − Σ|κ_i(r)|, A(r) + Σ|κ_i(r)|]`, and every speed in that interval
//! is attained by choosing tangential correlation eigenvalues
//! `α_i ∈ [−1, 1]` with `Σ mult·κ_i·α_i = A(r) − target`. This module
//! evaluates the window across the model zoo, compares it with the classical
//! constant-curvature windows of Pascu–Popescu type, synthesizes attaining
//! controls, and analyzes fixed-distance feasibility and asymptotic speeds.

use crate::geometry::{GeomError, ModelManifold};
use thiserror::Error;

/// Slack for window-membership tests: distinguishes floating-point error
/// from genuine infeasibility so endpoint targets do not flap.
pub const WINDOW_SLACK: f64 = 1e-9;

/// Slack for the fixed-distance feasibility inequality `A ≥ Σ|κ|`.
pub const FEASIBILITY_SLACK: f64 = 1e-12;

/// Relative agreement required between the two asymptotic probe radii.
pub const ASYMPTOTIC_AGREEMENT: f64 = 1e-6;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum WindowError {
    #[error(transparent)]
    Geometry(#[from] GeomError),
    #[error("target speed {target} outside the window [{lo}, {hi}]")]
    InfeasibleTarget { target: f64, lo: f64, hi: f64 },
    #[error("spectrum is degenerate (all κ_i = 0) but target {target} differs from A = {mean}")]
    DegenerateSpectrum { target: f64, mean: f64 },
    #[error("no finite asymptotic limit: probes at r={r1} and r={r2} give ({a1}, {s1}) vs ({a2}, {s2})")]
    NoFiniteLimit {
        r1: f64,
        r2: f64,
        a1: f64,
        s1: f64,
        a2: f64,
        s2: f64,
    },
    #[error("asymptotic analysis requires a noncompact model")]
    CompactModel,
}

/// Admissible deterministic speeds for the distance at radius `r`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriftWindow {
    pub r: f64,
    /// `A(r) − Σ|κ_i(r)|`, attained by the synchronous choice `α_i = sgn κ_i`.
    pub lo: f64,
    /// `A(r) + Σ|κ_i(r)|`, attained by the reflection choice `α_i = −sgn κ_i`.
    pub hi: f64,
}

impl DriftWindow {
    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, speed: f64, slack: f64) -> bool {
        speed >= self.lo - slack && speed <= self.hi + slack
    }
}

/// Tangential correlation eigenvalues realizing a target speed.
#[derive(Debug, Clone, PartialEq)]
pub struct ControlSolution {
    /// `(value, multiplicity)` blocks matching the curvature spectrum.
    pub alphas: Vec<(f64, u32)>,
    /// Uniform fraction used: `α_i = λ·sgn(κ_i)`.
    pub lambda: f64,
    pub target_speed: f64,
    pub achieved_speed: f64,
}

/// Drift window of `model` at radius `r`.
pub fn window(model: &ModelManifold, r: f64) -> Result<DriftWindow, WindowError> {
    let (mean, abs_sum) = model.mean_and_abs_sum(r)?;
    Ok(DriftWindow {
        r,
        lo: mean - abs_sum,
        hi: mean + abs_sum,
    })
}

/// Constant-curvature window in the normalization of Pascu–Popescu
/// (J. Theor. Probab. 31, 2018).
///
/// - `K = 0`: `[0, 2(n−1)/ρ]`
/// - `K = b² > 0`: `[−(n−1)b·tan(bρ/2), −(n−1)b·tan(bρ/2) + 2(n−1)b·cot(bρ)]`
/// - `K = −b² < 0`: `[(n−1)b·tanh(bρ/2), (n−1)b·tanh(bρ/2) + 2(n−1)b·coth(bρ)]`
pub fn pp_window(curvature: f64, dim: usize, rho: f64) -> Result<(f64, f64), WindowError> {
    if rho <= 0.0 {
        return Err(GeomError::NonPositiveParameter {
            name: "rho",
            value: rho,
        }
        .into());
    }
    let tangential = (dim - 1) as f64;
    if curvature == 0.0 {
        return Ok((0.0, 2.0 * tangential / rho));
    }
    if curvature > 0.0 {
        let b = curvature.sqrt();
        let limit = std::f64::consts::PI / b;
        if rho >= limit {
            return Err(GeomError::BeyondConjugateRadius {
                curvature,
                r: rho,
                limit,
            }
            .into());
        }
        let half = b * rho / 2.0;
        if half.cos().abs() < 1e-300 || (b * rho).sin().abs() < 1e-300 {
            return Err(GeomError::TrigPole { r: rho }.into());
        }
        let lo = -tangential * b * half.tan();
        let hi = lo + 2.0 * tangential * b * (b * rho).cos() / (b * rho).sin();
        Ok((lo, hi))
    } else {
        let b = (-curvature).sqrt();
        let lo = tangential * b * (b * rho / 2.0).tanh();
        let hi = lo + 2.0 * tangential * b * (b * rho).cosh() / (b * rho).sinh();
        Ok((lo, hi))
    }
}

/// One row of a PP-vs-general window comparison.
#[derive(Debug, Clone, Copy)]
pub struct WindowInclusionRow {
    pub rho: f64,
    pub pp_lo: f64,
    pub pp_hi: f64,
    pub gen_lo: f64,
    pub gen_hi: f64,
    /// `pp_lo ≥ gen_lo` within slack.
    pub lo_contained: bool,
    /// `pp_hi ≤ gen_hi` within slack.
    pub hi_contained: bool,
    /// `pp_lo − gen_lo`.
    pub lo_gap: f64,
    /// `gen_hi − pp_hi`.
    pub hi_gap: f64,
}

/// Numerical comparison of the constant-curvature windows against the
/// general window on a grid. The two families do not coincide algebraically;
/// the report records where containment holds and by what margin.
#[derive(Debug, Clone)]
pub struct WindowInclusionReport {
    pub curvature: f64,
    pub dim: usize,
    pub rows: Vec<WindowInclusionRow>,
}

impl WindowInclusionReport {
    /// PP window contained in the general window at every grid point.
    pub fn contained(&self) -> bool {
        self.rows.iter().all(|r| r.lo_contained && r.hi_contained)
    }

    pub fn lo_contained_everywhere(&self) -> bool {
        self.rows.iter().all(|r| r.lo_contained)
    }

    pub fn hi_contained_everywhere(&self) -> bool {
        self.rows.iter().all(|r| r.hi_contained)
    }
}

pub fn window_inclusion_report(
    curvature: f64,
    dim: usize,
    grid: &[f64],
) -> Result<WindowInclusionReport, WindowError> {
    let model = ModelManifold::space_form(curvature, dim)?;
    let mut rows = Vec::with_capacity(grid.len());
    for &rho in grid {
        let (pp_lo, pp_hi) = pp_window(curvature, dim, rho)?;
        let general = window(&model, rho)?;
        rows.push(WindowInclusionRow {
            rho,
            pp_lo,
            pp_hi,
            gen_lo: general.lo,
            gen_hi: general.hi,
            lo_contained: pp_lo >= general.lo - WINDOW_SLACK,
            hi_contained: pp_hi <= general.hi + WINDOW_SLACK,
            lo_gap: pp_lo - general.lo,
            hi_gap: general.hi - pp_hi,
        });
    }
    Ok(WindowInclusionReport {
        curvature,
        dim,
        rows,
    })
}

/// Synthesize tangential eigenvalues realizing `target_speed` at radius `r`.
///
/// Uses the uniform-fraction rule: with `T = A(r) − target` and
/// `λ = T / Σ|κ|`, set `α_i = λ·sgn(κ_i)`; directions with `κ_i = 0` get the
/// synchronous value `α_i = 1`. The rule is continuous in the target and
/// attains both endpoints exactly (`λ = ±1`).
pub fn synthesize_controls(
    model: &ModelManifold,
    r: f64,
    target_speed: f64,
) -> Result<ControlSolution, WindowError> {
    let entries = model.principal_curvatures(r)?;
    let mean = entries.mean();
    let abs_sum = entries.abs_sum();
    let lo = mean - abs_sum;
    let hi = mean + abs_sum;
    if target_speed < lo - WINDOW_SLACK || target_speed > hi + WINDOW_SLACK {
        return Err(WindowError::InfeasibleTarget {
            target: target_speed,
            lo,
            hi,
        });
    }
    if abs_sum == 0.0 {
        if (target_speed - mean).abs() > WINDOW_SLACK {
            return Err(WindowError::DegenerateSpectrum {
                target: target_speed,
                mean,
            });
        }
        let alphas = entries
            .entries()
            .iter()
            .map(|e| (1.0, e.multiplicity))
            .collect();
        return Ok(ControlSolution {
            alphas,
            lambda: 0.0,
            target_speed,
            achieved_speed: mean,
        });
    }
    let lambda = ((mean - target_speed) / abs_sum).clamp(-1.0, 1.0);
    let alphas: Vec<(f64, u32)> = entries
        .entries()
        .iter()
        .map(|e| {
            let value = if e.kappa == 0.0 {
                1.0
            } else {
                lambda * e.kappa.signum()
            };
            (value, e.multiplicity)
        })
        .collect();
    let achieved_speed = mean
        - alphas
            .iter()
            .zip(entries.entries())
            .map(|(&(a, m), e)| m as f64 * e.kappa * a)
            .sum::<f64>();
    Ok(ControlSolution {
        alphas,
        lambda,
        target_speed,
        achieved_speed,
    })
}

/// Feasibility of a constant-distance coupling at `r0`.
#[derive(Debug, Clone)]
pub struct FixedDistance {
    pub feasible: bool,
    /// `A(r0) − Σ|κ(r0)|`; zero at the equality (rigidity) case.
    pub equality_defect: f64,
    /// Zero-speed controls when feasible.
    pub controls: Option<ControlSolution>,
}

/// A fixed-distance coupling at `r0` exists iff `A(r0) ≥ Σ|κ_i(r0)|`, i.e.
/// the window contains zero from below.
pub fn fixed_distance_feasible(
    model: &ModelManifold,
    r0: f64,
) -> Result<FixedDistance, WindowError> {
    let (mean, abs_sum) = model.mean_and_abs_sum(r0)?;
    let defect = mean - abs_sum;
    let feasible = mean >= abs_sum - FEASIBILITY_SLACK;
    let controls = if feasible {
        Some(synthesize_controls(model, r0, 0.0)?)
    } else {
        None
    };
    Ok(FixedDistance {
        feasible,
        equality_defect: defect,
        controls,
    })
}

/// Asymptotic speed interval for deterministic couplings escaping to
/// infinity, optionally shifted by a radial potential slope.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticInterval {
    pub lo: f64,
    pub hi: f64,
    pub a_inf: f64,
    pub sigma_inf: f64,
}

/// Detect `A_∞` and `Σ_∞ = Σ|κ_∞|` numerically and return
/// `[A_∞ − slope − Σ_∞, A_∞ − slope + Σ_∞]`.
///
/// The limits are probed at `r = 40/b` and `r = 80/b` for the model's
/// curvature scale `b` and must agree to `1e-6`; a confining potential
/// (`potential_slope > 0`) suppresses escape.
pub fn asymptotic_interval(
    model: &ModelManifold,
    potential_slope: f64,
) -> Result<AsymptoticInterval, WindowError> {
    let scale = model.asymptotic_scale().ok_or(WindowError::CompactModel)?;
    let r1 = 40.0 / scale;
    let r2 = 80.0 / scale;
    let (a1, s1) = model.mean_and_abs_sum(r1)?;
    let (a2, s2) = model.mean_and_abs_sum(r2)?;
    if (a1 - a2).abs() > ASYMPTOTIC_AGREEMENT || (s1 - s2).abs() > ASYMPTOTIC_AGREEMENT {
        return Err(WindowError::NoFiniteLimit {
            r1,
            r2,
            a1,
            s1,
            a2,
            s2,
        });
    }
    Ok(AsymptoticInterval {
        lo: a2 - potential_slope - s2,
        hi: a2 - potential_slope + s2,
        a_inf: a2,
        sigma_inf: s2,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::RossType;

    const COTH_1: f64 = 1.3130352854993312;

    #[test]
    fn euclidean_window() {
        let model = ModelManifold::space_form(0.0, 3).unwrap();
        let w = window(&model, 2.0).unwrap();
        assert!((w.lo - 0.0).abs() < 1e-15);
        assert!((w.hi - 2.0).abs() < 1e-15);
    }

    #[test]
    fn sphere_window_past_equator() {
        let model = ModelManifold::space_form(1.0, 2).unwrap();
        let w = window(&model, 3.0 * std::f64::consts::FRAC_PI_4).unwrap();
        assert!((w.lo + 2.0).abs() < 1e-12);
        assert!(w.hi.abs() < 1e-12);
    }

    #[test]
    fn hyperbolic_window() {
        let model = ModelManifold::space_form(-1.0, 2).unwrap();
        let w = window(&model, 1.0).unwrap();
        assert!(w.lo.abs() < 1e-12);
        assert!((w.hi - 2.0 * COTH_1).abs() < 1e-9);
    }

    #[test]
    fn window_width_is_twice_abs_sum() {
        let model =
            ModelManifold::rank_one_symmetric(RossType::Compact, 1.0, 2, 1, 4).unwrap();
        for r in [0.3, 0.7, 1.2, 1.5] {
            let w = window(&model, r).unwrap();
            let s = model.principal_curvatures(r).unwrap();
            assert!((w.width() - 2.0 * s.abs_sum()).abs() < 1e-12 * s.abs_sum().max(1.0));
            assert!(w.lo <= s.mean() && s.mean() <= w.hi);
        }
    }

    #[test]
    fn pp_window_values() {
        // flat
        let (lo, hi) = pp_window(0.0, 3, 4.0).unwrap();
        assert_eq!(lo, 0.0);
        assert!((hi - 1.0).abs() < 1e-15);
        // spherical, degenerate at the equator
        let (lo, hi) = pp_window(1.0, 2, std::f64::consts::FRAC_PI_2).unwrap();
        assert!((lo + 1.0).abs() < 1e-14);
        assert!((hi + 1.0).abs() < 1e-14);
        // hyperbolic at rho = 2; endpoints evaluated independently
        let (lo, hi) = pp_window(-1.0, 2, 2.0).unwrap();
        assert!((lo - 0.7615941559557649).abs() < 1e-12);
        assert!((hi - 2.8362235974108611).abs() < 1e-12);
    }

    #[test]
    fn inclusion_structure_by_curvature_sign() {
        // flat: the two windows coincide
        let flat = window_inclusion_report(0.0, 3, &[4.0]).unwrap();
        assert!(flat.contained());
        assert!(flat.rows[0].lo_gap.abs() < 1e-12 && flat.rows[0].hi_gap.abs() < 1e-12);

        // hyperbolic: contained at the lower endpoint, pokes out above
        let hyper = window_inclusion_report(-1.0, 2, &[1.0]).unwrap();
        assert!(hyper.lo_contained_everywhere());
        assert!(hyper.rows[0].pp_lo > 0.0);
        assert!(!hyper.hi_contained_everywhere());

        // spherical: contained at the upper endpoint, pokes out below
        let grid: Vec<f64> = (1..30).map(|i| i as f64 * 0.1).collect();
        let sphere = window_inclusion_report(1.0, 2, &grid).unwrap();
        assert!(sphere.hi_contained_everywhere());
        assert!(!sphere.lo_contained_everywhere());
    }

    #[test]
    fn synthesize_attains_targets() {
        // S^3 at pi/4: A = 2, target 0 forces lambda = 1, alpha = (1, 1)
        let sphere = ModelManifold::space_form(1.0, 3).unwrap();
        let sol = synthesize_controls(&sphere, std::f64::consts::FRAC_PI_4, 0.0).unwrap();
        assert!((sol.lambda - 1.0).abs() < 1e-12);
        for &(a, _) in &sol.alphas {
            assert!((a - 1.0).abs() < 1e-12);
        }
        assert!(sol.achieved_speed.abs() < 1e-10);

        // upper endpoint is the reflection choice
        let hyper = ModelManifold::space_form(-1.0, 2).unwrap();
        let w = window(&hyper, 1.0).unwrap();
        let sol = synthesize_controls(&hyper, 1.0, w.hi).unwrap();
        assert!((sol.lambda + 1.0).abs() < 1e-12);
        assert!((sol.achieved_speed - w.hi).abs() < 1e-10);

        // target = A forces lambda = 0
        let sol = synthesize_controls(&hyper, 1.0, COTH_1).unwrap();
        assert!(sol.lambda.abs() < 1e-9);
        assert!((sol.achieved_speed - COTH_1).abs() < 1e-9);
    }

    #[test]
    fn synthesize_rejects_outside_window() {
        let flat = ModelManifold::space_form(0.0, 2).unwrap();
        let err = synthesize_controls(&flat, 1.0, 10.0).unwrap_err();
        assert!(matches!(err, WindowError::InfeasibleTarget { .. }));
    }

    #[test]
    fn synthesize_is_monotone_in_target() {
        let model =
            ModelManifold::rank_one_symmetric(RossType::Noncompact, 1.0, 2, 1, 4).unwrap();
        let w = window(&model, 1.5).unwrap();
        let mut last_lambda = f64::INFINITY;
        for i in 0..=10 {
            let target = w.lo + w.width() * i as f64 / 10.0;
            let sol = synthesize_controls(&model, 1.5, target).unwrap();
            assert!(sol.lambda < last_lambda);
            assert!((sol.achieved_speed - target).abs() < 1e-10);
            last_lambda = sol.lambda;
        }
    }

    #[test]
    fn fixed_distance_cases() {
        // S^3 below the equator: equality case
        let sphere = ModelManifold::space_form(1.0, 3).unwrap();
        let fd = fixed_distance_feasible(&sphere, 1.0).unwrap();
        assert!(fd.feasible);
        assert!(fd.equality_defect.abs() < 1e-12);
        let sol = fd.controls.unwrap();
        for &(a, _) in &sol.alphas {
            assert!((a - 1.0).abs() < 1e-12);
        }

        // H^2 at r0 = 2: equality again
        let hyper = ModelManifold::space_form(-1.0, 2).unwrap();
        let fd = fixed_distance_feasible(&hyper, 2.0).unwrap();
        assert!(fd.feasible);
        assert!(fd.equality_defect.abs() < 1e-12);

        // sphere past the equator: A < 0 < |kappa| sum
        let circle = ModelManifold::space_form(1.0, 2).unwrap();
        let fd = fixed_distance_feasible(&circle, 3.0 * std::f64::consts::FRAC_PI_4).unwrap();
        assert!(!fd.feasible);
        assert!(fd.controls.is_none());
    }

    #[test]
    fn feasibility_matches_window_sign() {
        // lo >= 0 iff A >= abs_sum, across a model/radius grid
        let models = [
            ModelManifold::space_form(1.0, 3).unwrap(),
            ModelManifold::space_form(-1.0, 4).unwrap(),
            ModelManifold::rank_one_symmetric(RossType::Compact, 1.0, 2, 1, 4).unwrap(),
            ModelManifold::perturbed_hyperbolic(1.0, -0.8, 3).unwrap(),
        ];
        for model in &models {
            let hi = model.r_max().min(6.0) - 0.05;
            let mut r = 0.1;
            while r < hi {
                let w = window(model, r).unwrap();
                let fd = fixed_distance_feasible(model, r).unwrap();
                assert_eq!(fd.feasible, w.lo >= -FEASIBILITY_SLACK, "r = {r}");
                r += 0.13;
            }
        }
    }

    #[test]
    fn asymptotic_intervals() {
        // H^3: A_inf = Sigma_inf = 2, interval [0, 4]
        let hyper = ModelManifold::space_form(-1.0, 3).unwrap();
        let iv = asymptotic_interval(&hyper, 0.0).unwrap();
        assert!((iv.a_inf - 2.0).abs() < 1e-9);
        assert!((iv.lo - 0.0).abs() < 1e-9);
        assert!((iv.hi - 4.0).abs() < 1e-9);

        // Euclidean: limit 0
        let flat = ModelManifold::space_form(0.0, 2).unwrap();
        let iv = asymptotic_interval(&flat, 0.0).unwrap();
        assert!(iv.lo.abs() < 1e-6 && iv.hi.abs() < 1e-6);

        // potential slope shifts the interval
        let iv = asymptotic_interval(&hyper, 0.5).unwrap();
        assert!((iv.lo + 0.5).abs() < 1e-9);
        assert!((iv.hi - 3.5).abs() < 1e-9);

        // compact models are rejected
        let sphere = ModelManifold::space_form(1.0, 3).unwrap();
        assert!(matches!(
            asymptotic_interval(&sphere, 0.0),
            Err(WindowError::CompactModel)
        ));
    }

    #[test]
    fn asymptotic_interval_for_noncompact_ross() {
        // A_inf = Sigma_inf = alpha (m_alpha + 2 m_2alpha); lo = 0.
        let mut state = 9u64;
        for _ in 0..50 {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1);
            let alpha = 0.25 + (state >> 40) as f64 / 2f64.powi(24) * 3.0;
            let m_alpha = 1 + (state % 4) as u32;
            let m_2alpha = ((state >> 8) % 3) as u32;
            let dim = (m_alpha + m_2alpha + 1) as usize;
            let model = ModelManifold::rank_one_symmetric(
                RossType::Noncompact,
                alpha,
                m_alpha,
                m_2alpha,
                dim,
            )
            .unwrap();
            let iv = asymptotic_interval(&model, 0.0).unwrap();
            let expected = alpha * (m_alpha as f64 + 2.0 * m_2alpha as f64);
            assert!((iv.a_inf - expected).abs() < 1e-6);
            assert!((iv.sigma_inf - expected).abs() < 1e-6);
            assert!(iv.lo.abs() < 1e-6);
        }
    }
}

//! Generalized trigonometric ratios and comparison certificates.

use super::{GeomError, ModelManifold};

/// Absolute tolerance for comparison-theorem certificates. Closed forms in
/// double precision justify a tight band.
pub const COMPARISON_TOL: f64 = 1e-9;

/// Below `|K|·r² = 1e-8` the exact branches lose digits to cancellation at
/// the flat limit; a short power series is continuous across K = 0.
const SERIES_THRESHOLD: f64 = 1e-8;

/// Solution of `y'' + K y = 0` with `y(0)=0, y'(0)=1`:
/// `sin(√K r)/√K`, `r`, or `sinh(√−K r)/√−K` depending on the sign of K.
pub fn generalized_sin(curvature: f64, r: f64) -> Result<f64, GeomError> {
    check_conjugate(curvature, r)?;
    let u = curvature * r * r;
    if u.abs() < SERIES_THRESHOLD {
        // sin(x)/x and sinh(x)/x share one analytic series in u = K r².
        return Ok(r * (1.0 - u / 6.0 + u * u / 120.0));
    }
    if curvature > 0.0 {
        let sq = curvature.sqrt();
        Ok((sq * r).sin() / sq)
    } else {
        let sq = (-curvature).sqrt();
        Ok((sq * r).sinh() / sq)
    }
}

/// Logarithmic derivative of [`generalized_sin`]:
/// `√K·cot(√K r)`, `1/r`, or `√−K·coth(√−K r)`.
pub fn generalized_cot(curvature: f64, r: f64) -> Result<f64, GeomError> {
    check_conjugate(curvature, r)?;
    let u = curvature * r * r;
    if u.abs() < SERIES_THRESHOLD {
        // x·cot(x) and x·coth(x) also share one series in u.
        return Ok((1.0 - u / 3.0 - u * u / 45.0) / r);
    }
    if curvature > 0.0 {
        let sq = curvature.sqrt();
        let x = sq * r;
        Ok(sq * x.cos() / x.sin())
    } else {
        let sq = (-curvature).sqrt();
        let x = sq * r;
        Ok(sq * x.cosh() / x.sinh())
    }
}

fn check_conjugate(curvature: f64, r: f64) -> Result<(), GeomError> {
    if r <= 0.0 {
        return Err(GeomError::NonPositiveParameter {
            name: "r",
            value: r,
        });
    }
    if curvature > 0.0 {
        let limit = std::f64::consts::PI / curvature.sqrt();
        if r >= limit {
            return Err(GeomError::BeyondConjugateRadius {
                curvature,
                r,
                limit,
            });
        }
    }
    Ok(())
}

/// Radial sectional curvature recovered from umbilic shape data via the
/// Riccati identity: `K_rad = −κ' − κ²`.
pub fn radial_sectional_from_kappa(kappa: f64, kappa_prime: f64) -> f64 {
    -kappa_prime - kappa * kappa
}

/// One grid point of a comparison certificate.
#[derive(Debug, Clone)]
pub struct ComparisonPoint {
    pub r: f64,
    /// Smallest principal curvature at `r`.
    pub min_kappa: f64,
    /// Mean curvature A(r).
    pub mean: f64,
    /// Reference ratio `s'_{K0}/s_{K0}(r)` for the comparison curvature.
    pub bound: f64,
    /// Hessian comparison: `min κ_i ≥ bound − tol`.
    pub hessian_lower_ok: bool,
    /// Laplacian comparison: `A ≤ (n−1)·bound + tol`.
    pub laplacian_upper_ok: bool,
    /// Both inequalities hold with equality within tolerance; equality for
    /// all r characterizes the space form of curvature K0.
    pub rigidity: bool,
}

/// Certificate for Hessian/Laplacian comparison against curvature `K0`.
#[derive(Debug, Clone)]
pub struct ComparisonReport {
    pub reference_curvature: f64,
    pub points: Vec<ComparisonPoint>,
}

impl ComparisonReport {
    pub fn all_pass(&self) -> bool {
        self.points
            .iter()
            .all(|p| p.hessian_lower_ok && p.laplacian_upper_ok)
    }

    pub fn all_rigid(&self) -> bool {
        self.points.iter().all(|p| p.rigidity)
    }
}

/// Check the comparison inequalities for `model` against the space form of
/// curvature `K0` on a radius grid.
///
/// If the radial sectional curvature of the model is bounded above by `K0`,
/// every principal curvature must dominate `s'_{K0}/s_{K0}` and the mean
/// curvature must stay below `(n−1)·s'_{K0}/s_{K0}`. Equality within
/// [`COMPARISON_TOL`] is flagged as space-form rigidity.
pub fn comparison_certificate(
    model: &ModelManifold,
    reference_curvature: f64,
    r_grid: &[f64],
) -> Result<ComparisonReport, GeomError> {
    let tangential = (model.dim() - 1) as f64;
    let mut points = Vec::with_capacity(r_grid.len());
    for &r in r_grid {
        let spectrum = model.principal_curvatures(r)?;
        let bound = generalized_cot(reference_curvature, r)?;
        let min_kappa = spectrum
            .entries()
            .iter()
            .map(|e| e.kappa)
            .fold(f64::INFINITY, f64::min);
        let mean = spectrum.mean();
        let hessian_lower_ok = min_kappa >= bound - COMPARISON_TOL;
        let laplacian_upper_ok = mean <= tangential * bound + COMPARISON_TOL;
        let max_kappa = spectrum
            .entries()
            .iter()
            .map(|e| e.kappa)
            .fold(f64::NEG_INFINITY, f64::max);
        let rigidity = (min_kappa - bound).abs() <= COMPARISON_TOL
            && (max_kappa - bound).abs() <= COMPARISON_TOL
            && (mean - tangential * bound).abs() <= COMPARISON_TOL;
        points.push(ComparisonPoint {
            r,
            min_kappa,
            mean,
            bound,
            hessian_lower_ok,
            laplacian_upper_ok,
            rigidity,
        });
    }
    Ok(ComparisonReport {
        reference_curvature,
        points,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::WarpingProfile;

    #[test]
    fn generalized_sin_branches() {
        assert_eq!(generalized_sin(0.0, 2.5).unwrap(), 2.5);
        assert!((generalized_sin(1.0, std::f64::consts::FRAC_PI_2).unwrap() - 1.0).abs() < 1e-15);
        assert!((generalized_sin(-1.0, 1.0).unwrap() - 1.1752011936438014).abs() < 1e-12);
    }

    #[test]
    fn generalized_cot_branches() {
        assert_eq!(generalized_cot(0.0, 4.0).unwrap(), 0.25);
        assert!((generalized_cot(1.0, std::f64::consts::FRAC_PI_4).unwrap() - 1.0).abs() < 1e-14);
        assert!((generalized_cot(-1.0, 20.0).unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn series_branch_is_continuous_at_flat_limit() {
        // K ± 1e-12 at r = 1 takes the series branch on both sides; exact
        // branches a bit further out must agree with it to high order.
        let r = 1.0;
        let flat = generalized_cot(0.0, r).unwrap();
        for k in [1e-12, -1e-12] {
            assert!((generalized_cot(k, r).unwrap() - flat).abs() < 1e-12);
            assert!((generalized_sin(k, r).unwrap() - r).abs() < 1e-12);
        }
        // Series vs exact handoff around the threshold.
        for k in [9e-9, 2e-8, -9e-9, -2e-8] {
            let s = generalized_sin(k, r).unwrap();
            let exact = if k > 0.0 {
                (k.sqrt() * r).sin() / k.sqrt()
            } else {
                ((-k).sqrt() * r).sinh() / (-k).sqrt()
            };
            assert!((s - exact).abs() < 1e-14, "K={k}");
        }
    }

    #[test]
    fn conjugate_radius_is_rejected() {
        let err = generalized_sin(1.0, std::f64::consts::PI).unwrap_err();
        assert!(matches!(err, GeomError::BeyondConjugateRadius { .. }));
        assert!(generalized_cot(1.0, 3.14159).is_ok());
    }

    #[test]
    fn radial_sectional_identities() {
        // flat: kappa = 1/r at r = 1
        assert_eq!(radial_sectional_from_kappa(1.0, -1.0), 0.0);
        // sphere at r = pi/4: cot' = -csc^2 = -2
        assert!((radial_sectional_from_kappa(1.0, -2.0) - 1.0).abs() < 1e-15);
        // hyperbolic: coth' = 1 - coth^2
        let c = 1.0f64 / 1.0f64.tanh();
        assert!((radial_sectional_from_kappa(c, 1.0 - c * c) + 1.0).abs() < 1e-12);
    }

    #[test]
    fn certificate_flags_space_form_rigidity() {
        let sphere = ModelManifold::space_form(1.0, 3).unwrap();
        let report = comparison_certificate(&sphere, 1.0, &[0.5, 1.0]).unwrap();
        assert!(report.all_pass());
        assert!(report.all_rigid());
    }

    #[test]
    fn certificate_detects_one_sided_failure() {
        // Hyperbolic space vs K0 = 0: coth r > 1/r passes the Hessian bound,
        // but A = coth r exceeds (n-1)/r, so the Laplacian bound fails.
        let hyper = ModelManifold::space_form(-1.0, 2).unwrap();
        let report = comparison_certificate(&hyper, 0.0, &[1.0]).unwrap();
        let p = &report.points[0];
        assert!(p.hessian_lower_ok);
        assert!(!p.laplacian_upper_ok);
        assert!(!p.rigidity);
    }

    #[test]
    fn certificate_perturbed_profile_lower_bound() {
        // f = sinh r + 0.01 r^3 gives f'/f >= coth-like values > 1/r.
        let profile = WarpingProfile::perturbed_sinh(1.0, vec![(0.01, 3)]).unwrap();
        let model = ModelManifold::rot_sym(profile, 3).unwrap();
        let report = comparison_certificate(&model, 0.0, &[2.0]).unwrap();
        assert!(report.points[0].hessian_lower_ok);
    }
}

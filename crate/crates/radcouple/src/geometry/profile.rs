//! Closed library of warping profiles for rotationally symmetric models.
//!
//! Profiles come with analytically coded derivatives so that `f'/f` carries
//! no finite-difference noise, and every profile is checked against the
//! normalization `f(0) = 0, f'(0) = 1` when a model is built around it.

use super::{comparison, GeomError};

/// Warping profile `f` of a metric `dr² + f(r)² g_{S^{n-1}}`.
#[derive(Debug, Clone, PartialEq)]
pub enum WarpingProfile {
    /// `f = s_K`: sin/linear/sinh depending on the sign of the curvature.
    SpaceForm { curvature: f64 },
    /// `f(r) = sinh(b r)/b`, hyperbolic-type end.
    ScaledSinh { b: f64 },
    /// `f(r) = sin(b r)/b`, sphere-type closing profile.
    ScaledSin { b: f64 },
    /// `f(r) = sinh(b r)/b + Σ c_j r^{k_j}` with polynomial terms of degree
    /// ≥ 2 so the normalization at 0 is untouched.
    PerturbedSinh { b: f64, poly: Vec<(f64, u32)> },
}

impl WarpingProfile {
    /// Perturbed sinh profile; rejects non-positive `b` and degree < 2 terms
    /// (a linear term would break `f'(0) = 1`).
    pub fn perturbed_sinh(b: f64, poly: Vec<(f64, u32)>) -> Result<Self, GeomError> {
        if b <= 0.0 {
            return Err(GeomError::NonPositiveParameter { name: "b", value: b });
        }
        for &(coeff, degree) in &poly {
            if degree < 2 && coeff != 0.0 {
                return Err(GeomError::ProfileNormalization {
                    value_ratio: if degree == 0 { f64::INFINITY } else { 1.0 },
                    derivative: if degree == 1 { 1.0 + coeff } else { 1.0 },
                });
            }
        }
        Ok(WarpingProfile::PerturbedSinh { b, poly })
    }

    /// Profile value `f(r)`.
    pub fn value(&self, r: f64) -> Result<f64, GeomError> {
        match self {
            WarpingProfile::SpaceForm { curvature } => comparison::generalized_sin(*curvature, r),
            WarpingProfile::ScaledSinh { b } => Ok((b * r).sinh() / b),
            WarpingProfile::ScaledSin { b } => Ok((b * r).sin() / b),
            WarpingProfile::PerturbedSinh { b, poly } => {
                let mut f = (b * r).sinh() / b;
                for &(coeff, degree) in poly {
                    f += coeff * r.powi(degree as i32);
                }
                Ok(f)
            }
        }
    }

    /// Analytic derivative `f'(r)`.
    pub fn derivative(&self, r: f64) -> Result<f64, GeomError> {
        match self {
            WarpingProfile::SpaceForm { curvature } => {
                // s_K' = cos / 1 / cosh
                if *curvature > 0.0 {
                    Ok((curvature.sqrt() * r).cos())
                } else if *curvature == 0.0 {
                    Ok(1.0)
                } else {
                    Ok(((-curvature).sqrt() * r).cosh())
                }
            }
            WarpingProfile::ScaledSinh { b } => Ok((b * r).cosh()),
            WarpingProfile::ScaledSin { b } => Ok((b * r).cos()),
            WarpingProfile::PerturbedSinh { b, poly } => {
                let mut d = (b * r).cosh();
                for &(coeff, degree) in poly {
                    d += coeff * degree as f64 * r.powi(degree as i32 - 1);
                }
                Ok(d)
            }
        }
    }

    /// First zero of `f` beyond 0, if any; this bounds the radial domain.
    pub fn first_positive_zero(&self) -> Option<f64> {
        match self {
            WarpingProfile::SpaceForm { curvature } if *curvature > 0.0 => {
                Some(std::f64::consts::PI / curvature.sqrt())
            }
            WarpingProfile::ScaledSin { b } => Some(std::f64::consts::PI / b),
            _ => None,
        }
    }

    /// Whether the profile describes a noncompact end.
    pub fn is_noncompact(&self) -> bool {
        self.first_positive_zero().is_none()
    }

    /// Curvature scale used to pick asymptotic evaluation radii; `None` for
    /// compact profiles.
    pub fn asymptotic_scale(&self) -> Option<f64> {
        match self {
            WarpingProfile::SpaceForm { curvature } if *curvature > 0.0 => None,
            // Flat has no scale; probe far out so (n-1)/r is already tiny.
            WarpingProfile::SpaceForm { curvature } if *curvature == 0.0 => Some(1e-6),
            WarpingProfile::SpaceForm { curvature } => Some((-curvature).sqrt()),
            WarpingProfile::ScaledSinh { b } => Some(*b),
            WarpingProfile::ScaledSin { .. } => None,
            WarpingProfile::PerturbedSinh { b, .. } => Some(*b),
        }
    }

    /// Numeric check of `f(0) = 0, f'(0) = 1` at `h = 1e-8` within `1e-6`
    /// relative error.
    pub(super) fn check_normalization(&self) -> Result<(), GeomError> {
        let h = 1e-8;
        let value_ratio = self.value(h)? / h;
        let derivative = self.derivative(h)?;
        if (value_ratio - 1.0).abs() > 1e-6 || (derivative - 1.0).abs() > 1e-6 {
            return Err(GeomError::ProfileNormalization {
                value_ratio,
                derivative,
            });
        }
        Ok(())
    }
}

//! The model-manifold zoo.

use super::comparison::generalized_cot;
use super::spectrum::{CurvatureSpectrum, EntryBuf, SpectrumEntry};
use super::{GeomError, WarpingProfile};

/// Compact or noncompact rank-one symmetric type.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RossType {
    Compact,
    Noncompact,
}

/// Geometry family of a [`ModelManifold`].
#[derive(Debug, Clone, PartialEq)]
pub enum ModelKind {
    /// Constant sectional curvature.
    SpaceForm { curvature: f64 },
    /// Warped product `dr² + f(r)² g_{S^{n-1}}`.
    RotSym { profile: WarpingProfile },
    /// Two curvature branches `α·cot/coth(αr)` (multiplicity `m_alpha`) and
    /// `2α·cot/coth(2αr)` (multiplicity `m_2alpha`).
    RankOneSymmetric {
        ross: RossType,
        alpha: f64,
        m_alpha: u32,
        m_2alpha: u32,
    },
    /// Asymptotically hyperbolic end with a scalar exponential correction:
    /// `A(r) = (n−1)·b·coth(br) + c·e^{−2br}`, umbilic
    /// `κ(r) = b·coth(br) + c/(n−1)·e^{−2br}`.
    PerturbedHyperbolic { b: f64, c: f64 },
}

/// A radial model geometry: family, dimension, and cut radius.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelManifold {
    kind: ModelKind,
    dim: usize,
    r_max: f64,
}

impl ModelManifold {
    /// Space form of sectional curvature `curvature` and dimension `dim`.
    pub fn space_form(curvature: f64, dim: usize) -> Result<Self, GeomError> {
        check_dim(dim)?;
        let r_max = if curvature > 0.0 {
            std::f64::consts::PI / curvature.sqrt()
        } else {
            f64::INFINITY
        };
        Ok(ModelManifold {
            kind: ModelKind::SpaceForm { curvature },
            dim,
            r_max,
        })
    }

    /// Rotationally symmetric model with the given warping profile. The
    /// profile normalization `f(0)=0, f'(0)=1` is verified numerically.
    pub fn rot_sym(profile: WarpingProfile, dim: usize) -> Result<Self, GeomError> {
        check_dim(dim)?;
        profile.check_normalization()?;
        let r_max = profile.first_positive_zero().unwrap_or(f64::INFINITY);
        Ok(ModelManifold {
            kind: ModelKind::RotSym { profile },
            dim,
            r_max,
        })
    }

    /// Rank-one symmetric model. `m_alpha + m_2alpha` must equal `dim − 1`.
    /// For compact type the domain is capped at `π/(2α)`, where the faster
    /// branch `2α·cot(2αr)` first blows down.
    pub fn rank_one_symmetric(
        ross: RossType,
        alpha: f64,
        m_alpha: u32,
        m_2alpha: u32,
        dim: usize,
    ) -> Result<Self, GeomError> {
        check_dim(dim)?;
        if alpha <= 0.0 {
            return Err(GeomError::NonPositiveParameter {
                name: "alpha",
                value: alpha,
            });
        }
        if m_alpha == 0 {
            return Err(GeomError::NonPositiveParameter {
                name: "m_alpha",
                value: m_alpha as f64,
            });
        }
        let expected = (dim - 1) as u32;
        if m_alpha + m_2alpha != expected {
            return Err(GeomError::MultiplicityMismatch {
                m_alpha,
                m_2alpha,
                expected,
            });
        }
        let r_max = match ross {
            RossType::Compact => std::f64::consts::PI / (2.0 * alpha),
            RossType::Noncompact => f64::INFINITY,
        };
        Ok(ModelManifold {
            kind: ModelKind::RankOneSymmetric {
                ross,
                alpha,
                m_alpha,
                m_2alpha,
            },
            dim,
            r_max,
        })
    }

    /// Perturbed hyperbolic model with asymptotic curvature `−b²` and scalar
    /// perturbation amplitude `c` decaying like `e^{−2br}`.
    pub fn perturbed_hyperbolic(b: f64, c: f64, dim: usize) -> Result<Self, GeomError> {
        check_dim(dim)?;
        if b <= 0.0 {
            return Err(GeomError::NonPositiveParameter { name: "b", value: b });
        }
        Ok(ModelManifold {
            kind: ModelKind::PerturbedHyperbolic { b, c },
            dim,
            r_max: f64::INFINITY,
        })
    }

    pub fn kind(&self) -> &ModelKind {
        &self.kind
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Cut radius bounding all radial computations.
    pub fn r_max(&self) -> f64 {
        self.r_max
    }

    /// Whether the geometry has a noncompact end with finite asymptotic
    /// curvature data.
    pub fn is_noncompact(&self) -> bool {
        self.r_max.is_infinite()
    }

    /// Curvature scale used to choose asymptotic probe radii; `None` for
    /// compact models.
    pub(crate) fn asymptotic_scale(&self) -> Option<f64> {
        match &self.kind {
            ModelKind::SpaceForm { curvature } if *curvature > 0.0 => None,
            ModelKind::SpaceForm { curvature } if *curvature == 0.0 => Some(1e-6),
            ModelKind::SpaceForm { curvature } => Some((-curvature).sqrt()),
            ModelKind::RotSym { profile } => profile.asymptotic_scale(),
            ModelKind::RankOneSymmetric { ross, alpha, .. } => match ross {
                RossType::Compact => None,
                RossType::Noncompact => Some(*alpha),
            },
            ModelKind::PerturbedHyperbolic { b, .. } => Some(*b),
        }
    }

    pub(crate) fn check_radius(&self, r: f64) -> Result<(), GeomError> {
        if r <= 0.0 || r >= self.r_max || !r.is_finite() {
            return Err(GeomError::RadiusOutOfDomain {
                r,
                r_max: self.r_max,
            });
        }
        Ok(())
    }

    /// Curvature branches at radius `r` without the `Vec` packaging; the hot
    /// loops of the simulators call this every step.
    pub(crate) fn curvature_entries(&self, r: f64) -> Result<EntryBuf, GeomError> {
        self.check_radius(r)?;
        let tangential = (self.dim - 1) as u32;
        let mut buf = EntryBuf::new();
        match &self.kind {
            ModelKind::SpaceForm { curvature } => {
                buf.push(SpectrumEntry {
                    kappa: generalized_cot(*curvature, r)?,
                    multiplicity: tangential,
                });
            }
            ModelKind::RotSym { profile } => {
                let f = profile.value(r)?;
                if f <= 0.0 {
                    return Err(GeomError::NonPositiveProfile { r, value: f });
                }
                buf.push(SpectrumEntry {
                    kappa: profile.derivative(r)? / f,
                    multiplicity: tangential,
                });
            }
            ModelKind::RankOneSymmetric {
                ross,
                alpha,
                m_alpha,
                m_2alpha,
            } => {
                let branch = |scale: f64| -> Result<f64, GeomError> {
                    let x = scale * r;
                    match ross {
                        RossType::Noncompact => Ok(scale * x.cosh() / x.sinh()),
                        RossType::Compact => {
                            let s = x.sin();
                            if s.abs() < 1e-300 {
                                return Err(GeomError::TrigPole { r });
                            }
                            Ok(scale * x.cos() / s)
                        }
                    }
                };
                buf.push(SpectrumEntry {
                    kappa: branch(*alpha)?,
                    multiplicity: *m_alpha,
                });
                if *m_2alpha > 0 {
                    buf.push(SpectrumEntry {
                        kappa: branch(2.0 * alpha)?,
                        multiplicity: *m_2alpha,
                    });
                }
            }
            ModelKind::PerturbedHyperbolic { b, c } => {
                let x = b * r;
                let kappa = b * x.cosh() / x.sinh() + c / tangential as f64 * (-2.0 * x).exp();
                buf.push(SpectrumEntry {
                    kappa,
                    multiplicity: tangential,
                });
            }
        }
        Ok(buf)
    }

    /// Principal curvatures of the geodesic sphere of radius `r`.
    pub fn principal_curvatures(&self, r: f64) -> Result<CurvatureSpectrum, GeomError> {
        let entries = self.curvature_entries(r)?;
        Ok(CurvatureSpectrum::from_entries(r, &entries))
    }

    /// Mean curvature `A(r)` and absolute sum `Σ|κ|` in one evaluation.
    pub(crate) fn mean_and_abs_sum(&self, r: f64) -> Result<(f64, f64), GeomError> {
        let entries = self.curvature_entries(r)?;
        let mut mean = 0.0;
        let mut abs_sum = 0.0;
        for e in &entries {
            mean += e.multiplicity as f64 * e.kappa;
            abs_sum += e.multiplicity as f64 * e.kappa.abs();
        }
        Ok((mean, abs_sum))
    }
}

fn check_dim(dim: usize) -> Result<(), GeomError> {
    if dim < 2 {
        return Err(GeomError::DimensionTooSmall(dim));
    }
    Ok(())
}

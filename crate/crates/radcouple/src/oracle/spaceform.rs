//! Closed-form geometry of the three unit space forms.
//!
//! Points live in ambient (n+1)-space: the unit sphere in Euclidean
//! coordinates, the upper hyperboloid `⟨x,x⟩_Mink = −1` with `x₀ > 0`, and
//! flat ℝⁿ padded with a zero in slot 0. Distances, logarithm maps,
//! exponential maps, and parallel transport are all two-plane
//! rotation/boost formulas; transport is an isometry fixing the geodesic
//! tangent and acting as the identity on its orthogonal complement.

use super::OracleError;

/// Ambient-embedding tolerance for point invariants.
pub const POINT_TOL: f64 = 1e-10;

/// Clamp window for inverse trig/hyperbolic arguments; beyond it the input
/// counts as off-manifold rather than rounding error.
const CLAMP_TOL: f64 = 1e-12;

/// Which unit space form a simulation runs on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpaceFormKind {
    Euclidean,
    Sphere,
    Hyperbolic,
}

impl SpaceFormKind {
    pub fn curvature(&self) -> f64 {
        match self {
            SpaceFormKind::Euclidean => 0.0,
            SpaceFormKind::Sphere => 1.0,
            SpaceFormKind::Hyperbolic => -1.0,
        }
    }

    /// Cut radius: π on the sphere, unbounded otherwise.
    pub fn r_max(&self) -> f64 {
        match self {
            SpaceFormKind::Sphere => std::f64::consts::PI,
            _ => f64::INFINITY,
        }
    }

    /// Ambient pairing: Euclidean dot, or Minkowski with signature
    /// `(−, +, …, +)` for the hyperboloid.
    pub fn ambient_dot(&self, a: &[f64], b: &[f64]) -> f64 {
        let euclid: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
        match self {
            SpaceFormKind::Hyperbolic => euclid - 2.0 * a[0] * b[0],
            _ => euclid,
        }
    }
}

/// A point of the embedded model, stored as its (n+1) ambient coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddedPoint {
    coords: Vec<f64>,
}

impl EmbeddedPoint {
    /// Wrap coordinates after verifying the embedding invariant:
    /// `|x|² = 1` (sphere), `⟨x,x⟩_Mink = −1, x₀ > 0` (hyperboloid), or a
    /// zero pad slot (flat).
    pub fn new(kind: SpaceFormKind, coords: Vec<f64>) -> Result<Self, OracleError> {
        let defect = match kind {
            SpaceFormKind::Euclidean => coords[0].abs(),
            SpaceFormKind::Sphere => {
                (kind.ambient_dot(&coords, &coords) - 1.0).abs()
            }
            SpaceFormKind::Hyperbolic => {
                if coords[0] <= 0.0 {
                    return Err(OracleError::InvalidPoint {
                        defect: -coords[0],
                    });
                }
                (kind.ambient_dot(&coords, &coords) + 1.0).abs()
            }
        };
        if defect > POINT_TOL {
            return Err(OracleError::InvalidPoint { defect });
        }
        Ok(EmbeddedPoint { coords })
    }

    /// Base point of the chart: the origin, or the pole `(1, 0, …, 0)`.
    pub fn base(kind: SpaceFormKind, n: usize) -> Self {
        let mut coords = vec![0.0; n + 1];
        if kind != SpaceFormKind::Euclidean {
            coords[0] = 1.0;
        }
        EmbeddedPoint { coords }
    }

    /// Point at distance `r` from the base along the first coordinate axis.
    pub fn at_distance(kind: SpaceFormKind, n: usize, r: f64) -> Result<Self, OracleError> {
        if r <= 0.0 || r >= kind.r_max() {
            return Err(OracleError::CutLocus { rho: r });
        }
        let mut coords = vec![0.0; n + 1];
        match kind {
            SpaceFormKind::Euclidean => coords[1] = r,
            SpaceFormKind::Sphere => {
                coords[0] = r.cos();
                coords[1] = r.sin();
            }
            SpaceFormKind::Hyperbolic => {
                coords[0] = r.cosh();
                coords[1] = r.sinh();
            }
        }
        Ok(EmbeddedPoint { coords })
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub(super) fn from_raw(coords: Vec<f64>) -> Self {
        EmbeddedPoint { coords }
    }

    /// Manifold dimension `n` (ambient dimension minus one).
    pub fn dim(&self) -> usize {
        self.coords.len() - 1
    }
}

/// Geodesic distance between two embedded points.
pub fn distance(kind: SpaceFormKind, x: &EmbeddedPoint, y: &EmbeddedPoint) -> Result<f64, OracleError> {
    distance_raw(kind, x.coords(), y.coords())
}

pub(super) fn distance_raw(kind: SpaceFormKind, x: &[f64], y: &[f64]) -> Result<f64, OracleError> {
    match kind {
        SpaceFormKind::Euclidean => Ok(x
            .iter()
            .zip(y)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()),
        SpaceFormKind::Sphere => {
            let c = kind.ambient_dot(x, y);
            if c > 1.0 + CLAMP_TOL || c < -1.0 - CLAMP_TOL {
                return Err(OracleError::InvalidPoint {
                    defect: (c.abs() - 1.0),
                });
            }
            if c <= -1.0 + CLAMP_TOL {
                return Err(OracleError::CutLocus {
                    rho: std::f64::consts::PI,
                });
            }
            Ok(c.clamp(-1.0, 1.0).acos())
        }
        SpaceFormKind::Hyperbolic => {
            let c = -kind.ambient_dot(x, y);
            if c < 1.0 - CLAMP_TOL {
                return Err(OracleError::InvalidPoint { defect: 1.0 - c });
            }
            Ok(c.max(1.0).acosh())
        }
    }
}

/// Tangent vector at `x` pointing toward `y` with length `d(x, y)`.
pub fn log_map(
    kind: SpaceFormKind,
    x: &EmbeddedPoint,
    y: &EmbeddedPoint,
) -> Result<Vec<f64>, OracleError> {
    let mut out = vec![0.0; x.coords.len()];
    log_map_into(kind, x.coords(), y.coords(), &mut out)?;
    Ok(out)
}

pub(super) fn log_map_into(
    kind: SpaceFormKind,
    x: &[f64],
    y: &[f64],
    out: &mut [f64],
) -> Result<f64, OracleError> {
    let rho = distance_raw(kind, x, y)?;
    if rho == 0.0 {
        return Err(OracleError::CoincidentPoints);
    }
    match kind {
        SpaceFormKind::Euclidean => {
            for ((o, a), b) in out.iter_mut().zip(y).zip(x) {
                *o = a - b;
            }
        }
        SpaceFormKind::Sphere => {
            // y - cos(rho) x has norm sin(rho); rescale to length rho
            let scale = if rho < 1e-7 {
                1.0 + rho * rho / 6.0
            } else {
                rho / rho.sin()
            };
            let c = rho.cos();
            for ((o, a), b) in out.iter_mut().zip(y).zip(x) {
                *o = scale * (a - c * b);
            }
        }
        SpaceFormKind::Hyperbolic => {
            let scale = if rho < 1e-7 {
                1.0 - rho * rho / 6.0
            } else {
                rho / rho.sinh()
            };
            let c = rho.cosh();
            for ((o, a), b) in out.iter_mut().zip(y).zip(x) {
                *o = scale * (a - c * b);
            }
        }
    }
    Ok(rho)
}

/// Geodesic exponential: move from `x` along the tangent vector `v` for its
/// own length, then re-project onto the embedded model.
pub fn exp_map(kind: SpaceFormKind, x: &EmbeddedPoint, v: &[f64]) -> EmbeddedPoint {
    let mut out = x.coords.clone();
    exp_map_into(kind, x.coords(), v, &mut out);
    EmbeddedPoint { coords: out }
}

pub(super) fn exp_map_into(kind: SpaceFormKind, x: &[f64], v: &[f64], out: &mut [f64]) {
    let norm2 = kind.ambient_dot(v, v).max(0.0);
    let t = norm2.sqrt();
    match kind {
        SpaceFormKind::Euclidean => {
            for ((o, a), b) in out.iter_mut().zip(x).zip(v) {
                *o = a + b;
            }
            out[0] = 0.0;
        }
        SpaceFormKind::Sphere => {
            let (c, sinc) = if t < 1e-7 {
                (1.0 - t * t / 2.0, 1.0 - t * t / 6.0)
            } else {
                (t.cos(), t.sin() / t)
            };
            for ((o, a), b) in out.iter_mut().zip(x).zip(v) {
                *o = c * a + sinc * b;
            }
            renormalize(kind, out);
        }
        SpaceFormKind::Hyperbolic => {
            let (c, sinhc) = if t < 1e-7 {
                (1.0 + t * t / 2.0, 1.0 + t * t / 6.0)
            } else {
                (t.cosh(), t.sinh() / t)
            };
            for ((o, a), b) in out.iter_mut().zip(x).zip(v) {
                *o = c * a + sinhc * b;
            }
            renormalize(kind, out);
        }
    }
}

/// Snap a near-manifold ambient point back onto the model exactly.
pub(super) fn renormalize(kind: SpaceFormKind, coords: &mut [f64]) {
    match kind {
        SpaceFormKind::Euclidean => coords[0] = 0.0,
        SpaceFormKind::Sphere => {
            let norm = coords.iter().map(|c| c * c).sum::<f64>().sqrt();
            for c in coords.iter_mut() {
                *c /= norm;
            }
        }
        SpaceFormKind::Hyperbolic => {
            let spatial: f64 = coords[1..].iter().map(|c| c * c).sum();
            coords[0] = (1.0 + spatial).sqrt();
        }
    }
}

/// Parallel transport of `v ∈ T_xM` along the minimizing geodesic to `y`.
pub fn parallel_transport(
    kind: SpaceFormKind,
    x: &EmbeddedPoint,
    y: &EmbeddedPoint,
    v: &[f64],
) -> Result<Vec<f64>, OracleError> {
    let mut unit = vec![0.0; v.len()];
    let rho = log_map_into(kind, x.coords(), y.coords(), &mut unit)?;
    for u in unit.iter_mut() {
        *u /= rho;
    }
    let mut out = v.to_vec();
    transport_with_unit(kind, x.coords(), &unit, rho, &mut out);
    Ok(out)
}

/// Transport `v` (in place) given the unit tangent `e` at `x` toward the
/// target and the distance `rho`. Only the component along `e` rotates in
/// the geodesic two-plane; everything orthogonal to the plane is fixed.
pub(super) fn transport_with_unit(
    kind: SpaceFormKind,
    x: &[f64],
    e: &[f64],
    rho: f64,
    v: &mut [f64],
) {
    let a = kind.ambient_dot(v, e);
    match kind {
        SpaceFormKind::Euclidean => {}
        SpaceFormKind::Sphere => {
            let (c, s) = (rho.cos(), rho.sin());
            for ((vi, ei), xi) in v.iter_mut().zip(e).zip(x) {
                *vi += a * ((c - 1.0) * ei - s * xi);
            }
        }
        SpaceFormKind::Hyperbolic => {
            let (c, s) = (rho.cosh(), rho.sinh());
            for ((vi, ei), xi) in v.iter_mut().zip(e).zip(x) {
                *vi += a * ((c - 1.0) * ei + s * xi);
            }
        }
    }
}

/// Projection of an ambient vector onto the tangent space at `x`.
pub(super) fn project_to_tangent(kind: SpaceFormKind, x: &[f64], v: &mut [f64]) {
    match kind {
        SpaceFormKind::Euclidean => v[0] = 0.0,
        SpaceFormKind::Sphere => {
            let a = kind.ambient_dot(v, x);
            for (vi, xi) in v.iter_mut().zip(x) {
                *vi -= a * xi;
            }
        }
        SpaceFormKind::Hyperbolic => {
            // <x,x> = -1, so the projection adds the Minkowski component
            let a = kind.ambient_dot(v, x);
            for (vi, xi) in v.iter_mut().zip(x) {
                *vi += a * xi;
            }
        }
    }
}

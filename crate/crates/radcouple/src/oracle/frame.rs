//! Orthonormal frame pairs adapted to the connecting geodesic.
//!
//! At each of the two particles the frame starts with the radial direction:
//! `e_r^x` is the unit tangent at `x` toward `y`, and `e_r^y` the arrival
//! direction at `y` (pointing away from `x`). Tangential directions are
//! completed by deterministic Gram–Schmidt over the fixed ambient axes and
//! carried to `y` by parallel transport, so the frames are re-derived from
//! the geodesic at every step and no frame drift accumulates.

use super::spaceform::{
    self, EmbeddedPoint, SpaceFormKind,
};
use super::OracleError;

/// Numerical floor below which a Gram–Schmidt candidate is considered
/// degenerate and the next ambient axis is tried instead.
const GS_NORM_FLOOR: f64 = 1e-6;

/// Tolerance on the frame-transport consistency invariant.
pub const TRANSPORT_TOL: f64 = 1e-8;

/// Matched orthonormal frames at the two endpoints of a geodesic.
///
/// Frames are stored flat, row `i` holding the ambient coordinates of the
/// `i`-th frame vector; row 0 is radial.
#[derive(Debug, Clone)]
pub struct FramePair {
    pub rho: f64,
    n: usize,
    ambient: usize,
    x_frame: Vec<f64>,
    y_frame: Vec<f64>,
}

impl FramePair {
    pub fn new(
        kind: SpaceFormKind,
        x: &EmbeddedPoint,
        y: &EmbeddedPoint,
    ) -> Result<Self, OracleError> {
        let n = x.dim();
        let mut pair = FramePair {
            rho: 0.0,
            n,
            ambient: n + 1,
            x_frame: vec![0.0; n * (n + 1)],
            y_frame: vec![0.0; n * (n + 1)],
        };
        pair.rebuild(kind, x.coords(), y.coords())?;
        Ok(pair)
    }

    pub(super) fn empty(n: usize) -> Self {
        FramePair {
            rho: 0.0,
            n,
            ambient: n + 1,
            x_frame: vec![0.0; n * (n + 1)],
            y_frame: vec![0.0; n * (n + 1)],
        }
    }

    pub fn frame_at_x(&self, i: usize) -> &[f64] {
        &self.x_frame[i * self.ambient..(i + 1) * self.ambient]
    }

    pub fn frame_at_y(&self, i: usize) -> &[f64] {
        &self.y_frame[i * self.ambient..(i + 1) * self.ambient]
    }

    /// Recompute both frames from the connecting geodesic.
    pub(super) fn rebuild(
        &mut self,
        kind: SpaceFormKind,
        x: &[f64],
        y: &[f64],
    ) -> Result<f64, OracleError> {
        let ambient = self.ambient;
        let n = self.n;

        // radial direction at x
        let (head, _) = self.x_frame.split_at_mut(ambient);
        let rho = spaceform::log_map_into(kind, x, y, head)?;
        for c in head.iter_mut() {
            *c /= rho;
        }
        self.rho = rho;

        // Tangential completion: deterministic Gram-Schmidt over ambient
        // axes with fixed fallback order.
        let mut accepted = 1;
        let mut candidate = vec![0.0; ambient];
        for axis in 0..ambient {
            if accepted == n {
                break;
            }
            candidate.iter_mut().for_each(|c| *c = 0.0);
            candidate[axis] = 1.0;
            spaceform::project_to_tangent(kind, x, &mut candidate);
            for row in 0..accepted {
                let e = &self.x_frame[row * ambient..(row + 1) * ambient];
                let a = kind.ambient_dot(&candidate, e);
                for (c, ei) in candidate.iter_mut().zip(e) {
                    *c -= a * ei;
                }
            }
            let norm = kind.ambient_dot(&candidate, &candidate).max(0.0).sqrt();
            if norm < GS_NORM_FLOOR {
                continue;
            }
            let dst = &mut self.x_frame[accepted * ambient..(accepted + 1) * ambient];
            for (d, c) in dst.iter_mut().zip(&candidate) {
                *d = c / norm;
            }
            accepted += 1;
        }
        if accepted != n {
            return Err(OracleError::FrameConstruction { accepted, needed: n });
        }

        // Arrival radial direction at y, derived independently of transport.
        let (y_head, _) = self.y_frame.split_at_mut(ambient);
        let back = spaceform::log_map_into(kind, y, x, y_head)?;
        for c in y_head.iter_mut() {
            *c = -*c / back;
        }

        // Tangential frame at y: parallel transport of the frame at x.
        let unit_radial = self.x_frame[..ambient].to_vec();
        for row in 1..n {
            let src = self.x_frame[row * ambient..(row + 1) * ambient].to_vec();
            let dst = &mut self.y_frame[row * ambient..(row + 1) * ambient];
            dst.copy_from_slice(&src);
            spaceform::transport_with_unit(kind, x, &unit_radial, rho, dst);
        }

        #[cfg(debug_assertions)]
        self.debug_check_invariants(kind, x);

        Ok(rho)
    }

    /// Transport consistency: carrying `e_r^x` along the geodesic lands on
    /// the independently derived `e_r^y`; orthonormality of both frames.
    #[cfg(debug_assertions)]
    fn debug_check_invariants(&self, kind: SpaceFormKind, x: &[f64]) {
        let ambient = self.ambient;
        let mut carried = self.x_frame[..ambient].to_vec();
        let unit = self.x_frame[..ambient].to_vec();
        spaceform::transport_with_unit(kind, x, &unit, self.rho, &mut carried);
        for (c, e) in carried.iter().zip(self.frame_at_y(0)) {
            debug_assert!(
                (c - e).abs() < TRANSPORT_TOL,
                "transported radial direction disagrees with arrival direction"
            );
        }
        for i in 0..self.n {
            for jj in i..self.n {
                let d = kind.ambient_dot(self.frame_at_x(i), self.frame_at_x(jj));
                let expected = if i == jj { 1.0 } else { 0.0 };
                debug_assert!(
                    (d - expected).abs() < 1e-9,
                    "x-frame not orthonormal: <e{i}, e{jj}> = {d}"
                );
                let d = kind.ambient_dot(self.frame_at_y(i), self.frame_at_y(jj));
                debug_assert!(
                    (d - expected).abs() < 1e-9,
                    "y-frame not orthonormal: <e{i}, e{jj}> = {d}"
                );
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn points(kind: SpaceFormKind) -> (EmbeddedPoint, EmbeddedPoint) {
        // two generic points, not axis-aligned
        let base = EmbeddedPoint::base(kind, 3);
        let v1 = [0.0, 0.6, 0.3, -0.2];
        let v2 = [0.0, -0.1, 0.8, 0.4];
        let mut w1 = v1.to_vec();
        let mut w2 = v2.to_vec();
        spaceform::project_to_tangent(kind, base.coords(), &mut w1);
        spaceform::project_to_tangent(kind, base.coords(), &mut w2);
        (
            spaceform::exp_map(kind, &base, &w1),
            spaceform::exp_map(kind, &base, &w2),
        )
    }

    #[test]
    fn frames_are_orthonormal_and_consistent() {
        for kind in [
            SpaceFormKind::Euclidean,
            SpaceFormKind::Sphere,
            SpaceFormKind::Hyperbolic,
        ] {
            let (x, y) = points(kind);
            let pair = FramePair::new(kind, &x, &y).unwrap();
            let rho = spaceform::distance(kind, &x, &y).unwrap();
            assert!((pair.rho - rho).abs() < 1e-12);

            for i in 0..3 {
                for jj in 0..3 {
                    let expected = if i == jj { 1.0 } else { 0.0 };
                    let d = kind.ambient_dot(pair.frame_at_x(i), pair.frame_at_x(jj));
                    assert!((d - expected).abs() < 1e-10, "{kind:?} x {i}{jj}");
                    let d = kind.ambient_dot(pair.frame_at_y(i), pair.frame_at_y(jj));
                    assert!((d - expected).abs() < 1e-10, "{kind:?} y {i}{jj}");
                }
            }

            // transported radial matches the arrival direction
            let carried =
                spaceform::parallel_transport(kind, &x, &y, pair.frame_at_x(0)).unwrap();
            for (c, e) in carried.iter().zip(pair.frame_at_y(0)) {
                assert!((c - e).abs() < TRANSPORT_TOL, "{kind:?}");
            }

            // transported tangential vectors match frame_at_y rows
            for i in 1..3 {
                let carried =
                    spaceform::parallel_transport(kind, &x, &y, pair.frame_at_x(i)).unwrap();
                for (c, e) in carried.iter().zip(pair.frame_at_y(i)) {
                    assert!((c - e).abs() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn radial_axis_degeneracy_falls_back() {
        // x and y on the first coordinate axis: the first ambient axis
        // candidate is (anti)parallel to e_r and must be skipped.
        let kind = SpaceFormKind::Euclidean;
        let x = EmbeddedPoint::at_distance(kind, 3, 1.0).unwrap();
        let y = EmbeddedPoint::at_distance(kind, 3, 2.0).unwrap();
        let pair = FramePair::new(kind, &x, &y).unwrap();
        // e_r = (0, 1, 0, 0); tangential frame spans the remaining axes
        assert!((pair.frame_at_x(0)[1] - 1.0).abs() < 1e-14);
        assert!(pair.frame_at_x(1)[1].abs() < 1e-12);
        assert!(pair.frame_at_x(2)[1].abs() < 1e-12);
    }
}

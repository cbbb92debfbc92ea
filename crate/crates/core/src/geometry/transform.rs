use alloc::vec::Vec;

use crate::math;
use crate::{Error, OrientedPoint, PointSet};

use super::point::normalize_angle;

/// A similarity transform in canonical `(θ, s, t)` form.
///
/// Acts on an oriented point as `position ↦ s·R(θ)·position + t` and
/// `orientation ↦ (a + θ) mod 2π`; scaling never changes orientation. Any
/// composition of pure translations, rotations about a point, and scalings
/// about a point is representable this way, which gives deterministic
/// equality and O(1) application.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimilarityTransform {
    /// Rotation angle, radians, normalized to `[0, 2π)`.
    pub theta: f64,
    /// Scale factor, strictly positive.
    pub s: f64,
    /// Translation applied after rotation and scaling.
    pub tx: f64,
    pub ty: f64,
}

impl SimilarityTransform {
    pub fn new(theta: f64, s: f64, tx: f64, ty: f64) -> Result<Self, Error> {
        if !(s.is_finite() && s > 0.0) {
            return Err(Error::InvalidScale(s));
        }
        if !(theta.is_finite() && tx.is_finite() && ty.is_finite()) {
            return Err(Error::InvalidParameter("non-finite transform component"));
        }
        Ok(SimilarityTransform {
            theta: normalize_angle(theta),
            s,
            tx,
            ty,
        })
    }

    pub fn identity() -> Self {
        SimilarityTransform {
            theta: 0.0,
            s: 1.0,
            tx: 0.0,
            ty: 0.0,
        }
    }

    /// Pure translation by `v`.
    pub fn translation(vx: f64, vy: f64) -> Self {
        SimilarityTransform {
            theta: 0.0,
            s: 1.0,
            tx: vx,
            ty: vy,
        }
    }

    /// The translation taking `from`'s position onto `to`'s position.
    pub fn translate_point_to(from: &OrientedPoint, to: &OrientedPoint) -> Self {
        Self::translation(to.x - from.x, to.y - from.y)
    }

    /// Rotation by `theta` about center `(cx, cy)`.
    pub fn rotation_about(cx: f64, cy: f64, theta: f64) -> Self {
        let (sin, cos) = (math::sin(theta), math::cos(theta));
        // x ↦ R(x − c) + c  =  R·x + (c − R·c)
        SimilarityTransform {
            theta: normalize_angle(theta),
            s: 1.0,
            tx: cx - (cos * cx - sin * cy),
            ty: cy - (sin * cx + cos * cy),
        }
    }

    /// Scaling by `s > 0` about center `(cx, cy)`; orientations unchanged.
    pub fn scaling_about(cx: f64, cy: f64, s: f64) -> Result<Self, Error> {
        if !(s.is_finite() && s > 0.0) {
            return Err(Error::InvalidScale(s));
        }
        Ok(SimilarityTransform {
            theta: 0.0,
            s,
            tx: (1.0 - s) * cx,
            ty: (1.0 - s) * cy,
        })
    }

    /// The composition applying `self` first, then `after`.
    pub fn then(&self, after: &SimilarityTransform) -> Self {
        let (sin, cos) = (math::sin(after.theta), math::cos(after.theta));
        SimilarityTransform {
            theta: normalize_angle(self.theta + after.theta),
            s: self.s * after.s,
            tx: after.s * (cos * self.tx - sin * self.ty) + after.tx,
            ty: after.s * (sin * self.tx + cos * self.ty) + after.ty,
        }
    }

    /// The transform undoing this one: `inv ∘ self = identity`.
    pub fn inverse(&self) -> Self {
        let (sin, cos) = math::sin_cos(-self.theta);
        let s = 1.0 / self.s;
        SimilarityTransform {
            theta: normalize_angle(-self.theta),
            s,
            tx: -s * (cos * self.tx - sin * self.ty),
            ty: -s * (sin * self.tx + cos * self.ty),
        }
    }

    /// Apply to a single point.
    #[inline]
    pub fn apply(&self, p: &OrientedPoint) -> OrientedPoint {
        let (sin, cos) = (math::sin(self.theta), math::cos(self.theta));
        self.apply_with(sin, cos, p)
    }

    /// Apply with the rotation's sine/cosine precomputed (hot loops apply one
    /// transform to many points).
    #[inline]
    pub(crate) fn apply_with(&self, sin: f64, cos: f64, p: &OrientedPoint) -> OrientedPoint {
        OrientedPoint::wrap(
            self.s * (cos * p.x - sin * p.y) + self.tx,
            self.s * (sin * p.x + cos * p.y) + self.ty,
            p.a + self.theta,
        )
    }
}

/// Apply a transform to every point of a set, preserving order and role.
pub fn apply_transform(t: &SimilarityTransform, set: &PointSet) -> PointSet {
    let (sin, cos) = (math::sin(t.theta), math::cos(t.theta));
    let points: Vec<OrientedPoint> = set.iter().map(|p| t.apply_with(sin, cos, p)).collect();
    PointSet::new(points, set.role())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{mu, Metric, Role};
    use core::f64::consts::PI;

    fn pt(x: f64, y: f64, a: f64) -> OrientedPoint {
        OrientedPoint::new(x, y, a).unwrap()
    }

    #[test]
    fn identity_leaves_set_unchanged() {
        let set = PointSet::new(vec![pt(1.0, 2.0, 0.5), pt(-3.0, 0.0, 4.0)], Role::Pattern);
        let out = apply_transform(&SimilarityTransform::identity(), &set);
        assert_eq!(out, set);
    }

    #[test]
    fn translation_moves_by_vector_norm() {
        // Pure translation with ‖v‖_i = d moves each point exactly d under μ_i.
        let p = pt(0.7, -1.1, 2.0);
        let t = SimilarityTransform::translation(3.0, -4.0);
        let q = t.apply(&p);
        assert!((mu(Metric::L1Oriented, &p, &q) - 7.0).abs() < 1e-12);
        assert!((mu(Metric::L2Oriented, &p, &q) - 5.0).abs() < 1e-12);
    }

    #[test]
    fn rotation_about_origin_by_pi() {
        let t = SimilarityTransform::rotation_about(0.0, 0.0, PI);
        let q = t.apply(&pt(1.0, 0.0, 0.0));
        assert!((q.x + 1.0).abs() < 1e-12);
        assert!(q.y.abs() < 1e-12);
        assert!((q.a - PI).abs() < 1e-12);
    }

    #[test]
    fn scaling_keeps_center_and_orientation() {
        let t = SimilarityTransform::scaling_about(1.0, 1.0, 2.0).unwrap();
        let c = t.apply(&pt(1.0, 1.0, 0.3));
        assert!((c.x - 1.0).abs() < 1e-12 && (c.y - 1.0).abs() < 1e-12);
        let q = t.apply(&pt(2.0, 1.0, 0.3));
        assert!((q.x - 3.0).abs() < 1e-12);
        assert!((q.a - 0.3).abs() < 1e-15);
        assert!(SimilarityTransform::scaling_about(0.0, 0.0, 0.0).is_err());
        assert!(SimilarityTransform::scaling_about(0.0, 0.0, -1.0).is_err());
    }

    #[test]
    fn inverse_composes_to_identity() {
        let t = SimilarityTransform::new(2.2, 0.7, 3.0, -1.5).unwrap();
        let round = t.then(&t.inverse());
        let p = pt(1.0, -2.0, 4.0);
        let q = round.apply(&p);
        assert!((q.x - p.x).abs() < 1e-12);
        assert!((q.y - p.y).abs() < 1e-12);
        assert!(crate::angular_distance(q.a, p.a) < 1e-12);
    }

    #[test]
    fn composition_matches_sequential_application() {
        let a = SimilarityTransform::rotation_about(2.0, -1.0, 0.7);
        let b = SimilarityTransform::scaling_about(0.5, 0.5, 1.5).unwrap();
        let c = SimilarityTransform::translation(-1.0, 4.0);
        let composed = a.then(&b).then(&c);
        let p = pt(3.0, 2.0, 5.5);
        let step = c.apply(&b.apply(&a.apply(&p)));
        let once = composed.apply(&p);
        assert!((step.x - once.x).abs() < 1e-10);
        assert!((step.y - once.y).abs() < 1e-10);
        assert!(crate::angular_distance(step.a, once.a) < 1e-12);
    }
}

use alloc::vec::Vec;

use crate::{Error, TAU};

/// Reduce an angle into `[0, 2π)`.
///
/// Every angle-producing operation in this crate goes through here; the
/// cylinder metrics presuppose the reduced range.
#[inline]
pub fn normalize_angle(a: f64) -> f64 {
    let mut r = a % TAU;
    if r < 0.0 {
        r += TAU;
    }
    // `-1e-20 % TAU + TAU` rounds to TAU itself; fold it back to 0.
    if r >= TAU {
        r -= TAU;
    }
    r
}

/// A planar point with an orientation angle in `[0, 2π)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrientedPoint {
    pub x: f64,
    pub y: f64,
    /// Orientation, radians, always in `[0, 2π)`.
    pub a: f64,
}

impl OrientedPoint {
    /// Build an oriented point, normalizing the angle. Rejects NaN/infinite
    /// coordinates; nothing non-finite gets past construction.
    pub fn new(x: f64, y: f64, a: f64) -> Result<Self, Error> {
        if !(x.is_finite() && y.is_finite() && a.is_finite()) {
            return Err(Error::NonFinite { x, y, a });
        }
        Ok(Self::wrap(x, y, a))
    }

    /// Internal constructor for values already known finite.
    #[inline]
    pub(crate) fn wrap(x: f64, y: f64, a: f64) -> Self {
        debug_assert!(x.is_finite() && y.is_finite() && a.is_finite());
        OrientedPoint {
            x,
            y,
            a: normalize_angle(a),
        }
    }

    #[inline]
    pub fn position(&self) -> (f64, f64) {
        (self.x, self.y)
    }
}

/// Whether a set plays the pattern or the background role in a match.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Role {
    Pattern,
    Background,
}

/// An ordered sequence of oriented points.
///
/// Order is stable; indices are the identity used for deterministic
/// tie-breaking throughout the matchers. Empty sets are constructible (file
/// loading needs them) but rejected by every matching operation.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSet {
    points: Vec<OrientedPoint>,
    role: Role,
}

impl PointSet {
    pub fn new(points: Vec<OrientedPoint>, role: Role) -> Self {
        PointSet { points, role }
    }

    pub fn pattern(points: Vec<OrientedPoint>) -> Self {
        Self::new(points, Role::Pattern)
    }

    pub fn background(points: Vec<OrientedPoint>) -> Self {
        Self::new(points, Role::Background)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.points.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    #[inline]
    pub fn role(&self) -> Role {
        self.role
    }

    #[inline]
    pub fn points(&self) -> &[OrientedPoint] {
        &self.points
    }

    pub fn iter(&self) -> core::slice::Iter<'_, OrientedPoint> {
        self.points.iter()
    }

    /// Error unless the set is non-empty, as every matching operation requires.
    pub(crate) fn require_non_empty(&self) -> Result<(), Error> {
        if self.is_empty() {
            Err(Error::EmptySet)
        } else {
            Ok(())
        }
    }
}

impl core::ops::Index<usize> for PointSet {
    type Output = OrientedPoint;
    #[inline]
    fn index(&self, i: usize) -> &OrientedPoint {
        &self.points[i]
    }
}

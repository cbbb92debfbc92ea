use crate::math;
use crate::{OrientedPoint, TAU};

/// Which cylinder metric is in effect.
///
/// The choice must be consistent across metric evaluation, Hausdorff
/// computation, the angle-lifted index, refinement parameters, and the
/// diameter-dispatch constants; functions that need it take it explicitly.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    /// `|Δx| + |Δy| + wrapped |Δa|` (L1 in cylinder space).
    L1Oriented,
    /// `sqrt(Δx² + Δy² + wrapped Δa²)` (L2 in cylinder space).
    L2Oriented,
}

/// Wrapped angular distance: `min(|a1−a2|, 2π−|a1−a2|)`, in `[0, π]`.
///
/// Inputs are expected in `[0, 2π)` (the type invariant of
/// [`OrientedPoint`]).
#[inline]
pub fn angular_distance(a1: f64, a2: f64) -> f64 {
    let d = math::abs(a1 - a2);
    if d > TAU - d {
        TAU - d
    } else {
        d
    }
}

/// Distance between two oriented points under the selected cylinder metric.
#[inline]
pub fn mu(metric: Metric, p: &OrientedPoint, q: &OrientedPoint) -> f64 {
    let dx = p.x - q.x;
    let dy = p.y - q.y;
    let da = angular_distance(p.a, q.a);
    match metric {
        Metric::L1Oriented => math::abs(dx) + math::abs(dy) + da,
        Metric::L2Oriented => math::sqrt(dx * dx + dy * dy + da * da),
    }
}

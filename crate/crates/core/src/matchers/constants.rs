//! Approximation constants of the base matchers and the diameter thresholds
//! that pick between the large- and small-diameter variants.

use core::f64::consts::{PI, SQRT_2};

use crate::math;
use crate::{Metric, MotionClass};

/// Approximation factors of a base matcher stage: the returned Hausdorff value
/// is at most `a_i` times optimal under μ_i (before the nearest-neighbor
/// index's own `(1+ε_nn)` slack).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StageConstants {
    pub a1: f64,
    pub a2: f64,
}

impl StageConstants {
    /// Rigid motions, diameter-pair pinning (large pattern diameter `d`).
    pub fn tr_large(d: f64) -> Self {
        StageConstants {
            a1: 6.0 + SQRT_2 * PI / d,
            a2: 2.0 + SQRT_2 * (2.0 + PI / d),
        }
    }

    /// Rigid motions, orientation pinning (small `d`).
    pub fn tr_small(d: f64) -> Self {
        StageConstants {
            a1: 2.0 + SQRT_2 * d,
            a2: 2.0 + d,
        }
    }

    /// Similarities, diameter-pair pinning with pair-distance scaling.
    pub fn trs_large(d: f64) -> Self {
        let shared = SQRT_2 * (2.0 + PI / d);
        StageConstants {
            a1: 6.0 + shared,
            a2: 4.0 + shared,
        }
    }

    /// Similarities, orientation pinning plus pair-distance scaling.
    pub fn trs_small(d: f64) -> Self {
        StageConstants {
            a1: (2.0 + 2.0 * SQRT_2) * (1.0 + d),
            a2: 4.0 + 2.0 * d,
        }
    }

    /// The factor under the given metric.
    pub fn a(&self, metric: Metric) -> f64 {
        match metric {
            Metric::L1Oriented => self.a1,
            Metric::L2Oriented => self.a2,
        }
    }
}

/// Diameter threshold `D*` at which the large- and small-diameter constants
/// coincide; patterns with `D ≥ D*` go to the large-diameter variant.
///
/// Pure translations have a single variant, so `T` returns `0.0`.
pub fn dispatch_diameter(motion: MotionClass, metric: Metric) -> f64 {
    match (motion, metric) {
        (MotionClass::T, _) => 0.0,
        // 2 + √2 d = 6 + √2π/d  →  d² − 2√2 d − π = 0
        (MotionClass::TR, Metric::L1Oriented) => SQRT_2 + math::sqrt(2.0 + PI),
        // 2 + d = 2 + √2(2 + π/d)  →  d² − 2√2 d − √2π = 0
        (MotionClass::TR, Metric::L2Oriented) => SQRT_2 + math::sqrt(2.0 + SQRT_2 * PI),
        // (2+2√2)(1+d) = 6 + √2(2 + π/d)  →  (2+2√2)d² − 4d − √2π = 0
        (MotionClass::TRS, Metric::L1Oriented) => {
            let c = 2.0 + 2.0 * SQRT_2;
            (2.0 + math::sqrt(4.0 + c * SQRT_2 * PI)) / c
        }
        // 4 + 2d = 4 + √2(2 + π/d)  →  2d² − 2√2 d − √2π = 0
        (MotionClass::TRS, Metric::L2Oriented) => {
            (SQRT_2 + math::sqrt(2.0 + 2.0 * SQRT_2 * PI)) / 2.0
        }
    }
}

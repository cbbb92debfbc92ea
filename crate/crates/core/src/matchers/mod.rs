//! Pin-and-query matchers.
//!
//! Every matcher enumerates a deterministic sequence of candidate transforms
//! (pinning selected pattern points onto background or expanded-background
//! points), scores each candidate by the directed Hausdorff distance of the
//! transformed pattern against the background, and returns the minimum.
//! Ties between candidates go to the one generated earlier, so results are
//! identical across thread counts and repeated runs.

mod base;
mod constants;
mod eps;

pub use base::{
    base_gr_unoriented, base_tr, base_tr_large, base_tr_small, base_translate, base_trs,
    base_trs_large, base_trs_small,
};
pub use constants::{dispatch_diameter, StageConstants};
pub use eps::{eps_tr, eps_translate, eps_trs};

use crate::math;
use crate::{NnProvider, OrientedPoint, SimilarityTransform};

/// Which transform family is searched.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MotionClass {
    /// Translations only.
    T,
    /// Translations and rotations.
    TR,
    /// Translations, rotations, and scalings.
    TRS,
}

/// Outcome of a matcher run.
///
/// `hausdorff` equals the directed Hausdorff distance of `transform` applied
/// to the pattern, under the run's metric and nearest-neighbor mode, so it
/// can be re-evaluated from the transform alone.
#[derive(Debug, Clone, PartialEq)]
pub struct MatchResult {
    pub transform: SimilarityTransform,
    pub hausdorff: f64,
    pub candidates_tested: u64,
    pub nn_queries: u64,
    /// True when a small-diameter ε-scheme hit the angle-cloud size cap; the
    /// `(1+ε)` guarantee may be degraded for pathologically tiny `h_apr`.
    pub cloud_clamped: bool,
}

/// Candidate transform: translate `p` onto `pin`, then rotate by `theta` and
/// scale by `s` about the pin position. Canonical form in one step.
#[inline]
fn pin_transform(p: &OrientedPoint, pin_x: f64, pin_y: f64, theta: f64, s: f64) -> SimilarityTransform {
    let (sin, cos) = math::sin_cos(theta);
    SimilarityTransform {
        theta: crate::normalize_angle(theta),
        s,
        tx: pin_x - s * (cos * p.x - sin * p.y),
        ty: pin_y - s * (sin * p.x + cos * p.y),
    }
}

/// Hausdorff value of one candidate: transform every pattern point and take
/// the worst nearest-neighbor distance. Always performs exactly
/// `pattern.len()` queries so query accounting stays closed-form.
#[inline]
fn evaluate(t: &SimilarityTransform, pattern: &[OrientedPoint], nn: &impl NnProvider) -> f64 {
    let (sin, cos) = math::sin_cos(t.theta);
    let mut worst = 0.0_f64;
    for p in pattern {
        let q = t.apply_with(sin, cos, p);
        let d = nn.nearest(&q).distance;
        if d > worst {
            worst = d;
        }
    }
    worst
}

/// Evaluate `count` candidates and keep the best by `(hausdorff, index)`.
///
/// The index tie-break makes the reduction order-independent, so the rayon
/// path returns bit-identical results to the sequential one.
fn best_candidate<F>(
    count: u64,
    gen: F,
    pattern: &[OrientedPoint],
    nn: &impl NnProvider,
) -> Option<(SimilarityTransform, f64)>
where
    F: Fn(u64) -> SimilarityTransform + Sync,
{
    if count == 0 {
        return None;
    }
    #[cfg(feature = "rayon")]
    {
        use rayon::prelude::*;
        let best = (0..count as usize)
            .into_par_iter()
            .with_min_len(64)
            .map(|i| {
                let i = i as u64;
                let t = gen(i);
                let h = evaluate(&t, pattern, nn);
                (h, i, t)
            })
            .reduce(
                || (f64::INFINITY, u64::MAX, SimilarityTransform::identity()),
                |a, b| {
                    if (b.0, b.1) < (a.0, a.1) {
                        b
                    } else {
                        a
                    }
                },
            );
        Some((best.2, best.0))
    }
    #[cfg(not(feature = "rayon"))]
    {
        let mut best_h = f64::INFINITY;
        let mut best_t = SimilarityTransform::identity();
        for i in 0..count {
            let t = gen(i);
            let h = evaluate(&t, pattern, nn);
            if h < best_h {
                best_h = h;
                best_t = t;
            }
        }
        Some((best_t, best_h))
    }
}

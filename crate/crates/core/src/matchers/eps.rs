//! `(1+ε)` refinement schemes.
//!
//! Each scheme runs its base matcher with an approximate index whose slack
//! `ε_nn = min(ε,1)/A_base` keeps the combined stage-1 factor at
//! `A = A_base + min(ε,1)`, then expands the background into a grid (or
//! grid + angle cloud for the small-diameter variants) sized from the stage-1
//! value `h_apr` and re-runs the base matcher pinning onto the expansion
//! while still scoring against the original background with an exact index.
//! The expansion step is sized so the re-run lands within `ε·h_opt/A` of some
//! optimal pin, which combined with `h_apr ≤ A·h_opt` yields a `(1+ε)`
//! guarantee. The better of the two stages is returned.

use crate::ann::build_index;
use crate::{diameter_pair, Error, Metric, MotionClass, PointSet, SimilarityTransform, TAU};
use crate::refine::{expand_grid, expand_grid_cloud};

use super::base::{
    run_diameter_pairs, run_orientation_pairs, run_orientation_pin, run_translate, PairScale,
};
use super::{dispatch_diameter, MatchResult, StageConstants};

fn check_eps(eps: f64) -> Result<(), Error> {
    if !(eps.is_finite() && eps > 0.0) {
        return Err(Error::InvalidParameter("eps must be positive"));
    }
    Ok(())
}

/// Below this the stage-1 value counts as an exact match and refinement is
/// skipped: the grid would collapse and could not improve a result already at
/// floating-point noise. Scaled by the background's coordinate magnitude.
fn zero_threshold(background: &PointSet) -> f64 {
    let mut scale: f64 = TAU;
    for b in background.iter() {
        scale = scale.max(b.x.abs()).max(b.y.abs());
    }
    1e-12 * scale
}

fn stage_result(
    (transform, hausdorff, candidates): (SimilarityTransform, f64, u64),
    queries: u64,
) -> MatchResult {
    MatchResult {
        transform,
        hausdorff,
        candidates_tested: candidates,
        nn_queries: queries,
        cloud_clamped: false,
    }
}

/// Keep the better stage; stage 1 wins ties as the earlier candidate source.
fn combine(stage1: MatchResult, stage2: MatchResult, clamped: bool) -> MatchResult {
    let (transform, hausdorff) = if stage1.hausdorff <= stage2.hausdorff {
        (stage1.transform, stage1.hausdorff)
    } else {
        (stage2.transform, stage2.hausdorff)
    };
    MatchResult {
        transform,
        hausdorff,
        candidates_tested: stage1.candidates_tested + stage2.candidates_tested,
        nn_queries: stage1.nn_queries + stage2.nn_queries,
        cloud_clamped: clamped,
    }
}

/// `(1+ε)`-approximate translation matching.
pub fn eps_translate(
    pattern: &PointSet,
    background: &PointSet,
    metric: Metric,
    eps: f64,
) -> Result<MatchResult, Error> {
    check_eps(eps)?;
    pattern.require_non_empty()?;
    let a_base = 2.0;
    let eps_base = eps.min(1.0);

    let index1 = build_index(background, metric, eps_base / a_base)?;
    let stage1 = stage_result(run_translate(pattern, background, &index1), index1.queries());
    if stage1.hausdorff <= zero_threshold(background) {
        return Ok(stage1);
    }

    let a = a_base + eps_base;
    let pins = expand_grid(background, stage1.hausdorff, a, eps, metric)?;
    let index2 = build_index(background, metric, 0.0)?;
    let stage2 = stage_result(run_translate(pattern, &pins, &index2), index2.queries());
    Ok(combine(stage1, stage2, false))
}

/// `(1+ε)`-approximate rigid-motion matching with diameter dispatch.
pub fn eps_tr(
    pattern: &PointSet,
    background: &PointSet,
    metric: Metric,
    eps: f64,
) -> Result<MatchResult, Error> {
    eps_pinned(MotionClass::TR, pattern, background, metric, eps)
}

/// `(1+ε)`-approximate similarity matching with diameter dispatch.
pub fn eps_trs(
    pattern: &PointSet,
    background: &PointSet,
    metric: Metric,
    eps: f64,
) -> Result<MatchResult, Error> {
    eps_pinned(MotionClass::TRS, pattern, background, metric, eps)
}

fn eps_pinned(
    motion: MotionClass,
    pattern: &PointSet,
    background: &PointSet,
    metric: Metric,
    eps: f64,
) -> Result<MatchResult, Error> {
    check_eps(eps)?;
    pattern.require_non_empty()?;
    let (pi, qi, d) = diameter_pair(pattern)?;
    let large = d >= dispatch_diameter(motion, metric);
    let consts = match (motion, large) {
        (MotionClass::TR, true) => StageConstants::tr_large(d),
        (MotionClass::TR, false) => StageConstants::tr_small(d),
        (MotionClass::TRS, true) => StageConstants::trs_large(d),
        (MotionClass::TRS, false) => StageConstants::trs_small(d),
        (MotionClass::T, _) => unreachable!("translation has its own scheme"),
    };
    let a_base = consts.a(metric);
    let eps_base = eps.min(1.0);

    let run = |pins: &PointSet, nn: &crate::ann::OrientedNnIndex| match (motion, large) {
        (MotionClass::TR, true) => run_diameter_pairs(pattern, pins, nn, pi, qi, PairScale::Rigid),
        (MotionClass::TR, false) => run_orientation_pin(pattern, pins, nn),
        (MotionClass::TRS, true) => {
            run_diameter_pairs(pattern, pins, nn, pi, qi, PairScale::Similarity { d })
        }
        (MotionClass::TRS, false) => run_orientation_pairs(pattern, pins, nn, pi, d),
        (MotionClass::T, _) => unreachable!(),
    };

    let index1 = build_index(background, metric, eps_base / a_base)?;
    let stage1 = stage_result(run(background, &index1), index1.queries());
    if stage1.hausdorff <= zero_threshold(background) {
        return Ok(stage1);
    }

    let a = a_base + eps_base;
    let (pins, clamped) = if large {
        (expand_grid(background, stage1.hausdorff, a, eps, metric)?, false)
    } else {
        let e = expand_grid_cloud(background, stage1.hausdorff, a, eps, metric)?;
        (e.points, e.clamped)
    };
    let index2 = build_index(background, metric, 0.0)?;
    let stage2 = stage_result(run(&pins, &index2), index2.queries());
    Ok(combine(stage1, stage2, clamped))
}

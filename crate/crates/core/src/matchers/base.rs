//! Base matchers: constant-factor approximations by pinning pattern points
//! onto background points.
//!
//! Every variant enumerates its candidate transforms in a fixed order
//! (background index order, pairs row-major), so candidate and query counts
//! have closed forms: a single-pin variant tests `|pins|` candidates with
//! `|pins|·|P|` queries, a pair variant `|pins|²` candidates with
//! `|pins|²·|P|` queries.

use alloc::vec::Vec;

use crate::ann::{build_index, OrientedNnIndex};
use crate::math;
use crate::{
    diameter_pair, Error, Metric, MotionClass, Neighbor, NnProvider, OrientedPoint, PointSet,
    Role, SimilarityTransform,
};

use super::{best_candidate, dispatch_diameter, pin_transform, MatchResult};

/// How a pair-pinning variant chooses the scale factor.
#[derive(Clone, Copy)]
pub(super) enum PairScale {
    /// Rigid: `s = 1` always.
    Rigid,
    /// Similarity: `s = ‖b′−b‖₂ / d`, with coincident pins falling back to
    /// `s = 1` (a pure rigid candidate instead of an invalid `s = 0`).
    Similarity { d: f64 },
}

/// Pin `P[0]` onto every pin point by pure translation.
pub(super) fn run_translate(
    pattern: &PointSet,
    pins: &PointSet,
    nn: &impl NnProvider,
) -> (SimilarityTransform, f64, u64) {
    let p0 = &pattern.points()[0];
    let pin_pts = pins.points();
    let count = pin_pts.len() as u64;
    let (t, h) = best_candidate(
        count,
        |i| {
            let b = &pin_pts[i as usize];
            pin_transform(p0, b.x, b.y, 0.0, 1.0)
        },
        pattern.points(),
        nn,
    )
    .expect("pins checked non-empty");
    (t, h, count)
}

/// Pin `P[0]` onto every pin point and rotate so its orientation matches the
/// pin's.
pub(super) fn run_orientation_pin(
    pattern: &PointSet,
    pins: &PointSet,
    nn: &impl NnProvider,
) -> (SimilarityTransform, f64, u64) {
    let p0 = &pattern.points()[0];
    let pin_pts = pins.points();
    let count = pin_pts.len() as u64;
    let (t, h) = best_candidate(
        count,
        |i| {
            let b = &pin_pts[i as usize];
            pin_transform(p0, b.x, b.y, b.a - p0.a, 1.0)
        },
        pattern.points(),
        nn,
    )
    .expect("pins checked non-empty");
    (t, h, count)
}

/// Pin the diametric pattern point `P[pi]` onto pin `b`, rotate about it so
/// the other diametric point `P[qi]` lies on the ray toward pin `b′`, and
/// scale per `scale`. Coincident `b, b′` yield `θ = 0` (a pure translation
/// candidate). Pairs run row-major over `pins × pins`, including `b = b′`.
pub(super) fn run_diameter_pairs(
    pattern: &PointSet,
    pins: &PointSet,
    nn: &impl NnProvider,
    pi: usize,
    qi: usize,
    scale: PairScale,
) -> (SimilarityTransform, f64, u64) {
    let p = &pattern.points()[pi];
    let q = &pattern.points()[qi];
    let base_ang = math::atan2(q.y - p.y, q.x - p.x);
    let pin_pts = pins.points();
    let m = pin_pts.len() as u64;
    let count = m * m;
    let (t, h) = best_candidate(
        count,
        |idx| {
            let b = &pin_pts[(idx / m) as usize];
            let bp = &pin_pts[(idx % m) as usize];
            let (vx, vy) = (bp.x - b.x, bp.y - b.y);
            let coincident = vx == 0.0 && vy == 0.0;
            let theta = if coincident {
                0.0
            } else {
                math::atan2(vy, vx) - base_ang
            };
            let s = match scale {
                PairScale::Rigid => 1.0,
                PairScale::Similarity { d } => {
                    let norm = math::hypot(vx, vy);
                    if norm > 0.0 && d > 0.0 {
                        norm / d
                    } else {
                        1.0
                    }
                }
            };
            pin_transform(p, b.x, b.y, theta, s)
        },
        pattern.points(),
        nn,
    )
    .expect("pins checked non-empty");
    (t, h, count)
}

/// Pin the diametric point `P[pi]` onto outer pin `b` with an
/// orientation-matching rotation, and scale so the pattern diameter equals
/// `‖b−b′‖₂` for inner pin `b′`. Degenerate distances (`d = 0` or `b = b′`)
/// skip scaling (`s = 1`).
pub(super) fn run_orientation_pairs(
    pattern: &PointSet,
    pins: &PointSet,
    nn: &impl NnProvider,
    pi: usize,
    d: f64,
) -> (SimilarityTransform, f64, u64) {
    let p = &pattern.points()[pi];
    let pin_pts = pins.points();
    let m = pin_pts.len() as u64;
    let count = m * m;
    let (t, h) = best_candidate(
        count,
        |idx| {
            let b = &pin_pts[(idx / m) as usize];
            let bp = &pin_pts[(idx % m) as usize];
            let norm = math::hypot(bp.x - b.x, bp.y - b.y);
            let s = if norm > 0.0 && d > 0.0 { norm / d } else { 1.0 };
            pin_transform(p, b.x, b.y, b.a - p.a, s)
        },
        pattern.points(),
        nn,
    )
    .expect("pins checked non-empty");
    (t, h, count)
}

fn finish(
    (transform, hausdorff, candidates_tested): (SimilarityTransform, f64, u64),
    index: &OrientedNnIndex,
) -> MatchResult {
    MatchResult {
        transform,
        hausdorff,
        candidates_tested,
        nn_queries: index.queries(),
        cloud_clamped: false,
    }
}

/// Translation-only base matcher: pin `P[0]` onto every background point.
/// 2-approximation under both metrics.
pub fn base_translate(
    pattern: &PointSet,
    background: &PointSet,
    metric: Metric,
    eps_nn: f64,
) -> Result<MatchResult, Error> {
    pattern.require_non_empty()?;
    let index = build_index(background, metric, eps_nn)?;
    Ok(finish(run_translate(pattern, background, &index), &index))
}

/// Rigid-motion base matcher for large-diameter patterns: diameter-pair
/// pinning over all background pairs. Requires a positive pattern diameter.
pub fn base_tr_large(
    pattern: &PointSet,
    background: &PointSet,
    metric: Metric,
    eps_nn: f64,
) -> Result<MatchResult, Error> {
    pattern.require_non_empty()?;
    let (pi, qi, d) = diameter_pair(pattern)?;
    if d <= 0.0 {
        return Err(Error::DegenerateDiameter);
    }
    let index = build_index(background, metric, eps_nn)?;
    Ok(finish(
        run_diameter_pairs(pattern, background, &index, pi, qi, PairScale::Rigid),
        &index,
    ))
}

/// Rigid-motion base matcher for small-diameter patterns: orientation
/// pinning of `P[0]` onto every background point.
pub fn base_tr_small(
    pattern: &PointSet,
    background: &PointSet,
    metric: Metric,
    eps_nn: f64,
) -> Result<MatchResult, Error> {
    pattern.require_non_empty()?;
    let index = build_index(background, metric, eps_nn)?;
    Ok(finish(run_orientation_pin(pattern, background, &index), &index))
}

/// Similarity base matcher for large-diameter patterns: diameter-pair pinning
/// with the pair distance setting the scale. Requires a positive diameter.
pub fn base_trs_large(
    pattern: &PointSet,
    background: &PointSet,
    metric: Metric,
    eps_nn: f64,
) -> Result<MatchResult, Error> {
    pattern.require_non_empty()?;
    let (pi, qi, d) = diameter_pair(pattern)?;
    if d <= 0.0 {
        return Err(Error::DegenerateDiameter);
    }
    let index = build_index(background, metric, eps_nn)?;
    Ok(finish(
        run_diameter_pairs(pattern, background, &index, pi, qi, PairScale::Similarity { d }),
        &index,
    ))
}

/// Similarity base matcher for small-diameter patterns: orientation pinning
/// of a diametric point plus pair-distance scaling. A zero diameter skips
/// scaling and degenerates to orientation pinning over pairs.
pub fn base_trs_small(
    pattern: &PointSet,
    background: &PointSet,
    metric: Metric,
    eps_nn: f64,
) -> Result<MatchResult, Error> {
    pattern.require_non_empty()?;
    let (pi, _, d) = diameter_pair(pattern)?;
    let index = build_index(background, metric, eps_nn)?;
    Ok(finish(
        run_orientation_pairs(pattern, background, &index, pi, d),
        &index,
    ))
}

/// Rigid-motion base matcher, dispatching between the large- and
/// small-diameter variants at the diameter threshold for the metric.
pub fn base_tr(
    pattern: &PointSet,
    background: &PointSet,
    metric: Metric,
    eps_nn: f64,
) -> Result<MatchResult, Error> {
    pattern.require_non_empty()?;
    let (_, _, d) = diameter_pair(pattern)?;
    if d >= dispatch_diameter(MotionClass::TR, metric) {
        base_tr_large(pattern, background, metric, eps_nn)
    } else {
        base_tr_small(pattern, background, metric, eps_nn)
    }
}

/// Similarity base matcher with diameter dispatch.
pub fn base_trs(
    pattern: &PointSet,
    background: &PointSet,
    metric: Metric,
    eps_nn: f64,
) -> Result<MatchResult, Error> {
    pattern.require_non_empty()?;
    let (_, _, d) = diameter_pair(pattern)?;
    if d >= dispatch_diameter(MotionClass::TRS, metric) {
        base_trs_large(pattern, background, metric, eps_nn)
    } else {
        base_trs_small(pattern, background, metric, eps_nn)
    }
}

/// Index over the angle-zeroed background that also zeroes every query's
/// orientation, turning μ2 into plain positional L2.
struct PositionOnly(OrientedNnIndex);

impl NnProvider for PositionOnly {
    fn nearest(&self, q: &OrientedPoint) -> Neighbor {
        self.0.nearest(&OrientedPoint::wrap(q.x, q.y, 0.0))
    }
    fn queries(&self) -> u64 {
        self.0.queries()
    }
}

/// Orientation-blind rigid baseline: the same diameter-pair candidate
/// enumeration as [`base_tr_large`], scored by positional L2 only. Candidate
/// and query counts match the oriented large-diameter matcher exactly.
pub fn base_gr_unoriented(
    pattern: &PointSet,
    background: &PointSet,
    eps_nn: f64,
) -> Result<MatchResult, Error> {
    pattern.require_non_empty()?;
    let (pi, qi, d) = diameter_pair(pattern)?;
    if d <= 0.0 {
        return Err(Error::DegenerateDiameter);
    }
    let zeroed = PointSet::new(
        background
            .iter()
            .map(|b| OrientedPoint::wrap(b.x, b.y, 0.0))
            .collect::<Vec<_>>(),
        Role::Background,
    );
    let nn = PositionOnly(build_index(&zeroed, Metric::L2Oriented, eps_nn)?);
    let out = run_diameter_pairs(pattern, background, &nn, pi, qi, PairScale::Rigid);
    Ok(MatchResult {
        transform: out.0,
        hausdorff: out.1,
        candidates_tested: out.2,
        nn_queries: nn.queries(),
        cloud_clamped: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{apply_transform, ExactNn};

    fn pt(x: f64, y: f64, a: f64) -> OrientedPoint {
        OrientedPoint::new(x, y, a).unwrap()
    }

    fn pattern(pts: Vec<OrientedPoint>) -> PointSet {
        PointSet::new(pts, Role::Pattern)
    }

    fn background(pts: Vec<OrientedPoint>) -> PointSet {
        PointSet::new(pts, Role::Background)
    }

    /// Background containing an exact transformed copy of the pattern plus
    /// clutter.
    fn planted(p: &PointSet, t: &SimilarityTransform, clutter: &[OrientedPoint]) -> PointSet {
        let mut pts = apply_transform(t, p).points().to_vec();
        pts.extend_from_slice(clutter);
        PointSet::new(pts, Role::Background)
    }

    #[test]
    fn translate_recovers_planted_translation_and_counts() {
        let p = pattern(vec![pt(0.0, 0.0, 1.0), pt(1.0, 0.5, 2.0), pt(0.3, 1.0, 0.1)]);
        let t = SimilarityTransform::translation(4.0, -2.0);
        let b = planted(&p, &t, &[pt(10.0, 10.0, 0.0), pt(-5.0, 3.0, 1.0)]);
        for metric in [Metric::L1Oriented, Metric::L2Oriented] {
            let r = base_translate(&p, &b, metric, 0.0).unwrap();
            assert!(r.hausdorff < 1e-12, "{metric:?}: {}", r.hausdorff);
            assert_eq!(r.candidates_tested, b.len() as u64);
            assert_eq!(r.nn_queries, (b.len() * p.len()) as u64);
            assert!((r.transform.tx - 4.0).abs() < 1e-12);
            assert!((r.transform.ty + 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn tr_large_recovers_planted_rigid_motion() {
        let p = pattern(vec![pt(0.0, 0.0, 0.2), pt(5.0, 0.0, 1.0), pt(2.0, 2.0, 4.0)]);
        let t = SimilarityTransform::rotation_about(1.0, 1.0, 0.9)
            .then(&SimilarityTransform::translation(3.0, -7.0));
        let b = planted(&p, &t, &[pt(0.0, 0.0, 3.0)]);
        let r = base_tr_large(&p, &b, Metric::L2Oriented, 0.0).unwrap();
        assert!(r.hausdorff < 1e-9, "{}", r.hausdorff);
        assert_eq!(r.candidates_tested, (b.len() * b.len()) as u64);
        assert_eq!(r.nn_queries, (b.len() * b.len() * p.len()) as u64);
        assert!(crate::angular_distance(r.transform.theta, 0.9) < 1e-9);
    }

    #[test]
    fn tr_small_recovers_via_orientation_pinning() {
        let p = pattern(vec![pt(0.0, 0.0, 0.3), pt(0.4, 0.1, 1.3)]);
        let t = SimilarityTransform::rotation_about(0.0, 0.0, 2.1)
            .then(&SimilarityTransform::translation(-1.0, 2.0));
        let b = planted(&p, &t, &[pt(5.0, 5.0, 0.0)]);
        let r = base_tr_small(&p, &b, Metric::L1Oriented, 0.0).unwrap();
        assert!(r.hausdorff < 1e-12, "{}", r.hausdorff);
        assert_eq!(r.candidates_tested, b.len() as u64);
        assert!(crate::angular_distance(r.transform.theta, 2.1) < 1e-12);
    }

    #[test]
    fn trs_large_recovers_planted_similarity() {
        let p = pattern(vec![pt(0.0, 0.0, 0.2), pt(4.0, 0.0, 1.0), pt(1.0, 2.0, 5.0)]);
        let t = SimilarityTransform::scaling_about(0.0, 0.0, 1.7)
            .unwrap()
            .then(&SimilarityTransform::rotation_about(0.0, 0.0, 5.5))
            .then(&SimilarityTransform::translation(2.0, 2.0));
        let b = planted(&p, &t, &[pt(-3.0, 0.0, 2.0)]);
        let r = base_trs_large(&p, &b, Metric::L2Oriented, 0.0).unwrap();
        assert!(r.hausdorff < 1e-9, "{}", r.hausdorff);
        assert!((r.transform.s - 1.7).abs() < 1e-9);
        assert!(crate::angular_distance(r.transform.theta, 5.5) < 1e-9);
    }

    #[test]
    fn trs_small_recovers_planted_similarity() {
        let p = pattern(vec![pt(0.0, 0.0, 0.3), pt(0.5, 0.0, 1.0)]);
        let t = SimilarityTransform::scaling_about(0.0, 0.0, 0.6)
            .unwrap()
            .then(&SimilarityTransform::rotation_about(0.0, 0.0, 1.2))
            .then(&SimilarityTransform::translation(1.0, -1.0));
        let b = planted(&p, &t, &[pt(4.0, 4.0, 2.0)]);
        let r = base_trs_small(&p, &b, Metric::L2Oriented, 0.0).unwrap();
        assert!(r.hausdorff < 1e-12, "{}", r.hausdorff);
        assert!((r.transform.s - 0.6).abs() < 1e-12);
        assert_eq!(r.candidates_tested, (b.len() * b.len()) as u64);
    }

    #[test]
    fn degenerate_diameter_is_rejected_where_required() {
        let p = pattern(vec![pt(1.0, 1.0, 0.5)]);
        let b = background(vec![pt(0.0, 0.0, 0.0), pt(1.0, 0.0, 0.0)]);
        assert_eq!(
            base_tr_large(&p, &b, Metric::L1Oriented, 0.0).unwrap_err(),
            Error::DegenerateDiameter
        );
        assert_eq!(
            base_trs_large(&p, &b, Metric::L1Oriented, 0.0).unwrap_err(),
            Error::DegenerateDiameter
        );
        // the small variants accept it
        assert!(base_tr_small(&p, &b, Metric::L1Oriented, 0.0).is_ok());
        assert!(base_trs_small(&p, &b, Metric::L1Oriented, 0.0).is_ok());
    }

    #[test]
    fn dispatch_picks_variant_by_diameter() {
        // diameter 10 is above both TR thresholds, 0.5 below both
        let big = pattern(vec![pt(0.0, 0.0, 0.0), pt(10.0, 0.0, 0.0)]);
        let small = pattern(vec![pt(0.0, 0.0, 0.0), pt(0.5, 0.0, 0.0)]);
        let b = background(vec![pt(0.0, 0.0, 0.0), pt(10.0, 0.0, 0.0), pt(3.0, 1.0, 1.0)]);
        let r = base_tr(&big, &b, Metric::L2Oriented, 0.0).unwrap();
        assert_eq!(r.candidates_tested, (b.len() * b.len()) as u64);
        let r = base_tr(&small, &b, Metric::L2Oriented, 0.0).unwrap();
        assert_eq!(r.candidates_tested, b.len() as u64);
    }

    #[test]
    fn gr_ignores_orientations() {
        // same positions, scrambled angles: orientation-blind matcher still
        // finds a perfect positional match
        let p = pattern(vec![pt(0.0, 0.0, 0.1), pt(3.0, 0.0, 2.0), pt(1.0, 1.5, 4.0)]);
        let t = SimilarityTransform::rotation_about(0.0, 0.0, 1.0)
            .then(&SimilarityTransform::translation(5.0, 1.0));
        let mut moved = apply_transform(&t, &p).points().to_vec();
        for (i, q) in moved.iter_mut().enumerate() {
            q.a = (i as f64 * 2.0) % crate::TAU;
        }
        let b = PointSet::new(moved, Role::Background);
        let r = base_gr_unoriented(&p, &b, 0.0).unwrap();
        assert!(r.hausdorff < 1e-9, "{}", r.hausdorff);
        assert_eq!(r.candidates_tested, (b.len() * b.len()) as u64);
        assert_eq!(r.nn_queries, (b.len() * b.len() * p.len()) as u64);
    }

    #[test]
    fn approximate_index_matches_result_shape_of_exact() {
        // with eps_nn > 0 the value may only grow, never above (1+eps) of exact
        let p = pattern(vec![pt(0.0, 0.0, 0.0), pt(1.0, 0.2, 1.0)]);
        let b = background(vec![pt(0.2, 0.1, 0.3), pt(2.0, 1.0, 4.0), pt(-1.0, 0.5, 2.0)]);
        let exact = base_translate(&p, &b, Metric::L2Oriented, 0.0).unwrap();
        let approx = base_translate(&p, &b, Metric::L2Oriented, 0.25).unwrap();
        assert!(approx.hausdorff >= exact.hausdorff - 1e-12);
        assert!(approx.hausdorff <= 1.25 * exact.hausdorff + 1e-12);
    }

    #[test]
    fn candidate_ties_break_to_the_earlier_pin() {
        // both pins give Hausdorff 0 with distinct transforms; the earlier
        // pin must win so the run is deterministic
        let p = pattern(vec![pt(0.0, 0.0, 0.0)]);
        let b = background(vec![pt(1.0, 1.0, 0.0), pt(-1.0, -1.0, 0.0)]);
        let nn = ExactNn::new(&b, Metric::L2Oriented).unwrap();
        let (t, _, _) = run_translate(&p, &b, &nn);
        assert_eq!((t.tx, t.ty), (1.0, 1.0));
    }
}

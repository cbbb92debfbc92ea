//! Verification machinery independent of the matchers: seeded planted
//! instances with certified optimum upper bounds, a dense grid-search oracle
//! for tiny translation-only problems, and a numeric check of the rotation
//! displacement bound.

use anyhow::{bail, Context, Result};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use opm_core::{
    apply_transform, directed_hausdorff, mu, ExactNn, Metric, MotionClass, OrientedPoint,
    PointSet, Role, SimilarityTransform, TAU,
};

/// Half-width of the box random planting translations are drawn from.
pub const TRANSLATION_BOX: f64 = 10.0;

/// A synthetic problem with a certificate: `planting` applied to `pattern`
/// lands within `certified_upper_bound` of `background` (verified by exact
/// evaluation), so the optimal Hausdorff value is at most that.
#[derive(Debug, Clone)]
pub struct PlantedInstance {
    pub background: PointSet,
    pub pattern: PointSet,
    pub planting: SimilarityTransform,
    pub metric: Metric,
    /// A-priori bound from the perturbation radii (triangle inequality).
    pub perturbation_bound: f64,
    /// Exact directed Hausdorff of the planted pattern; never exceeds
    /// `perturbation_bound`.
    pub certified_upper_bound: f64,
}

fn random_motion(rng: &mut ChaCha8Rng, motion: MotionClass) -> SimilarityTransform {
    let (theta, s) = match motion {
        MotionClass::T => (0.0, 1.0),
        MotionClass::TR => (rng.random_range(0.0..TAU), 1.0),
        MotionClass::TRS => (
            rng.random_range(0.0..TAU),
            // log-uniform in [1/2, 2]
            rng.random_range(-(2.0_f64.ln())..2.0_f64.ln()).exp(),
        ),
    };
    let tx = rng.random_range(-TRANSLATION_BOX..TRANSLATION_BOX);
    let ty = rng.random_range(-TRANSLATION_BOX..TRANSLATION_BOX);
    SimilarityTransform::new(theta, s, tx, ty).expect("finite samples")
}

/// Uniform position offset in the metric's ball of radius `r` (L1 diamond
/// for μ1, disc for μ2) by rejection from the bounding square.
fn ball_offset(rng: &mut ChaCha8Rng, metric: Metric, r: f64) -> (f64, f64) {
    if r == 0.0 {
        return (0.0, 0.0);
    }
    loop {
        let u = rng.random_range(-r..=r);
        let v = rng.random_range(-r..=r);
        let inside = match metric {
            Metric::L1Oriented => u.abs() + v.abs() <= r,
            Metric::L2Oriented => u * u + v * v <= r * r,
        };
        if inside {
            return (u, v);
        }
    }
}

/// Build a planted instance: pick `m` distinct background points, perturb
/// each by at most `delta_pos` in position (metric ball) and `delta_ang` in
/// orientation, and pull them back through the inverse of a random motion
/// from `motion`. Fixed seed, byte-identical output.
pub fn plant(
    background: &PointSet,
    m: usize,
    motion: MotionClass,
    metric: Metric,
    delta_pos: f64,
    delta_ang: f64,
    seed: u64,
) -> Result<PlantedInstance> {
    if m == 0 {
        bail!("pattern size must be at least 1");
    }
    if m > background.len() {
        bail!(
            "pattern size {m} exceeds background size {}",
            background.len()
        );
    }
    if delta_pos < 0.0 || delta_ang < 0.0 {
        bail!("perturbation radii must be >= 0");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let chosen = rand::seq::index::sample(&mut rng, background.len(), m);
    let planting = random_motion(&mut rng, motion);
    let inverse = planting.inverse();

    let pattern_pts: Vec<OrientedPoint> = chosen
        .iter()
        .map(|i| {
            let b = background[i];
            let (dx, dy) = ball_offset(&mut rng, metric, delta_pos);
            let da = if delta_ang == 0.0 {
                0.0
            } else {
                rng.random_range(-delta_ang..=delta_ang)
            };
            let moved = OrientedPoint::new(b.x + dx, b.y + dy, opm_core::normalize_angle(b.a + da))
                .expect("finite perturbation");
            inverse.apply(&moved)
        })
        .collect();
    let pattern = PointSet::new(pattern_pts, Role::Pattern);

    let nn = ExactNn::new(background, metric).context("empty background")?;
    let certified_upper_bound = directed_hausdorff(&apply_transform(&planting, &pattern), &nn)?;
    let perturbation_bound = match metric {
        Metric::L1Oriented => delta_pos + delta_ang,
        Metric::L2Oriented => delta_pos.hypot(delta_ang),
    };
    Ok(PlantedInstance {
        background: background.clone(),
        pattern,
        planting,
        metric,
        perturbation_bound,
        certified_upper_bound,
    })
}

/// A random background: uniform positions in `[0, box_scale]²`, uniform
/// orientations.
pub fn random_background(n: usize, box_scale: f64, rng: &mut ChaCha8Rng) -> PointSet {
    let pts = (0..n)
        .map(|_| {
            OrientedPoint::new(
                rng.random_range(0.0..box_scale),
                rng.random_range(0.0..box_scale),
                rng.random_range(0.0..TAU),
            )
            .expect("finite samples")
        })
        .collect();
    PointSet::new(pts, Role::Background)
}

fn exact_hausdorff_translated(
    pattern: &PointSet,
    background: &PointSet,
    metric: Metric,
    vx: f64,
    vy: f64,
) -> f64 {
    let mut worst = 0.0_f64;
    for p in pattern.iter() {
        let q = OrientedPoint::new(p.x + vx, p.y + vy, p.a).expect("finite");
        let mut best = f64::INFINITY;
        for b in background.iter() {
            best = best.min(mu(metric, &q, b));
        }
        worst = worst.max(best);
    }
    worst
}

/// Exhaustive near-optimal estimator for translation-only matching: evaluate
/// the exact Hausdorff on a `step`-grid of half-width `radius` around every
/// pin vector `b − p₀` and return the minimum. Upper-bounds the optimum and
/// converges to it as `step → 0` whenever the optimal translation is within
/// `radius` of some pin vector (it always is for `radius ≥ h_opt`).
pub fn translation_grid_oracle(
    pattern: &PointSet,
    background: &PointSet,
    metric: Metric,
    step: f64,
    radius: f64,
) -> Result<f64> {
    if !(step.is_finite() && step > 0.0) {
        bail!("step must be positive");
    }
    if !(radius.is_finite() && radius >= 0.0) {
        bail!("radius must be >= 0");
    }
    if pattern.is_empty() || background.is_empty() {
        bail!("empty point set");
    }
    let p0 = pattern[0];
    let k = (radius / step).ceil() as i64;
    let mut best = f64::INFINITY;
    for b in background.iter() {
        let (vx, vy) = (b.x - p0.x, b.y - p0.y);
        for i in -k..=k {
            for j in -k..=k {
                let h = exact_hausdorff_translated(
                    pattern,
                    background,
                    metric,
                    vx + i as f64 * step,
                    vy + j as f64 * step,
                );
                best = best.min(h);
            }
        }
    }
    Ok(best)
}

/// Outcome of [`check_rotation_lemma`].
#[derive(Debug, Clone, Copy)]
pub struct RotationLemmaReport {
    pub trials: u64,
    pub violations: u64,
    /// Largest observed `lhs − rhs`; negative when the bound always held.
    pub max_slack: f64,
}

/// Numerically check the rotation displacement bound: rotating about a
/// center so that a point `q` at distance `D` lands on `q′` moves any point
/// within distance `D` of the center by at most
/// `c_i·‖q−q′‖₂ + π·‖q−q′‖₂ / (2D)` under μ_i, with `c₂ = 1` and `c₁ = √2`.
///
/// The positional term must be stated through the Euclidean chord: a point
/// closer to the center moves less in L2, but its displacement direction
/// differs from `q`'s, so its L1 displacement is only bounded by `√2` times
/// the Euclidean chord, not by `‖q−q′‖₁` itself.
pub fn check_rotation_lemma(trials: u64, seed: u64) -> Result<RotationLemmaReport> {
    if trials == 0 {
        bail!("trials must be >= 1");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut violations = 0_u64;
    let mut max_slack = f64::NEG_INFINITY;
    for _ in 0..trials {
        let cx = rng.random_range(-5.0..5.0);
        let cy = rng.random_range(-5.0..5.0);
        let d = rng.random_range(0.1..5.0);
        let phi1 = rng.random_range(0.0..TAU);
        let phi2 = rng.random_range(0.0..TAU);
        let q = (cx + d * phi1.cos(), cy + d * phi1.sin());
        let qp = (cx + d * phi2.cos(), cy + d * phi2.sin());
        let rot = SimilarityTransform::rotation_about(cx, cy, phi2 - phi1);

        // random point within distance D of the center
        let r = rng.random_range(0.0..=d);
        let psi = rng.random_range(0.0..TAU);
        let p = OrientedPoint::new(
            cx + r * psi.cos(),
            cy + r * psi.sin(),
            rng.random_range(0.0..TAU),
        )?;
        let p_rot = rot.apply(&p);

        let (dqx, dqy) = (qp.0 - q.0, qp.1 - q.1);
        let chord = dqx.hypot(dqy);
        for metric in [Metric::L1Oriented, Metric::L2Oriented] {
            let lhs = mu(metric, &p, &p_rot);
            let positional = match metric {
                Metric::L1Oriented => std::f64::consts::SQRT_2 * chord,
                Metric::L2Oriented => chord,
            };
            let rhs = positional + std::f64::consts::PI * chord / (2.0 * d);
            let slack = lhs - rhs;
            max_slack = max_slack.max(slack);
            if slack > 1e-9 * rhs.max(1.0) {
                violations += 1;
            }
        }
    }
    Ok(RotationLemmaReport {
        trials,
        violations,
        max_slack,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(x: f64, y: f64, a: f64) -> OrientedPoint {
        OrientedPoint::new(x, y, a).unwrap()
    }

    fn demo_background(n: usize, seed: u64) -> PointSet {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        random_background(n, 10.0, &mut rng)
    }

    #[test]
    fn zero_perturbation_certifies_zero() {
        let b = demo_background(12, 7);
        for motion in [MotionClass::T, MotionClass::TR, MotionClass::TRS] {
            let inst = plant(&b, 4, motion, Metric::L2Oriented, 0.0, 0.0, 42).unwrap();
            assert!(
                inst.certified_upper_bound < 1e-9,
                "{motion:?}: {}",
                inst.certified_upper_bound
            );
            assert_eq!(inst.perturbation_bound, 0.0);
        }
    }

    #[test]
    fn certified_bound_respects_the_perturbation_budget() {
        let b = demo_background(15, 3);
        let inst = plant(&b, 5, MotionClass::TR, Metric::L1Oriented, 0.1, 0.05, 1).unwrap();
        assert!((inst.perturbation_bound - 0.15).abs() < 1e-15);
        assert!(inst.certified_upper_bound <= 0.15 + 1e-12);
        assert!(inst.certified_upper_bound > 0.0);

        let inst = plant(&b, 5, MotionClass::TR, Metric::L2Oriented, 0.3, 0.4, 1).unwrap();
        assert!((inst.perturbation_bound - 0.5).abs() < 1e-15);
        assert!(inst.certified_upper_bound <= 0.5 + 1e-12);
    }

    #[test]
    fn fixed_seed_reproduces_the_instance() {
        let b = demo_background(10, 5);
        let a = plant(&b, 3, MotionClass::TRS, Metric::L2Oriented, 0.1, 0.1, 99).unwrap();
        let c = plant(&b, 3, MotionClass::TRS, Metric::L2Oriented, 0.1, 0.1, 99).unwrap();
        assert_eq!(a.pattern, c.pattern);
        assert_eq!(a.planting, c.planting);
        assert_eq!(a.certified_upper_bound, c.certified_upper_bound);
        let d = plant(&b, 3, MotionClass::TRS, Metric::L2Oriented, 0.1, 0.1, 100).unwrap();
        assert_ne!(a.pattern, d.pattern);
    }

    #[test]
    fn plant_rejects_oversized_patterns() {
        let b = demo_background(4, 1);
        assert!(plant(&b, 5, MotionClass::T, Metric::L1Oriented, 0.0, 0.0, 0).is_err());
        assert!(plant(&b, 0, MotionClass::T, Metric::L1Oriented, 0.0, 0.0, 0).is_err());
    }

    #[test]
    fn oracle_finds_zero_on_identical_sets() {
        let pts = vec![pt(0.0, 0.0, 1.0), pt(1.0, 0.5, 2.0)];
        let p = PointSet::new(pts.clone(), Role::Pattern);
        let b = PointSet::new(pts, Role::Background);
        let v = translation_grid_oracle(&p, &b, Metric::L2Oriented, 0.01, 0.02).unwrap();
        assert_eq!(v, 0.0);
    }

    #[test]
    fn oracle_approaches_the_certified_bound_on_planted_translations() {
        let b = demo_background(8, 11);
        let inst = plant(&b, 3, MotionClass::T, Metric::L1Oriented, 0.02, 0.01, 5).unwrap();
        let step = 1e-3;
        let v =
            translation_grid_oracle(&inst.pattern, &b, Metric::L1Oriented, step, 0.05).unwrap();
        // the oracle may do slightly better than the planting, never much worse
        assert!(v <= inst.certified_upper_bound + 2.0 * step, "{v}");
    }

    #[test]
    fn oracle_rejects_bad_steps() {
        let p = PointSet::new(vec![pt(0.0, 0.0, 0.0)], Role::Pattern);
        let b = PointSet::new(vec![pt(0.0, 0.0, 0.0)], Role::Background);
        assert!(translation_grid_oracle(&p, &b, Metric::L1Oriented, 0.0, 1.0).is_err());
    }

    #[test]
    fn rotation_lemma_holds_on_random_trials() {
        let report = check_rotation_lemma(2000, 17).unwrap();
        assert_eq!(report.violations, 0, "max slack {}", report.max_slack);
        assert!(report.max_slack <= 0.0);
    }
}

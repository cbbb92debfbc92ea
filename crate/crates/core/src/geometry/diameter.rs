use alloc::vec::Vec;

use crate::math;
use crate::{Error, PointSet};

/// Above this size the convex-hull/rotating-calipers path takes over from the
/// O(m²) scan.
const BRUTE_FORCE_LIMIT: usize = 64;

/// The pair of points at maximum positional Euclidean distance (orientation
/// ignored) and that distance `D`.
///
/// A single point yields `(0, 0, 0.0)`. Ties break to the lexicographically
/// smallest index pair on the brute-force path; the calipers path returns a
/// deterministic pair realizing the same `D`.
pub fn diameter_pair(set: &PointSet) -> Result<(usize, usize, f64), Error> {
    set.require_non_empty()?;
    let m = set.len();
    if m == 1 {
        return Ok((0, 0, 0.0));
    }
    let (i, j, d2) = if m <= BRUTE_FORCE_LIMIT {
        brute_force(set)
    } else {
        calipers(set)
    };
    Ok((i, j, math::sqrt(d2)))
}

fn dist2(set: &PointSet, i: usize, j: usize) -> f64 {
    let dx = set[i].x - set[j].x;
    let dy = set[i].y - set[j].y;
    dx * dx + dy * dy
}

fn brute_force(set: &PointSet) -> (usize, usize, f64) {
    let m = set.len();
    let mut best = (0, 0, -1.0);
    for i in 0..m {
        for j in (i + 1)..m {
            let d2 = dist2(set, i, j);
            if d2 > best.2 {
                best = (i, j, d2);
            }
        }
    }
    if best.2 < 0.0 {
        best.2 = 0.0;
    }
    (best.0, best.1, best.2)
}

/// Andrew's monotone chain over positions; returns original indices of the
/// hull, counterclockwise, no repeated endpoint.
fn convex_hull(set: &PointSet) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..set.len()).collect();
    idx.sort_by(|&a, &b| {
        (set[a].x, set[a].y)
            .partial_cmp(&(set[b].x, set[b].y))
            .unwrap()
            .then(a.cmp(&b))
    });
    idx.dedup_by(|&mut a, &mut b| set[a].x == set[b].x && set[a].y == set[b].y);

    let cross = |o: usize, a: usize, b: usize| -> f64 {
        (set[a].x - set[o].x) * (set[b].y - set[o].y)
            - (set[a].y - set[o].y) * (set[b].x - set[o].x)
    };

    if idx.len() < 3 {
        return idx;
    }
    let mut hull: Vec<usize> = Vec::with_capacity(idx.len() * 2);
    for &p in &idx {
        while hull.len() >= 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
            hull.pop();
        }
        hull.push(p);
    }
    let lower_len = hull.len() + 1;
    for &p in idx.iter().rev() {
        while hull.len() >= lower_len && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0
        {
            hull.pop();
        }
        hull.push(p);
    }
    hull.pop();
    hull
}

fn calipers(set: &PointSet) -> (usize, usize, f64) {
    let hull = convex_hull(set);
    let h = hull.len();
    if h == 1 {
        return (hull[0], hull[0], 0.0);
    }
    if h == 2 {
        let (a, b) = (hull[0].min(hull[1]), hull[0].max(hull[1]));
        return (a, b, dist2(set, a, b));
    }
    let mut best = (0usize, 0usize, -1.0f64);
    let mut record = |a: usize, b: usize| {
        let d2 = dist2(set, a, b);
        if d2 > best.2 {
            let (a, b) = (a.min(b), a.max(b));
            best = (a, b, d2);
        }
    };
    let area2 = |a: usize, b: usize, c: usize| -> f64 {
        math::abs(
            (set[b].x - set[a].x) * (set[c].y - set[a].y)
                - (set[b].y - set[a].y) * (set[c].x - set[a].x),
        )
    };
    let mut j = 1;
    for i in 0..h {
        let ni = (i + 1) % h;
        while area2(hull[i], hull[ni], hull[(j + 1) % h]) > area2(hull[i], hull[ni], hull[j]) {
            j = (j + 1) % h;
        }
        record(hull[i], hull[j]);
        record(hull[ni], hull[j]);
    }
    best
}

use core::sync::atomic::{AtomicU64, Ordering};

use crate::{Error, Metric, OrientedPoint, PointSet};

use super::metric::mu;

/// A nearest-neighbor answer: index into the background set and the
/// (possibly approximate) μ-distance it realizes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Neighbor {
    pub index: usize,
    pub distance: f64,
}

/// Source of nearest-neighbor answers over a fixed background set.
///
/// Implementations are immutable after construction and safe to query from
/// many threads; the query counter must be exact under contention.
pub trait NnProvider: Sync {
    /// Nearest (or `(1+ε)`-approximate nearest) background point to `q`.
    fn nearest(&self, q: &OrientedPoint) -> Neighbor;

    /// Number of `nearest` calls made so far.
    fn queries(&self) -> u64;
}

/// Exact nearest neighbor by linear scan; ties go to the lowest index.
#[derive(Debug)]
pub struct ExactNn<'a> {
    background: &'a PointSet,
    metric: Metric,
    counter: AtomicU64,
}

impl<'a> ExactNn<'a> {
    pub fn new(background: &'a PointSet, metric: Metric) -> Result<Self, Error> {
        background.require_non_empty()?;
        Ok(ExactNn {
            background,
            metric,
            counter: AtomicU64::new(0),
        })
    }

    pub fn metric(&self) -> Metric {
        self.metric
    }
}

impl NnProvider for ExactNn<'_> {
    fn nearest(&self, q: &OrientedPoint) -> Neighbor {
        self.counter.fetch_add(1, Ordering::Relaxed);
        let mut best = Neighbor {
            index: 0,
            distance: f64::INFINITY,
        };
        for (i, b) in self.background.iter().enumerate() {
            let d = mu(self.metric, q, b);
            if d < best.distance {
                best = Neighbor {
                    index: i,
                    distance: d,
                };
            }
        }
        best
    }

    fn queries(&self) -> u64 {
        self.counter.load(Ordering::Relaxed)
    }
}

/// One-shot exact query; the test oracle for every index implementation.
pub fn query_exact(background: &PointSet, q: &OrientedPoint, metric: Metric) -> Result<Neighbor, Error> {
    background.require_non_empty()?;
    let mut best = Neighbor {
        index: 0,
        distance: f64::INFINITY,
    };
    for (i, b) in background.iter().enumerate() {
        let d = mu(metric, q, b);
        if d < best.distance {
            best = Neighbor {
                index: i,
                distance: d,
            };
        }
    }
    Ok(best)
}

/// Directed Hausdorff distance `max_{p∈P} min_{b∈B} μ(p, b)`, with the inner
/// minimum answered by `nn`.
///
/// With an exact provider this is the true directed Hausdorff; with a
/// `(1+ε)` index the result lies in `[h_true, (1+ε)·h_true]`.
pub fn directed_hausdorff(pattern: &PointSet, nn: &impl NnProvider) -> Result<f64, Error> {
    pattern.require_non_empty()?;
    let mut worst = 0.0_f64;
    for p in pattern.iter() {
        let d = nn.nearest(p).distance;
        if d > worst {
            worst = d;
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Role;

    fn pt(x: f64, y: f64, a: f64) -> OrientedPoint {
        OrientedPoint::new(x, y, a).unwrap()
    }

    #[test]
    fn hausdorff_of_set_with_itself_is_zero() {
        let s = PointSet::new(vec![pt(0.0, 0.0, 1.0), pt(2.0, 3.0, 4.0)], Role::Background);
        let nn = ExactNn::new(&s, Metric::L2Oriented).unwrap();
        assert_eq!(directed_hausdorff(&s, &nn).unwrap(), 0.0);
        assert_eq!(nn.queries(), 2);
    }

    #[test]
    fn hausdorff_examples() {
        let b = PointSet::new(vec![pt(1.0, 0.0, 0.0), pt(5.0, 5.0, 1.0)], Role::Background);
        let p = PointSet::new(vec![pt(0.0, 0.0, 0.0)], Role::Pattern);
        let nn = ExactNn::new(&b, Metric::L2Oriented).unwrap();
        assert!((directed_hausdorff(&p, &nn).unwrap() - 1.0).abs() < 1e-15);

        // max over pattern points
        let b2 = PointSet::new(vec![pt(0.0, 0.0, 0.0)], Role::Background);
        let p2 = PointSet::new(vec![pt(0.0, 0.0, 0.0), pt(2.0, 0.0, 0.0)], Role::Pattern);
        let nn2 = ExactNn::new(&b2, Metric::L2Oriented).unwrap();
        assert!((directed_hausdorff(&p2, &nn2).unwrap() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn empty_sets_are_rejected() {
        let empty = PointSet::new(vec![], Role::Background);
        let one = PointSet::new(vec![pt(0.0, 0.0, 0.0)], Role::Pattern);
        assert_eq!(ExactNn::new(&empty, Metric::L1Oriented).unwrap_err(), Error::EmptySet);
        let nn = ExactNn::new(&one, Metric::L1Oriented).unwrap();
        assert_eq!(directed_hausdorff(&empty, &nn).unwrap_err(), Error::EmptySet);
    }

    #[test]
    fn exact_query_ties_break_low() {
        let b = PointSet::new(
            vec![pt(1.0, 0.0, 0.0), pt(-1.0, 0.0, 0.0)],
            Role::Background,
        );
        let n = query_exact(&b, &pt(0.0, 0.0, 0.0), Metric::L2Oriented).unwrap();
        assert_eq!(n.index, 0);
        assert!((n.distance - 1.0).abs() < 1e-15);
    }
}

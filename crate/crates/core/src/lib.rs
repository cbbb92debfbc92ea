//! Oriented point-set pattern matching.
//!
//! An oriented point is a planar point carrying an orientation angle in
//! `[0, 2π)`. This crate measures how well a transformed pattern set matches a
//! background set using a directed Hausdorff distance over cylinder metrics
//! (L1- or L2-style position distance combined with wrapped angular distance),
//! and searches translations, rigid motions, and similarities with
//! pin-and-query algorithms:
//!
//! - constant-factor base matchers that pin pattern points onto background
//!   points and score each candidate transform with nearest-neighbor queries,
//! - `(1+ε)` refinement schemes that re-pin onto grid / angle-cloud
//!   expansions of the background,
//! - an approximate nearest-neighbor index over the angle-lifted background
//!   (three copies per point at `a`, `a±2π`) so the wrapped angle behaves as
//!   an ordinary third coordinate.
//!
//! The crate is `no_std`-compatible (`alloc` required; enable the `libm`
//! feature for float math without `std`). With the `rayon` feature the
//! matchers evaluate candidate transforms in parallel; results are identical
//! to the sequential path because ties are broken by candidate index.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

#[cfg(not(any(feature = "std", feature = "libm")))]
compile_error!("opm-core needs either the `std` or the `libm` feature for float math");

pub mod ann;
pub mod geometry;
pub mod matchers;
mod math;
pub mod refine;

mod error;

pub use error::Error;
pub use geometry::{
    angular_distance, apply_transform, diameter_pair, directed_hausdorff, mu, normalize_angle,
    query_exact, ExactNn, Metric, Neighbor, NnProvider, OrientedPoint, PointSet, Role,
    SimilarityTransform,
};
pub use matchers::{dispatch_diameter, MatchResult, MotionClass, StageConstants};

/// `2π`, the period of the orientation coordinate.
pub const TAU: f64 = core::f64::consts::TAU;

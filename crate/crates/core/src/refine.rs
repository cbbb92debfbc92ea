//! Grid and angle-cloud generators, and the background-expansion step shared
//! by every `(1+ε)` scheme.
//!
//! The expansion replaces each background point with a square grid of pin
//! targets (and, for the small-diameter schemes, an angle cloud at every grid
//! point) sized so that some generated point lies close enough to the optimal
//! pin location that re-running the base matcher over the expansion tightens
//! its constant-factor guarantee to `1+ε`.

use alloc::vec::Vec;

use crate::math;
use crate::{Error, Metric, OrientedPoint, PointSet, Role, TAU};

/// Square grid `G(center, l, k)`: the `(2k+1)²` points offset from `center`
/// by multiples of `l` within a square of side `2kl`.
#[derive(Debug, Clone, Copy)]
pub struct GridSpec {
    pub center: (f64, f64),
    /// Spacing, strictly positive.
    pub l: f64,
    /// Half-width in cells.
    pub k: usize,
}

/// Angle cloud `C(center, k)`: `k` points sharing `center`'s position with
/// orientations `a + 2πi/k mod 2π`, `i = 1..k`. Any target orientation is
/// within `π/k` of some cloud point.
#[derive(Debug, Clone, Copy)]
pub struct CloudSpec {
    pub center: OrientedPoint,
    pub k: usize,
}

/// Generate the grid positions in row-major order (`i` outer, `j` inner,
/// both from `-k` to `k`).
pub fn square_grid(spec: &GridSpec) -> Result<Vec<(f64, f64)>, Error> {
    if !(spec.l.is_finite() && spec.l > 0.0) {
        return Err(Error::InvalidParameter("grid spacing must be positive"));
    }
    let k = spec.k as i64;
    let (cx, cy) = spec.center;
    let mut out = Vec::with_capacity((2 * spec.k + 1) * (2 * spec.k + 1));
    for i in -k..=k {
        for j in -k..=k {
            out.push((cx + i as f64 * spec.l, cy + j as f64 * spec.l));
        }
    }
    Ok(out)
}

/// Generate the cloud orientations, normalized.
pub fn angle_cloud(spec: &CloudSpec) -> Result<Vec<OrientedPoint>, Error> {
    if spec.k < 1 {
        return Err(Error::InvalidParameter("cloud size must be at least 1"));
    }
    let c = spec.center;
    Ok((1..=spec.k)
        .map(|i| OrientedPoint::wrap(c.x, c.y, c.a + TAU * i as f64 / spec.k as f64))
        .collect())
}

fn check_expansion_params(h_apr: f64, a: f64, eps: f64) -> Result<(), Error> {
    if !(h_apr.is_finite() && h_apr >= 0.0) {
        return Err(Error::InvalidParameter("h_apr must be >= 0"));
    }
    if !(a.is_finite() && a > 1.0) {
        return Err(Error::InvalidParameter("approximation constant A must exceed 1"));
    }
    if !(eps.is_finite() && eps > 0.0) {
        return Err(Error::InvalidParameter("eps must be positive"));
    }
    Ok(())
}

/// Grid parameters `(l, k)` used by the large-diameter (pure grid) schemes.
pub fn grid_params(metric: Metric, h_apr: f64, a: f64, eps: f64) -> (f64, usize) {
    let aa = a * a - a;
    match metric {
        Metric::L1Oriented => (eps * h_apr / aa, math::ceil(aa / eps) as usize),
        Metric::L2Oriented => (
            core::f64::consts::SQRT_2 * eps * h_apr / aa,
            math::ceil(aa / (core::f64::consts::SQRT_2 * eps)) as usize,
        ),
    }
}

/// Expand every background point into a square grid of pin targets; each
/// generated point inherits its source point's orientation (grid points are
/// purely positional pin targets in the large-diameter schemes).
///
/// `h_apr = 0` means the base match was exact; the expansion is skipped and
/// `B` is returned unchanged.
pub fn expand_grid(
    background: &PointSet,
    h_apr: f64,
    a: f64,
    eps: f64,
    metric: Metric,
) -> Result<PointSet, Error> {
    background.require_non_empty()?;
    check_expansion_params(h_apr, a, eps)?;
    if h_apr == 0.0 {
        return Ok(background.clone());
    }
    let (l, k) = grid_params(metric, h_apr, a, eps);
    let per = (2 * k + 1) * (2 * k + 1);
    let mut out = Vec::with_capacity(background.len() * per);
    for b in background.iter() {
        let positions = square_grid(&GridSpec {
            center: (b.x, b.y),
            l,
            k,
        })?;
        out.extend(
            positions
                .into_iter()
                .map(|(x, y)| OrientedPoint::wrap(x, y, b.a)),
        );
    }
    Ok(PointSet::new(out, Role::Background))
}

/// Default floor on the cloud's angular step; caps the cloud size when
/// `h_apr` is tiny. A hit is surfaced through [`CloudExpansion::clamped`],
/// never silent.
pub const MIN_ANGULAR_STEP: f64 = 1e-4;

/// Result of [`expand_grid_cloud`], carrying the chosen parameters and
/// whether the cloud-size cap was hit.
#[derive(Debug, Clone)]
pub struct CloudExpansion {
    pub points: PointSet,
    pub grid_l: f64,
    pub grid_k: usize,
    pub cloud_k: usize,
    pub clamped: bool,
}

/// Grid + angle-cloud expansion used by the small-diameter schemes: a finer
/// grid than [`expand_grid`], then each grid point replaced by an angle cloud
/// whose step keeps the combined positional+angular displacement within
/// `ε·h_apr/(A²−A)` under the run's metric.
pub fn expand_grid_cloud(
    background: &PointSet,
    h_apr: f64,
    a: f64,
    eps: f64,
    metric: Metric,
) -> Result<CloudExpansion, Error> {
    expand_grid_cloud_with_floor(background, h_apr, a, eps, metric, MIN_ANGULAR_STEP)
}

pub fn expand_grid_cloud_with_floor(
    background: &PointSet,
    h_apr: f64,
    a: f64,
    eps: f64,
    metric: Metric,
    angular_step_floor: f64,
) -> Result<CloudExpansion, Error> {
    background.require_non_empty()?;
    check_expansion_params(h_apr, a, eps)?;
    if h_apr == 0.0 {
        return Ok(CloudExpansion {
            points: background.clone(),
            grid_l: 0.0,
            grid_k: 0,
            cloud_k: 1,
            clamped: false,
        });
    }
    let aa = a * a - a;
    let (grid_l, grid_k, cloud_k_raw) = match metric {
        // Angular error must stay within ε·h_apr/(2(A²−A)), so the cloud
        // step 2π/k is at most twice that.
        Metric::L1Oriented => (
            eps * h_apr / (2.0 * aa),
            math::ceil(2.0 * aa / eps) as usize,
            math::ceil(2.0 * core::f64::consts::PI * aa / (eps * h_apr)) as usize,
        ),
        // For μ2 the budget splits evenly in squares: ε·h_apr/(√2(A²−A)) each.
        Metric::L2Oriented => (
            eps * h_apr / aa,
            math::ceil(aa / eps) as usize,
            math::ceil(core::f64::consts::SQRT_2 * core::f64::consts::PI * aa / (eps * h_apr))
                as usize,
        ),
    };
    let cap = math::ceil(TAU / angular_step_floor) as usize;
    let (cloud_k, clamped) = if cloud_k_raw > cap {
        (cap, true)
    } else {
        (cloud_k_raw.max(1), false)
    };
    let per = (2 * grid_k + 1) * (2 * grid_k + 1) * cloud_k;
    let mut out = Vec::with_capacity(background.len() * per);
    for b in background.iter() {
        let positions = square_grid(&GridSpec {
            center: (b.x, b.y),
            l: grid_l,
            k: grid_k,
        })?;
        for (x, y) in positions {
            out.extend(angle_cloud(&CloudSpec {
                center: OrientedPoint::wrap(x, y, b.a),
                k: cloud_k,
            })?);
        }
    }
    Ok(CloudExpansion {
        points: PointSet::new(out, Role::Background),
        grid_l,
        grid_k,
        cloud_k,
        clamped,
    })
}

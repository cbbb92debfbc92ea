//! Domain types and exact computations: oriented points, the two cylinder
//! metrics, similarity transforms, directed Hausdorff distance, and the
//! diametric pair of a point set.

mod diameter;
mod hausdorff;
mod metric;
mod point;
mod transform;

pub use diameter::diameter_pair;
pub use hausdorff::{directed_hausdorff, query_exact, ExactNn, Neighbor, NnProvider};
pub use metric::{angular_distance, mu, Metric};
pub use point::{normalize_angle, OrientedPoint, PointSet, Role};
pub use transform::{apply_transform, SimilarityTransform};

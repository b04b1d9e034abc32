//! Planar domains, cones, gauges, Wulff shapes, meshes and perimeters.

mod cone;
mod gauge;
mod mesh;
mod perimeter;
mod polygon;
pub mod quadrature;
mod vec2;
mod wulff;

pub use cone::ConvexCone;
pub use gauge::{gauge_check, Gauge, GaugeReport, GAUGE_CHECK_TOL};
pub use mesh::{triangulate, BoundaryEdge, TriMesh, MIN_ANGLE_DEG};
pub use perimeter::{ball_constants, perimeter_weighted, relative_perimeter, GRADED_SUBEDGES};
pub use polygon::{point_segment_distance, Polygon};
pub use vec2::{Sym2, Vec2};
pub use wulff::{wulff_shape, WulffShape};

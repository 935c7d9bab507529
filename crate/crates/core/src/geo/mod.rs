//! Flight paths: trajectories, segments, attribute alignment,
//! simplification and map projection.

mod error;
pub mod mercator;
mod simplify;
mod trajectory;

pub use error::GeoError;
pub use simplify::{simplify, simplify_chart, simplify_indices, sq_segment_dist, ChartBudget, Point};
pub use trajectory::{align_attribute, build_trajectory, segments, split_by_window, GeoSample, Segment};

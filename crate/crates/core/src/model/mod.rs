//! The log as a queryable table: attribute series, time windows, events,
//! the position hierarchy and flight metadata.

mod attr;
mod derived;
mod error;
mod events;
mod hierarchy;
mod meta;
mod series;
mod window;

pub use attr::{glob_match, AttributePattern, AttributeRef};
pub use derived::{derived_fields, euler_from_quaternion};
pub use error::ModelError;
pub use events::{extract_events, Event, EventKind, ModeInfo, ModeSource, ModeTable};
pub use hierarchy::{
    extract_hierarchy, valid_fixes, HierarchyConfig, Layer, LayerKind, PathHierarchy, PositionFix,
    PositionSource,
};
pub use meta::{flight_meta, FlightMeta};
pub use series::{detect_constant, field_names, get_series, summarize, Summary, TimeSeries};
pub use window::TimeWindow;

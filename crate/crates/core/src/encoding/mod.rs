//! Color scales for path enrichment and the overview chart profile.

mod color;
pub mod palette;
mod profile;
mod scale;

pub use color::{cie_lightness, Rgb};
pub use profile::{resolve_profile, ChartSeries, ChartSpec, OverviewProfile, ProfileEntry, ProfileGroup, RenderAs};
pub use scale::{
    make_scale, make_scale_with_stops, map_category, map_label, map_value, ColorScale, Domain,
    EncodingError, ScaleKind,
};

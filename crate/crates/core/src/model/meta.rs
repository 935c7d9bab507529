use super::hierarchy::{extract_hierarchy, valid_fixes};
use super::HierarchyConfig;
use crate::ulog::FlightLog;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlightMeta {
    /// Logger start time from the file header.
    pub start_us: u64,
    /// Largest data timestamp.
    pub end_us: u64,
    pub duration_us: u64,
    /// First valid fix of the recorded position layer, degrees.
    pub reference: Option<(f64, f64)>,
    pub message_count: usize,
    pub attribute_count: usize,
    pub truncated: bool,
}

/// Flight duration runs from the logger start in the file header to the
/// latest data timestamp, the same span the reference tooling reports.
pub fn flight_meta(log: &FlightLog, config: &HierarchyConfig) -> FlightMeta {
    let reference = extract_hierarchy(log, config)
        .recorded
        .and_then(|layer| valid_fixes(log, &layer.source).first().map(|f| (f.1, f.2)));
    FlightMeta {
        start_us: log.start_boot_us(),
        end_us: log.last_timestamp_us(),
        duration_us: log.last_timestamp_us() - log.start_boot_us(),
        reference,
        message_count: log.series().len(),
        attribute_count: log.attribute_count(),
        truncated: log.truncated(),
    }
}

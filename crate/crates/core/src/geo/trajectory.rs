use alloc::vec::Vec;

use super::GeoError;
use crate::model::{valid_fixes, PositionSource, TimeSeries, TimeWindow};
use crate::ulog::FlightLog;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeoSample {
    pub timestamp_us: u64,
    /// Degrees, `-90..=90`.
    pub lat: f64,
    /// Degrees, `-180 < lon <= 180`.
    pub lon: f64,
    pub alt_m: Option<f64>,
}

/// The valid fixes of one layer, in time order. When several records
/// share a timestamp only the first is kept.
pub fn build_trajectory(log: &FlightLog, source: &PositionSource) -> Result<Vec<GeoSample>, GeoError> {
    let mut out: Vec<GeoSample> = Vec::new();
    for (t, lat, lon, alt_m) in valid_fixes(log, source) {
        if out.last().is_some_and(|p| p.timestamp_us == t) {
            continue;
        }
        out.push(GeoSample {
            timestamp_us: t,
            lat,
            lon,
            alt_m,
        });
    }
    if out.is_empty() {
        return Err(GeoError::NoPosition);
    }
    Ok(out)
}

/// The path between two consecutive samples.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub t_start_us: u64,
    pub t_end_us: u64,
    pub start: GeoSample,
    pub end: GeoSample,
    /// Aligned attribute value; `None` is no-data.
    pub value: Option<f64>,
}

/// `n - 1` chained segments from `n` time-ordered samples with distinct timestamps.
pub fn segments(traj: &[GeoSample]) -> Result<Vec<Segment>, GeoError> {
    if traj.len() < 2 {
        return Err(GeoError::DegenerateTrajectory);
    }
    Ok(traj
        .windows(2)
        .map(|w| Segment {
            t_start_us: w[0].timestamp_us,
            t_end_us: w[1].timestamp_us,
            start: w[0],
            end: w[1],
            value: None,
        })
        .collect())
}

/// Values each segment with the attribute's last observation at or
/// before its start. Segments that start before the first observation,
/// or whose observation is NaN, get no-data.
pub fn align_attribute(segs: &[Segment], series: &TimeSeries) -> Vec<Segment> {
    segs.iter()
        .map(|s| Segment {
            value: series.value_at(s.t_start_us).filter(|v| !v.is_nan()),
            ..*s
        })
        .collect()
}

/// Splits into segments whose start lies inside the window and the rest,
/// each in input order.
pub fn split_by_window(segs: &[Segment], window: &TimeWindow) -> (Vec<Segment>, Vec<Segment>) {
    segs.iter().partition(|s| window.contains(s.t_start_us))
}

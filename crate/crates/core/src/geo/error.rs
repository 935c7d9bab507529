use core::fmt;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GeoError {
    /// The layer has no valid position.
    NoPosition,
    /// Fewer than two samples; no segment can be formed.
    DegenerateTrajectory,
    /// Outside the Web-Mercator latitude limit.
    LatitudeOutOfRange(f64),
}

impl fmt::Display for GeoError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::NoPosition => f.write_str("no valid position samples"),
            Self::DegenerateTrajectory => f.write_str("trajectory needs at least two samples"),
            Self::LatitudeOutOfRange(lat) => write!(f, "latitude {lat} outside the Mercator range"),
        }
    }
}

impl core::error::Error for GeoError {}

use alloc::string::String;
use alloc::vec::Vec;

use super::events::ModeSource;
use super::AttributeRef;
use crate::ulog::FlightLog;

/// Where one position layer lives in the log and how to decode it.
#[derive(Debug, Clone, PartialEq)]
pub struct PositionSource {
    pub message: String,
    pub multi_id: u8,
    pub lat: String,
    pub lon: String,
    pub alt: Option<String>,
    /// Multiplier from stored lat/lon to degrees (1e-7 for fixed-point GPS).
    pub lat_lon_scale: f64,
    /// Multiplier from stored altitude to meters.
    pub alt_scale: f64,
    /// Records whose fix field is below `min_fix` are invalid.
    pub fix_field: Option<String>,
    pub min_fix: f64,
    /// Records whose validity flag is zero are invalid.
    pub valid_field: Option<String>,
}

impl PositionSource {
    /// A source with degree lat/lon, meter altitude and no validity fields.
    pub fn new(message: impl Into<String>, lat: impl Into<String>, lon: impl Into<String>) -> Self {
        Self {
            message: message.into(),
            multi_id: 0,
            lat: lat.into(),
            lon: lon.into(),
            alt: None,
            lat_lon_scale: 1.0,
            alt_scale: 1.0,
            fix_field: None,
            min_fix: 0.0,
            valid_field: None,
        }
    }

    pub fn attr(&self, field: &str) -> AttributeRef {
        AttributeRef::new(self.message.clone(), self.multi_id, field)
    }

    /// Every referenced field exists in the message layout.
    pub fn resolves(&self, log: &FlightLog) -> bool {
        let Some(schema) = log.schema(&self.message, self.multi_id) else {
            return false;
        };
        [Some(&self.lat), Some(&self.lon), self.alt.as_ref(), self.fix_field.as_ref(), self.valid_field.as_ref()]
            .into_iter()
            .flatten()
            .all(|f| schema.field(f).is_some())
    }

    pub fn record_count(&self, log: &FlightLog) -> usize {
        log.get(&self.message, self.multi_id).map_or(0, |s| s.len())
    }
}

/// A decoded position: timestamp, latitude and longitude in degrees,
/// optional altitude in meters.
pub type PositionFix = (u64, f64, f64, Option<f64>);

/// Valid fixes of `source` in time order. Records at (0, 0), with a fix
/// below the threshold, flagged invalid, non-finite or out of range are
/// dropped; longitude -180 is reported as 180.
pub fn valid_fixes(log: &FlightLog, source: &PositionSource) -> Vec<PositionFix> {
    let Some(series) = log.get(&source.message, source.multi_id) else {
        return Vec::new();
    };
    let col = |name: &str| series.column(name).map(|c| c.to_f64_vec());
    let (Some(lat), Some(lon)) = (col(&source.lat), col(&source.lon)) else {
        return Vec::new();
    };
    let alt = source.alt.as_deref().and_then(col);
    let fix = source.fix_field.as_deref().and_then(col);
    let valid = source.valid_field.as_deref().and_then(col);

    let mut out = Vec::new();
    for (i, &t) in series.timestamps.iter().enumerate() {
        if lat[i] == 0.0 && lon[i] == 0.0 {
            continue;
        }
        if fix.as_ref().is_some_and(|f| !(f[i] >= source.min_fix)) {
            continue;
        }
        if valid.as_ref().is_some_and(|v| v[i] == 0.0) {
            continue;
        }
        let la = lat[i] * source.lat_lon_scale;
        let mut lo = lon[i] * source.lat_lon_scale;
        if !la.is_finite() || !lo.is_finite() || la.abs() > 90.0 || lo.abs() > 180.0 {
            continue;
        }
        if lo == -180.0 {
            lo = 180.0;
        }
        let a = alt.as_ref().map(|a| a[i] * source.alt_scale).filter(|a| a.is_finite());
        out.push((t, la, lo, a));
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LayerKind {
    /// What the vehicle actually did (GPS).
    Recorded,
    /// The estimator's belief.
    Estimated,
    /// Commanded targets.
    Setpoints,
}

impl LayerKind {
    pub const ALL: [Self; 3] = [Self::Recorded, Self::Estimated, Self::Setpoints];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Recorded => "recorded",
            Self::Estimated => "estimated",
            Self::Setpoints => "setpoints",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.as_str() == s)
    }
}

/// Candidate sources per layer, tried in order, and flight-mode attributes.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct HierarchyConfig {
    pub recorded: Vec<PositionSource>,
    pub estimated: Vec<PositionSource>,
    pub setpoints: Vec<PositionSource>,
    pub flight_mode: Vec<ModeSource>,
}

impl HierarchyConfig {
    pub fn candidates(&self, kind: LayerKind) -> &[PositionSource] {
        match kind {
            LayerKind::Recorded => &self.recorded,
            LayerKind::Estimated => &self.estimated,
            LayerKind::Setpoints => &self.setpoints,
        }
    }
}

/// A resolved layer. `records` is zero when the message was subscribed
/// but never logged.
#[derive(Debug, Clone, PartialEq)]
pub struct Layer {
    pub source: PositionSource,
    pub records: usize,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct PathHierarchy {
    pub recorded: Option<Layer>,
    pub estimated: Option<Layer>,
    pub setpoints: Option<Layer>,
}

impl PathHierarchy {
    pub fn layer(&self, kind: LayerKind) -> Option<&Layer> {
        match kind {
            LayerKind::Recorded => self.recorded.as_ref(),
            LayerKind::Estimated => self.estimated.as_ref(),
            LayerKind::Setpoints => self.setpoints.as_ref(),
        }
    }
}

/// Picks, per layer, the first candidate with data, or failing that the
/// first candidate whose fields resolve. Layers with no resolving
/// candidate are absent.
pub fn extract_hierarchy(log: &FlightLog, config: &HierarchyConfig) -> PathHierarchy {
    let pick = |kind| {
        let resolving: Vec<&PositionSource> =
            config.candidates(kind).iter().filter(|s| s.resolves(log)).collect();
        let chosen = resolving
            .iter()
            .find(|s| s.record_count(log) > 0)
            .or(resolving.first())?;
        Some(Layer {
            source: (*chosen).clone(),
            records: chosen.record_count(log),
        })
    };
    PathHierarchy {
        recorded: pick(LayerKind::Recorded),
        estimated: pick(LayerKind::Estimated),
        setpoints: pick(LayerKind::Setpoints),
    }
}

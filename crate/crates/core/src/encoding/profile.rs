//! The curated overview: groups of attribute patterns resolved against
//! a log into concrete charts.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::EncodingError;
use crate::model::{detect_constant, field_names, get_series, AttributePattern, AttributeRef};
use crate::ulog::FlightLog;

#[derive(Debug, Clone, PartialEq)]
pub struct ProfileEntry {
    pub pattern: AttributePattern,
    pub label: Option<String>,
    pub unit: Option<String>,
    /// Multiplier applied to values before display (e.g. 1e-3 for mm to m).
    pub scale: f64,
}

impl ProfileEntry {
    pub fn new(pattern: AttributePattern) -> Self {
        Self {
            pattern,
            label: None,
            unit: None,
            scale: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProfileGroup {
    pub title: String,
    pub entries: Vec<ProfileEntry>,
    /// Plot all entries on one chart with a common y axis.
    pub shared_scale: bool,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct OverviewProfile {
    pub groups: Vec<ProfileGroup>,
}

impl OverviewProfile {
    /// Entries of a shared-scale group must all carry the same unit.
    pub fn validate(&self) -> Result<(), EncodingError> {
        for g in self.groups.iter().filter(|g| g.shared_scale) {
            if let Some(first) = g.entries.first() {
                if g.entries.iter().any(|e| e.unit != first.unit) {
                    return Err(EncodingError::UnitMismatch {
                        group: g.title.clone(),
                    });
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChartSeries {
    pub attr: AttributeRef,
    pub label: String,
    pub unit: Option<String>,
    pub scale: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum RenderAs {
    Chart,
    /// Every series is constant; shows the scaled values instead of a chart.
    ConstantRow { values: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChartSpec {
    pub title: String,
    pub series: Vec<ChartSeries>,
    pub render: RenderAs,
}

impl ChartSpec {
    /// The constant values joined for display, e.g. `"42"`.
    pub fn constant_text(&self) -> Option<String> {
        match &self.render {
            RenderAs::ConstantRow { values } => Some(
                values
                    .iter()
                    .map(|v| v.to_string())
                    .collect::<Vec<_>>()
                    .join(", "),
            ),
            RenderAs::Chart => None,
        }
    }
}

fn resolve_entry(entry: &ProfileEntry, log: &FlightLog, out: &mut Vec<ChartSeries>) {
    for key in log.series().keys() {
        if !entry.pattern.matches_series(&key.name, key.multi_id) {
            continue;
        }
        let fields = field_names(log, &key.name, key.multi_id).unwrap_or_default();
        for field in fields.iter().filter(|f| entry.pattern.matches_field(f)) {
            let attr = AttributeRef::new(key.name.clone(), key.multi_id, field.clone());
            if out.iter().any(|s| s.attr == attr) {
                continue;
            }
            let label = match &entry.label {
                Some(l) if key.multi_id == 0 => l.clone(),
                Some(l) => format!("{l} ({})", key.multi_id),
                None => attr.to_string(),
            };
            out.push(ChartSeries {
                attr,
                label,
                unit: entry.unit.clone(),
                scale: entry.scale,
            });
        }
    }
}

fn make_spec(log: &FlightLog, title: String, series: Vec<ChartSeries>) -> ChartSpec {
    let constants: Option<Vec<f64>> = series
        .iter()
        .map(|s| {
            let ts = get_series(log, &s.attr, None).ok()?;
            detect_constant(&ts).ok().flatten().map(|v| v * s.scale)
        })
        .collect();
    ChartSpec {
        title,
        series,
        render: constants.map_or(RenderAs::Chart, |values| RenderAs::ConstantRow { values }),
    }
}

/// Charts for the attributes of `profile` that exist in `log` and hold
/// data, in profile order. A shared-scale group becomes one chart; any
/// other group becomes one chart per resolved attribute. Groups that
/// resolve to nothing are left out.
pub fn resolve_profile(profile: &OverviewProfile, log: &FlightLog) -> Vec<ChartSpec> {
    let mut specs = Vec::new();
    for group in &profile.groups {
        let mut series = Vec::new();
        for entry in &group.entries {
            resolve_entry(entry, log, &mut series);
        }
        if series.is_empty() {
            continue;
        }
        if group.shared_scale || series.len() == 1 {
            specs.push(make_spec(log, group.title.clone(), series));
        } else {
            for s in series {
                let title = format!("{} · {}", group.title, s.label);
                specs.push(make_spec(log, title, alloc::vec![s]));
            }
        }
    }
    specs
}

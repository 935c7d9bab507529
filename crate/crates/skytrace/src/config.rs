//! TOML files for the position hierarchy, flight-mode tables and the
//! overview profile. Built-in defaults are compiled in.

use std::path::Path;

use anyhow::Context;
use serde::Deserialize;
use skytrace_core::encoding::{OverviewProfile, ProfileEntry, ProfileGroup};
use skytrace_core::model::{
    AttributePattern, AttributeRef, HierarchyConfig, ModeSource, ModeTable, PositionSource,
};

pub const DEFAULT_HIERARCHY: &str = include_str!("../config/hierarchy.toml");
pub const DEFAULT_PROFILE: &str = include_str!("../config/profile.toml");

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SourceFile {
    message: String,
    #[serde(default)]
    multi_id: u8,
    lat: String,
    lon: String,
    alt: Option<String>,
    #[serde(default = "one")]
    lat_lon_scale: f64,
    #[serde(default = "one")]
    alt_scale: f64,
    fix_field: Option<String>,
    #[serde(default)]
    min_fix: f64,
    valid_field: Option<String>,
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModeFile {
    id: i64,
    label: String,
    #[serde(default)]
    failsafe: bool,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModeSourceFile {
    attr: String,
    modes: Vec<ModeFile>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct HierarchyFile {
    #[serde(default)]
    recorded: Vec<SourceFile>,
    #[serde(default)]
    estimated: Vec<SourceFile>,
    #[serde(default)]
    setpoints: Vec<SourceFile>,
    #[serde(default)]
    flight_mode: Vec<ModeSourceFile>,
}

impl From<SourceFile> for PositionSource {
    fn from(s: SourceFile) -> Self {
        PositionSource {
            message: s.message,
            multi_id: s.multi_id,
            lat: s.lat,
            lon: s.lon,
            alt: s.alt,
            lat_lon_scale: s.lat_lon_scale,
            alt_scale: s.alt_scale,
            fix_field: s.fix_field,
            min_fix: s.min_fix,
            valid_field: s.valid_field,
        }
    }
}

pub fn parse_hierarchy(text: &str) -> anyhow::Result<HierarchyConfig> {
    let file: HierarchyFile = toml::from_str(text)?;
    let sources = |v: Vec<SourceFile>| v.into_iter().map(PositionSource::from).collect();
    let mut flight_mode = Vec::new();
    for src in file.flight_mode {
        let attr = AttributeRef::parse(&src.attr)
            .with_context(|| format!("flight mode attribute '{}'", src.attr))?;
        let mut modes = ModeTable::new();
        for m in src.modes {
            modes.insert(m.id, m.label, m.failsafe);
        }
        flight_mode.push(ModeSource { attr, modes });
    }
    Ok(HierarchyConfig {
        recorded: sources(file.recorded),
        estimated: sources(file.estimated),
        setpoints: sources(file.setpoints),
        flight_mode,
    })
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct EntryFile {
    attr: String,
    label: Option<String>,
    unit: Option<String>,
    #[serde(default = "one")]
    scale: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct GroupFile {
    title: String,
    #[serde(default)]
    shared_scale: bool,
    entries: Vec<EntryFile>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProfileFile {
    #[serde(default)]
    group: Vec<GroupFile>,
}

pub fn parse_profile(text: &str) -> anyhow::Result<OverviewProfile> {
    let file: ProfileFile = toml::from_str(text)?;
    let mut groups = Vec::new();
    for g in file.group {
        let mut entries = Vec::new();
        for e in g.entries {
            let pattern = AttributePattern::parse(&e.attr)
                .with_context(|| format!("profile attribute '{}'", e.attr))?;
            entries.push(ProfileEntry {
                pattern,
                label: e.label,
                unit: e.unit,
                scale: e.scale,
            });
        }
        groups.push(ProfileGroup {
            title: g.title,
            entries,
            shared_scale: g.shared_scale,
        });
    }
    let profile = OverviewProfile { groups };
    profile.validate()?;
    Ok(profile)
}

/// The hierarchy and profile used by both the CLI and the service.
#[derive(Debug, Clone)]
pub struct AnalysisConfig {
    pub hierarchy: HierarchyConfig,
    pub profile: OverviewProfile,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        Self {
            hierarchy: parse_hierarchy(DEFAULT_HIERARCHY).expect("built-in hierarchy"),
            profile: parse_profile(DEFAULT_PROFILE).expect("built-in profile"),
        }
    }
}

impl AnalysisConfig {
    /// Defaults, with either file replaced when a path is given.
    pub fn load(hierarchy: Option<&Path>, profile: Option<&Path>) -> anyhow::Result<Self> {
        let read = |p: &Path| {
            std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))
        };
        let hierarchy = match hierarchy {
            Some(p) => parse_hierarchy(&read(p)?).with_context(|| format!("in {}", p.display()))?,
            None => parse_hierarchy(DEFAULT_HIERARCHY)?,
        };
        let profile = match profile {
            Some(p) => parse_profile(&read(p)?).with_context(|| format!("in {}", p.display()))?,
            None => parse_profile(DEFAULT_PROFILE)?,
        };
        Ok(Self { hierarchy, profile })
    }
}

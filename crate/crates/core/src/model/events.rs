use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::series::get_series;
use super::{AttributeRef, HierarchyConfig};
use crate::ulog::FlightLog;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModeInfo {
    pub label: String,
    /// The vehicle only enters this mode on its own, as a failsafe reaction.
    pub failsafe: bool,
}

/// Mode id to label mapping for one flight-mode attribute.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ModeTable {
    modes: BTreeMap<i64, ModeInfo>,
}

impl ModeTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, id: i64, label: impl Into<String>, failsafe: bool) -> &mut Self {
        self.modes.insert(
            id,
            ModeInfo {
                label: label.into(),
                failsafe,
            },
        );
        self
    }

    pub fn get(&self, id: i64) -> Option<&ModeInfo> {
        self.modes.get(&id)
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, &ModeInfo)> {
        self.modes.iter().map(|(k, v)| (*k, v))
    }

    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }
}

/// An attribute holding the flight mode and how to label its values.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeSource {
    pub attr: AttributeRef,
    pub modes: ModeTable,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EventKind {
    FlightModeChange,
    LoggedMessage,
}

impl EventKind {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::FlightModeChange => "flight_mode_change",
            Self::LoggedMessage => "logged_message",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Event {
    pub timestamp_us: u64,
    pub kind: EventKind,
    pub label: String,
    /// Mode id for mode changes, severity (0 emergency .. 8 unknown) for messages.
    pub category_index: u32,
    /// Set for changes into a failsafe mode.
    pub failsafe: bool,
}

/// Flight-mode changes from the first configured mode attribute with
/// data, plus every logged text message, ordered by time.
///
/// Ties keep mode changes before messages. Consecutive mode samples with
/// the same label collapse into one event.
pub fn extract_events(log: &FlightLog, config: &HierarchyConfig) -> Vec<Event> {
    let mut events = mode_events(log, config);
    events.extend(log.logged_text().iter().map(|m| Event {
        timestamp_us: m.timestamp_us,
        kind: EventKind::LoggedMessage,
        label: m.text.clone(),
        category_index: m.severity().index(),
        failsafe: false,
    }));
    events.sort_by_key(|e| e.timestamp_us);
    events
}

fn mode_events(log: &FlightLog, config: &HierarchyConfig) -> Vec<Event> {
    let Some((source, series)) = config.flight_mode.iter().find_map(|src| {
        get_series(log, &src.attr, None)
            .ok()
            .filter(|s| !s.is_empty())
            .map(|s| (src, s))
    }) else {
        return Vec::new();
    };
    let mut events: Vec<Event> = Vec::new();
    for (t, v) in series.points() {
        if !v.is_finite() {
            continue;
        }
        let id = v as i64;
        let (label, failsafe) = match source.modes.get(id) {
            Some(m) => (m.label.clone(), m.failsafe),
            None => (format!("Mode {id}"), false),
        };
        if events.last().is_some_and(|e| e.label == label) {
            continue;
        }
        events.push(Event {
            timestamp_us: t,
            kind: EventKind::FlightModeChange,
            label,
            category_index: u32::try_from(id).unwrap_or(u32::MAX),
            failsafe,
        });
    }
    events
}

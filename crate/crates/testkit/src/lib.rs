//! Test support: a hand encoder for ULog streams, synthetic flights, and
//! comparison against frozen reference-parser dumps.

pub mod encoder;
pub mod oracle;
pub mod scenarios;

pub use encoder::{Fields, ULogWriter};

use std::path::PathBuf;

/// `crates/core/tests/data`, where sample logs and oracle dumps live.
pub fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/tests/data")
}

/// Real logs recorded by PX4 vehicles, each with a frozen oracle dump.
pub const REAL_LOGS: [&str; 3] = ["px4_sample.ulg", "px4_sample_small.ulg", "px4_cubeorange.ulg"];

/// Synthetic fixtures written by `write-fixtures`, relative to [`data_dir`].
pub fn synthetic_fixtures() -> Vec<(&'static str, Vec<u8>)> {
    vec![
        ("synthetic/minimal.ulg", scenarios::minimal_log()),
        ("synthetic/definitions_only.ulg", scenarios::definitions_only_log()),
        ("synthetic/nested.ulg", scenarios::nested_log()),
        ("synthetic/truncated.ulg", scenarios::truncated_log()),
        ("synthetic/appended.ulg", scenarios::appended_log()),
        ("synthetic/rc_loss.ulg", scenarios::rc_loss_log()),
    ]
}

pub fn read_fixture(name: &str) -> Vec<u8> {
    let path = data_dir().join(name);
    std::fs::read(&path).unwrap_or_else(|e| panic!("reading {}: {e}", path.display()))
}

/// Hierarchy candidates for the synthetic and sample logs, matching the
/// shipped defaults closely enough for core-level tests.
pub fn test_hierarchy() -> skytrace_core::model::HierarchyConfig {
    use skytrace_core::model::{AttributeRef, HierarchyConfig, ModeSource, ModeTable, PositionSource};

    let gps = |message: &str| PositionSource {
        alt: Some("alt".into()),
        lat_lon_scale: 1e-7,
        alt_scale: 1e-3,
        fix_field: Some("fix_type".into()),
        min_fix: 3.0,
        ..PositionSource::new(message, "lat", "lon")
    };
    let global = PositionSource {
        alt: Some("alt".into()),
        ..PositionSource::new("vehicle_global_position", "lat", "lon")
    };
    let setpoint = PositionSource {
        alt: Some("current.alt".into()),
        valid_field: Some("current.valid".into()),
        ..PositionSource::new("position_setpoint_triplet", "current.lat", "current.lon")
    };
    let mut nav = ModeTable::new();
    for (id, label, failsafe) in [
        (0, "Manual", false),
        (1, "Altitude", false),
        (2, "Position", false),
        (3, "Mission", false),
        (4, "Hold", false),
        (5, "Return", true),
        (12, "Descend", true),
        (14, "Offboard", false),
        (17, "Takeoff", false),
        (18, "Land", true),
    ] {
        nav.insert(id, label, failsafe);
    }
    HierarchyConfig {
        recorded: vec![gps("vehicle_gps_position"), gps("sensor_gps")],
        estimated: vec![global],
        setpoints: vec![setpoint],
        flight_mode: vec![ModeSource {
            attr: AttributeRef::new("vehicle_status", 0, "nav_state"),
            modes: nav,
        }],
    }
}

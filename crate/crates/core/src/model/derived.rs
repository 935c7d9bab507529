//! Euler angles derived from attitude quaternions.
//!
//! Newer firmware logs attitude only as a quaternion `q[0..3]` (and the
//! setpoint as `q_d[0..3]`). When a message has the quaternion but not
//! the named angle, `roll`/`pitch`/`yaw` (from `q`) and
//! `roll_body`/`pitch_body`/`yaw_body` (from `q_d`) are computed on read.

use alloc::vec::Vec;

use crate::ulog::{MessageSchema, MessageSeries};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Angle {
    Roll,
    Pitch,
    Yaw,
}

const DERIVED: [(&str, &str, Angle); 6] = [
    ("roll", "q", Angle::Roll),
    ("pitch", "q", Angle::Pitch),
    ("yaw", "q", Angle::Yaw),
    ("roll_body", "q_d", Angle::Roll),
    ("pitch_body", "q_d", Angle::Pitch),
    ("yaw_body", "q_d", Angle::Yaw),
];

fn has_quaternion(schema: &MessageSchema, prefix: &str) -> bool {
    (0..4).all(|i| schema.field(&alloc::format!("{prefix}[{i}]")).is_some())
}

/// The quaternion prefix and angle behind a derived field name.
pub(crate) fn source(schema: &MessageSchema, field: &str) -> Option<(&'static str, Angle)> {
    if schema.field(field).is_some() {
        return None;
    }
    DERIVED
        .iter()
        .find(|(name, prefix, _)| *name == field && has_quaternion(schema, prefix))
        .map(|&(_, prefix, angle)| (prefix, angle))
}

/// Derived field names available for this message, in a fixed order.
pub fn derived_fields(schema: &MessageSchema) -> Vec<&'static str> {
    DERIVED
        .iter()
        .filter(|(name, _, _)| source(schema, name).is_some())
        .map(|(name, _, _)| *name)
        .collect()
}

/// Roll, pitch and yaw in radians (Z-Y-X convention) of the unit
/// quaternion `(w, x, y, z)`.
pub fn euler_from_quaternion(w: f64, x: f64, y: f64, z: f64) -> (f64, f64, f64) {
    let roll = libm::atan2(2.0 * (w * x + y * z), 1.0 - 2.0 * (x * x + y * y));
    let pitch = libm::asin((2.0 * (w * y - z * x)).clamp(-1.0, 1.0));
    let yaw = libm::atan2(2.0 * (w * z + x * y), 1.0 - 2.0 * (y * y + z * z));
    (roll, pitch, yaw)
}

pub(crate) fn compute(series: &MessageSeries, prefix: &str, angle: Angle) -> Vec<f64> {
    let col = |i: usize| {
        let name = alloc::format!("{prefix}[{i}]");
        series.column(&name).map(|c| c.to_f64_vec()).unwrap_or_default()
    };
    let (w, x, y, z) = (col(0), col(1), col(2), col(3));
    (0..series.len())
        .map(|i| {
            let (r, p, yw) = euler_from_quaternion(w[i], x[i], y[i], z[i]);
            match angle {
                Angle::Roll => r,
                Angle::Pitch => p,
                Angle::Yaw => yw,
            }
        })
        .collect()
}

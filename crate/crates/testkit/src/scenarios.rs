//! Synthetic flights built with [`ULogWriter`].

use std::f64::consts::PI;

use crate::encoder::{Fields, ULogWriter};

/// Header-only file plus one schema and two data records.
pub fn minimal_log() -> Vec<u8> {
    let mut w = ULogWriter::new(1_000);
    w.format("sample:uint64_t timestamp;float value;int16_t[2] pair;")
        .subscribe(0, 0, "sample");
    w.data(0, &Fields::new().u64(1_500).f32(0.5).i16(-3).i16(7).build());
    w.data(0, &Fields::new().u64(2_500).f32(f32::NAN).i16(1).i16(-1).build());
    w.finish()
}

/// Formats, info and parameters but no subscriptions or data.
pub fn definitions_only_log() -> Vec<u8> {
    let mut w = ULogWriter::new(5);
    w.info_str("sys_name", "skytrace-test")
        .format("sample:uint64_t timestamp;float value;")
        .param_i32("SYS_AUTOSTART", 4001)
        .param_f32("MPC_XY_VEL_MAX", 12.0);
    w.finish()
}

/// Nested formats, a mid-record padding column, trailing padding that
/// is stripped, two instances of one message, and every auxiliary record type.
pub fn nested_log() -> Vec<u8> {
    let mut w = ULogWriter::new(100);
    w.info_str("sys_name", "skytrace-test")
        .info_raw("uint32_t ver_sw_release", &0x0105_00ffu32.to_le_bytes())
        .info_multiple(false, "perf_top", "first line ")
        .info_multiple(true, "perf_top", "continued")
        .format("vec3:float x;float y;float z;")
        .format("pose:uint64_t timestamp;vec3 pos;vec3[2] hist;uint8_t mode;uint8_t[3] _padding0;int32_t count;char[4] tag;uint8_t[4] _padding1;")
        .param_i32("COM_RC_LOSS_T", 1)
        .param_f32("NAV_RCL_ACT", 2.0)
        .param_default_f32(0b11, "NAV_RCL_ACT", 0.0)
        .subscribe(3, 0, "pose")
        .subscribe(4, 1, "pose");
    for i in 0..20u64 {
        let t = 1_000 + i * 10_000;
        for (id, off) in [(3u16, 0.0f32), (4, 100.0)] {
            let mut f = Fields::new().u64(t + id as u64);
            for k in 0..9 {
                f = f.f32(off + i as f32 * 0.25 + k as f32);
            }
            let f = f
                .u8((i % 4) as u8)
                .pad(3)
                .i32(-(i as i32) * 1000)
                .u8(b'a')
                .u8(b'b')
                .u8(0xff)
                .u8(0);
            w.data(id, &f.build());
        }
        if i == 5 {
            w.logging(b'6', t, "nested log info");
            w.logging_tagged(b'4', 7, t + 1, "tagged warning");
            w.param_f32("NAV_RCL_ACT", 3.0);
        }
        if i == 10 {
            w.sync().dropout(35);
        }
    }
    w.finish()
}

/// `nested_log` cut in the middle of its last data record.
pub fn truncated_log() -> Vec<u8> {
    let mut bytes = nested_log();
    bytes.truncate(bytes.len() - 5);
    bytes
}

/// A log whose flag bits announce one appended data section. The main
/// section ends with a record that crosses the appended offset and must
/// be discarded.
pub fn appended_log() -> Vec<u8> {
    let fmt = "sample:uint64_t timestamp;int32_t value;";
    let data = |t: u64, v: i32| Fields::new().u64(t).i32(v).build();

    let mut head = ULogWriter::new(0);
    head.flag_bits([0; 8], [1, 0, 0, 0, 0, 0, 0, 0], [0, 0, 0]);
    head.format(fmt).subscribe(0, 0, "sample");
    head.data(0, &data(10, 1)).data(0, &data(20, 2));
    let offset = head.len() as u64 + 8;
    // a record that straddles the appended offset, as left by a crash mid-write
    head.data(0, &data(30, 3));
    let mut bytes = head.finish();
    bytes.truncate(offset as usize);

    // patch the offset into the flag-bits record: header(16) + record header(3) + 16
    let at = 16 + 3 + 16;
    bytes[at..at + 8].copy_from_slice(&offset.to_le_bytes());

    let mut tail = ULogWriter::new(0);
    tail.data(0, &data(40, 4)).data(0, &data(50, 5));
    bytes.extend_from_slice(&tail.bytes()[16..]);
    bytes
}

/// Key times of [`rc_loss_log`], microseconds since boot.
pub mod rc_loss {
    pub const START_US: u64 = 2_000_000;
    pub const END_US: u64 = 62_000_000;
    pub const RC_LOST_US: u64 = 35_000_000;
    pub const FAILSAFE_US: u64 = 35_500_000;
    pub const HOME_LAT: f64 = 47.397_742;
    pub const HOME_LON: f64 = 8.545_594;
    /// GPS records logged before the receiver has a fix.
    pub const NO_FIX_RECORDS: usize = 3;
    pub const NAV_POSITION: u8 = 2;
    pub const NAV_MISSION: u8 = 3;
    pub const NAV_LAND: u8 = 18;
}

/// A mission flight that loses its RC link and lands in failsafe.
///
/// The RC-lost flag flips once at [`rc_loss::RC_LOST_US`]; half a second
/// later the navigation state switches to Land. The autopilot position
/// setpoint message is subscribed but never logged.
pub fn rc_loss_log() -> Vec<u8> {
    use rc_loss::*;

    let mut w = ULogWriter::new(START_US);
    w.info_str("sys_name", "PX4")
        .info_str("ver_hw", "PX4_SITL")
        .format("vehicle_gps_position:uint64_t timestamp;int32_t lat;int32_t lon;int32_t alt;float vel_m_s;uint8_t fix_type;uint8_t satellites_used;uint8_t[2] _padding0;")
        .format("vehicle_global_position:uint64_t timestamp;double lat;double lon;float alt;uint8_t[4] _padding0;")
        .format("vehicle_status:uint64_t timestamp;uint8_t nav_state;uint8_t arming_state;bool failsafe;uint8_t[5] _padding0;")
        .format("input_rc:uint64_t timestamp;int32_t rssi;bool rc_lost;uint8_t channel_count;uint8_t[2] _padding0;")
        .format("position_setpoint:uint64_t timestamp;double lat;double lon;float alt;bool valid;uint8_t type;uint8_t[2] _padding0;")
        .format("position_setpoint_triplet:uint64_t timestamp;position_setpoint previous;position_setpoint current;position_setpoint next;")
        .format("battery_status:uint64_t timestamp;float voltage_v;float current_a;float remaining;uint8_t[4] _padding0;")
        .format("vehicle_attitude:uint64_t timestamp;float[4] q;uint8_t[4] _padding0;")
        .param_i32("COM_RC_LOSS_T", 1)
        .param_i32("NAV_RCL_ACT", 3)
        .param_f32("MIS_TAKEOFF_ALT", 30.0);

    w.subscribe(0, 0, "vehicle_gps_position")
        .subscribe(1, 0, "vehicle_global_position")
        .subscribe(2, 0, "vehicle_status")
        .subscribe(3, 0, "input_rc")
        .subscribe(4, 0, "position_setpoint_triplet")
        .subscribe(5, 0, "battery_status")
        .subscribe(6, 0, "vehicle_attitude");

    w.logging(b'6', START_US + 100_000, "[commander] Takeoff detected");

    let tick = 20_000u64;
    let mut gps_count = 0usize;
    let mut t = START_US + 100_000;
    while t < END_US {
        let secs = (t - START_US) as f64 * 1e-6;
        let (lat, lon, alt) = rc_loss_position(t);
        let lost = t >= RC_LOST_US;

        if t % 200_000 == 0 {
            let fix = if gps_count < NO_FIX_RECORDS { 0 } else { 3 };
            let (la, lo) = if fix == 0 {
                (0, 0)
            } else {
                ((lat * 1e7).round() as i32, (lon * 1e7).round() as i32)
            };
            w.data(
                0,
                &Fields::new()
                    .u64(t)
                    .i32(la)
                    .i32(lo)
                    .i32((alt * 1e3).round() as i32 + 488_000)
                    .f32(if alt > 0.0 { 5.0 } else { 0.0 })
                    .u8(fix)
                    .u8(if fix == 0 { 2 } else { 12 })
                    .build(),
            );
            gps_count += 1;
        }
        if t % 100_000 == 0 {
            let (elat, elon, ealt) = rc_loss_position(t + 40_000);
            w.data(
                1,
                &Fields::new()
                    .u64(t + 1)
                    .f64(elat)
                    .f64(elon)
                    .f32(ealt as f32 + 488.0)
                    .build(),
            );
            w.data(
                3,
                &Fields::new()
                    .u64(t + 2)
                    .i32(if lost { 0 } else { 90 - ((secs * 7.0).sin() * 4.0) as i32 })
                    .u8(lost as u8)
                    .u8(if lost { 0 } else { 16 })
                    .build(),
            );
        }
        if t % 500_000 == 0 {
            let nav = if t >= FAILSAFE_US {
                NAV_LAND
            } else if t >= 8_000_000 {
                NAV_MISSION
            } else {
                NAV_POSITION
            };
            w.data(
                2,
                &Fields::new()
                    .u64(t + 3)
                    .u8(nav)
                    .u8(2)
                    .u8((t >= FAILSAFE_US) as u8)
                    .build(),
            );
        }
        if t % 1_000_000 == 0 {
            w.data(
                5,
                &Fields::new()
                    .u64(t + 4)
                    .f32((16.4 - secs * 0.01) as f32)
                    .f32(if alt > 0.0 { 12.5 } else { 0.3 })
                    .f32((0.95 - secs * 0.004) as f32)
                    .build(),
            );
        }
        let yaw = (secs * 0.1).rem_euclid(2.0 * PI) - PI;
        let (s, c) = (yaw * 0.5).sin_cos();
        w.data(
            6,
            &Fields::new()
                .u64(t + 5)
                .f32(c as f32)
                .f32(0.0)
                .f32(0.0)
                .f32(s as f32)
                .build(),
        );

        if t == RC_LOST_US {
            w.logging(b'3', t, "[commander] Manual control lost");
        }
        if t == FAILSAFE_US {
            w.logging(b'4', t, "[commander] Failsafe activated: Land");
        }
        t += tick;
    }
    w.finish()
}

fn rc_loss_position(t: u64) -> (f64, f64, f64) {
    use rc_loss::*;
    let secs = t.saturating_sub(START_US) as f64 * 1e-6;
    let r = 0.000_6 * (secs / 60.0).min(1.0);
    let ang = secs * 2.0 * PI / 40.0;
    let lat = HOME_LAT + r * ang.sin();
    let lon = HOME_LON + r * 1.48 * ang.cos();
    let alt = if secs < 10.0 {
        secs * 3.0
    } else if t < FAILSAFE_US {
        30.0
    } else {
        (30.0 - (t - FAILSAFE_US) as f64 * 1e-6 * 1.5).max(0.0)
    };
    (lat, lon, alt)
}

/// A high-rate log of at least `min_bytes`, shaped like a real flight:
/// a 250 Hz IMU message, 50 Hz attitude and 5 Hz GPS.
pub fn large_log(min_bytes: usize) -> Vec<u8> {
    let mut w = ULogWriter::new(1_000_000);
    w.format("sensor_combined:uint64_t timestamp;float[3] gyro_rad;uint32_t gyro_integral_dt;int32_t accelerometer_timestamp_relative;float[3] accelerometer_m_s2;uint32_t accelerometer_integral_dt;uint8_t accelerometer_clipping;uint8_t[3] _padding0;")
        .format("vehicle_attitude:uint64_t timestamp;float[4] q;float[4] delta_q_reset;uint8_t quat_reset_counter;uint8_t[7] _padding0;")
        .format("vehicle_gps_position:uint64_t timestamp;int32_t lat;int32_t lon;int32_t alt;float vel_m_s;uint8_t fix_type;uint8_t satellites_used;uint8_t[2] _padding0;")
        .subscribe(0, 0, "sensor_combined")
        .subscribe(1, 0, "vehicle_attitude")
        .subscribe(2, 0, "vehicle_gps_position");
    let mut t = 1_000_000u64;
    let mut k = 0u64;
    while w.len() < min_bytes {
        let x = k as f32 * 0.004;
        let mut f = Fields::new().u64(t);
        for a in 0..3 {
            f = f.f32((x + a as f32).sin() * 0.1);
        }
        f = f.u32(4000).i32(0);
        for a in 0..3 {
            f = f.f32((x * 3.0 + a as f32).cos() * 9.81);
        }
        w.data(0, &f.u32(4000).u8(0).build());
        if k % 5 == 0 {
            let mut f = Fields::new().u64(t + 1);
            for a in 0..4 {
                f = f.f32((x + a as f32).cos());
            }
            w.data(1, &f.f32(0.0).f32(0.0).f32(0.0).f32(0.0).u8(0).build());
        }
        if k % 50 == 0 {
            w.data(
                2,
                &Fields::new()
                    .u64(t + 2)
                    .i32(473_977_420 + (k / 50) as i32)
                    .i32(85_455_940)
                    .i32(488_000)
                    .f32(3.0)
                    .u8(3)
                    .u8(10)
                    .build(),
            );
        }
        t += 4_000;
        k += 1;
    }
    w.finish()
}

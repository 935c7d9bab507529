//! Spherical Web Mercator in world-normalized units: `(0, 0)` is the
//! north-west corner of the map and `(1, 1)` the south-east corner.

use core::f64::consts::PI;

use super::GeoError;

/// Latitude where the projected map becomes square.
pub const MAX_LATITUDE: f64 = 85.051_128_78;

/// Tile edge length in pixels.
pub const TILE_SIZE: f64 = 256.0;

pub fn project(lat: f64, lon: f64) -> Result<(f64, f64), GeoError> {
    if !(lat.abs() <= MAX_LATITUDE) {
        return Err(GeoError::LatitudeOutOfRange(lat));
    }
    let x = (lon + 180.0) / 360.0;
    let phi = lat.to_radians();
    let y = (1.0 - libm::log(libm::tan(PI / 4.0 + phi / 2.0)) / PI) / 2.0;
    Ok((x.clamp(0.0, 1.0), y.clamp(0.0, 1.0)))
}

/// Inverse of [`project`], in degrees.
pub fn unproject(x: f64, y: f64) -> (f64, f64) {
    let lon = x * 360.0 - 180.0;
    let lat = (2.0 * libm::atan(libm::exp(PI * (1.0 - 2.0 * y))) - PI / 2.0).to_degrees();
    (lat, lon)
}

/// World-normalized to pixel coordinates at `zoom`.
pub fn to_pixels(x: f64, y: f64, zoom: u8) -> (f64, f64) {
    let scale = TILE_SIZE * libm::exp2(zoom as f64);
    (x * scale, y * scale)
}

/// XYZ tile containing the point.
pub fn tile_of(lat: f64, lon: f64, zoom: u8) -> Result<(u32, u32), GeoError> {
    let (x, y) = project(lat, lon)?;
    let n = 1u64 << zoom.min(31);
    let clamp = |v: f64| ((v * n as f64) as u64).min(n - 1) as u32;
    Ok((clamp(x), clamp(y)))
}

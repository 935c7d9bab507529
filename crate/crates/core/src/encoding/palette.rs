//! Default palettes.

use super::Rgb;

const fn hex(v: u32) -> Rgb {
    Rgb::new((v >> 16) as u8, (v >> 8) as u8, v as u8)
}

/// Sequential, light to dark with equal lightness steps; colorblind safe.
pub const SEQUENTIAL: [Rgb; 5] = [
    hex(0xf95e3f),
    hex(0xe80936),
    hex(0x91003e),
    hex(0x691433),
    hex(0x16132e),
];

/// ColorBrewer RdBu, 5 classes: red through neutral to blue.
pub const DIVERGING: [Rgb; 5] = [
    hex(0xca0020),
    hex(0xf4a582),
    hex(0xf7f7f7),
    hex(0x92c5de),
    hex(0x0571b0),
];

/// Samples of the `twilight` map. The first and last stops are equal so
/// angles that wrap around get the same color at both ends.
pub const CYCLIC: [Rgb; 9] = [
    hex(0xe2d9e2),
    hex(0x95b5c7),
    hex(0x6276ba),
    hex(0x592a8f),
    hex(0x2f1436),
    hex(0x741e4f),
    hex(0xb25652),
    hex(0xcca389),
    hex(0xe2d9e2),
];

/// Okabe-Ito, distinguishable under the common color-vision deficiencies.
pub const CATEGORICAL: [Rgb; 8] = [
    hex(0xe69f00),
    hex(0x56b4e9),
    hex(0x009e73),
    hex(0xf0e442),
    hex(0x0072b2),
    hex(0xd55e00),
    hex(0xcc79a7),
    hex(0x000000),
];

/// Segments and samples without a value.
pub const NO_DATA: Rgb = hex(0x9e9e9e);

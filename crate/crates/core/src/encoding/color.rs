use alloc::string::String;
use core::fmt;

/// An sRGB color with 8-bit channels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Rgb {
    pub r: u8,
    pub g: u8,
    pub b: u8,
}

impl Rgb {
    pub const fn new(r: u8, g: u8, b: u8) -> Self {
        Self { r, g, b }
    }

    /// Parses `#rrggbb` or `rrggbb`, either case.
    pub fn from_hex(s: &str) -> Option<Self> {
        let s = s.strip_prefix('#').unwrap_or(s);
        if s.len() != 6 || !s.is_ascii() {
            return None;
        }
        let ch = |i: usize| u8::from_str_radix(&s[i..i + 2], 16).ok();
        Some(Self::new(ch(0)?, ch(2)?, ch(4)?))
    }

    /// Lowercase `#rrggbb`.
    pub fn to_hex(&self) -> String {
        alloc::format!("{self}")
    }

    pub fn channels(&self) -> [f64; 3] {
        [self.r as f64, self.g as f64, self.b as f64]
    }

    pub(crate) fn from_channels(c: [f64; 3]) -> Self {
        let q = |v: f64| libm::round(v.clamp(0.0, 255.0)) as u8;
        Self::new(q(c[0]), q(c[1]), q(c[2]))
    }
}

impl fmt::Display for Rgb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{:02x}{:02x}{:02x}", self.r, self.g, self.b)
    }
}

/// CIE 1976 L* (D65 white) of an sRGB color, 0 (black) to 100 (white).
pub fn cie_lightness(c: Rgb) -> f64 {
    let linear = |v: u8| {
        let v = v as f64 / 255.0;
        if v <= 0.040_45 {
            v / 12.92
        } else {
            libm::pow((v + 0.055) / 1.055, 2.4)
        }
    };
    let y = 0.212_6 * linear(c.r) + 0.715_2 * linear(c.g) + 0.072_2 * linear(c.b);
    let eps = 216.0 / 24_389.0;
    let f = if y > eps { libm::cbrt(y) } else { (24_389.0 / 27.0 * y + 16.0) / 116.0 };
    116.0 * f - 16.0
}

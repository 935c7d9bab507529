use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use super::palette;
use super::Rgb;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ScaleKind {
    Sequential,
    Diverging,
    Cyclic,
    Categorical,
}

impl ScaleKind {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Sequential => "sequential",
            Self::Diverging => "diverging",
            Self::Cyclic => "cyclic",
            Self::Categorical => "categorical",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        [Self::Sequential, Self::Diverging, Self::Cyclic, Self::Categorical]
            .into_iter()
            .find(|k| k.as_str() == s)
    }

    pub fn default_stops(self) -> &'static [Rgb] {
        match self {
            Self::Sequential => &palette::SEQUENTIAL,
            Self::Diverging => &palette::DIVERGING,
            Self::Cyclic => &palette::CYCLIC,
            Self::Categorical => &palette::CATEGORICAL,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Domain {
    Continuous { min: f64, max: f64 },
    Categories(Vec<String>),
}

impl Domain {
    /// Range of the finite values. A single distinct value `v` becomes
    /// `(v - 1, v + 1)` so it lands on the middle of the scale.
    pub fn from_values(values: impl IntoIterator<Item = f64>) -> Option<Self> {
        let (mut min, mut max) = (f64::INFINITY, f64::NEG_INFINITY);
        for v in values.into_iter().filter(|v| v.is_finite()) {
            min = min.min(v);
            max = max.max(v);
        }
        if min > max {
            return None;
        }
        if min == max {
            return Some(Self::Continuous {
                min: min - 1.0,
                max: max + 1.0,
            });
        }
        Some(Self::Continuous { min, max })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum EncodingError {
    InvalidDomain(String),
    /// Continuous scales need at least two stops, categorical at least one.
    TooFewStops,
    /// Entries of a shared-scale group carry different units.
    UnitMismatch { group: String },
}

impl fmt::Display for EncodingError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::InvalidDomain(why) => write!(f, "invalid domain: {why}"),
            Self::TooFewStops => f.write_str("too few color stops"),
            Self::UnitMismatch { group } => {
                write!(f, "group '{group}' shares one scale across different units")
            }
        }
    }
}

impl core::error::Error for EncodingError {}

#[derive(Debug, Clone, PartialEq)]
pub struct ColorScale {
    pub kind: ScaleKind,
    pub domain: Domain,
    pub stops: Vec<Rgb>,
}

/// A scale with the default palette for `kind`.
pub fn make_scale(kind: ScaleKind, domain: Domain) -> Result<ColorScale, EncodingError> {
    make_scale_with_stops(kind, domain, kind.default_stops().to_vec())
}

pub fn make_scale_with_stops(
    kind: ScaleKind,
    domain: Domain,
    stops: Vec<Rgb>,
) -> Result<ColorScale, EncodingError> {
    match (&domain, kind) {
        (Domain::Categories(c), ScaleKind::Categorical) => {
            if c.is_empty() {
                return Err(EncodingError::InvalidDomain("no categories".to_string()));
            }
            if stops.is_empty() {
                return Err(EncodingError::TooFewStops);
            }
        }
        (Domain::Continuous { min, max }, k) if k != ScaleKind::Categorical => {
            if !(min < max) || !min.is_finite() || !max.is_finite() {
                return Err(EncodingError::InvalidDomain(alloc::format!(
                    "need finite min < max, got ({min}, {max})"
                )));
            }
            if stops.len() < 2 {
                return Err(EncodingError::TooFewStops);
            }
        }
        _ => {
            return Err(EncodingError::InvalidDomain(alloc::format!(
                "{} scale with the wrong domain type",
                kind.as_str()
            )))
        }
    }
    Ok(ColorScale { kind, domain, stops })
}

impl ColorScale {
    /// Unrounded channel values for a continuous scale, `None` for NaN
    /// or a categorical scale. Values outside the domain are clamped.
    pub fn interpolate(&self, value: f64) -> Option<[f64; 3]> {
        let Domain::Continuous { min, max } = self.domain else {
            return None;
        };
        if value.is_nan() {
            return None;
        }
        let t = ((value - min) / (max - min)).clamp(0.0, 1.0);
        let last = self.stops.len() - 1;
        let pos = t * last as f64;
        let i = (libm::floor(pos) as usize).min(last - 1);
        let frac = pos - i as f64;
        let (a, b) = (self.stops[i].channels(), self.stops[i + 1].channels());
        Some([0, 1, 2].map(|c| a[c] + (b[c] - a[c]) * frac))
    }
}

/// Color of a value. Continuous scales clamp to the domain and
/// interpolate linearly in sRGB between equally spaced stops.
/// Categorical scales treat the value as a category index and wrap
/// around the palette. `None` and NaN give the no-data gray.
pub fn map_value(scale: &ColorScale, value: Option<f64>) -> Rgb {
    let Some(v) = value.filter(|v| !v.is_nan()) else {
        return palette::NO_DATA;
    };
    match scale.kind {
        ScaleKind::Categorical => {
            if v < 0.0 || !v.is_finite() {
                return palette::NO_DATA;
            }
            map_category(scale, v as usize)
        }
        _ => scale.interpolate(v).map_or(palette::NO_DATA, Rgb::from_channels),
    }
}

pub fn map_category(scale: &ColorScale, index: usize) -> Rgb {
    scale.stops[index % scale.stops.len()]
}

/// Color of a categorical label; unknown labels are no-data.
pub fn map_label(scale: &ColorScale, label: &str) -> Rgb {
    match &scale.domain {
        Domain::Categories(c) => c
            .iter()
            .position(|l| l == label)
            .map_or(palette::NO_DATA, |i| map_category(scale, i)),
        Domain::Continuous { .. } => palette::NO_DATA,
    }
}

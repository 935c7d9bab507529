use alloc::string::ToString;
use alloc::vec::Vec;

use super::derived;
use super::{AttributeRef, ModelError, TimeWindow};
use crate::ulog::FlightLog;

/// One attribute over time, as parallel timestamp and value arrays.
///
/// Values are widened to `f64`; 64-bit integers above 2^53 lose precision.
#[derive(Debug, Clone)]
pub struct TimeSeries {
    pub attr: AttributeRef,
    pub timestamps: Vec<u64>,
    pub values: Vec<f64>,
}

impl PartialEq for TimeSeries {
    /// Bitwise on values, so NaN samples compare equal.
    fn eq(&self, other: &Self) -> bool {
        self.attr == other.attr
            && self.timestamps == other.timestamps
            && self.values.len() == other.values.len()
            && self
                .values
                .iter()
                .zip(&other.values)
                .all(|(a, b)| a.to_bits() == b.to_bits())
    }
}

impl TimeSeries {
    /// # Panics
    /// If the arrays differ in length or the timestamps decrease.
    pub fn new(attr: AttributeRef, timestamps: Vec<u64>, values: Vec<f64>) -> Self {
        assert_eq!(timestamps.len(), values.len(), "timestamps and values differ in length");
        assert!(
            timestamps.windows(2).all(|w| w[0] <= w[1]),
            "timestamps must be non-decreasing"
        );
        Self {
            attr,
            timestamps,
            values,
        }
    }

    pub fn len(&self) -> usize {
        self.timestamps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.timestamps.is_empty()
    }

    pub fn points(&self) -> impl Iterator<Item = (u64, f64)> + '_ {
        self.timestamps.iter().copied().zip(self.values.iter().copied())
    }

    /// The points with `start ≤ t ≤ end`.
    pub fn window(&self, window: &TimeWindow) -> Self {
        let r = window.index_range(&self.timestamps);
        Self {
            attr: self.attr.clone(),
            timestamps: self.timestamps[r.clone()].to_vec(),
            values: self.values[r].to_vec(),
        }
    }

    /// Last observation at or before `t`.
    pub fn value_at(&self, t: u64) -> Option<f64> {
        let n = self.timestamps.partition_point(|&x| x <= t);
        n.checked_sub(1).map(|i| self.values[i])
    }

    /// Every value multiplied by `factor` (unit conversion).
    pub fn scaled(mut self, factor: f64) -> Self {
        if factor != 1.0 {
            self.values.iter_mut().for_each(|v| *v *= factor);
        }
        self
    }
}

/// Reads one attribute column, optionally restricted to a window.
///
/// A field of a message that was subscribed but never logged yields an
/// empty series rather than an error.
pub fn get_series(
    log: &FlightLog,
    attr: &AttributeRef,
    window: Option<&TimeWindow>,
) -> Result<TimeSeries, ModelError> {
    let unknown = || ModelError::UnknownAttribute(attr.to_string());
    let schema = log.schema(&attr.message, attr.multi_id).ok_or_else(unknown)?;
    let native = schema.field(&attr.field).is_some();
    let derived = derived::source(schema, &attr.field);
    if !native && derived.is_none() {
        return Err(unknown());
    }
    let Some(series) = log.get(&attr.message, attr.multi_id) else {
        return Ok(TimeSeries::new(attr.clone(), Vec::new(), Vec::new()));
    };
    let range = match window {
        Some(w) => w.index_range(&series.timestamps),
        None => 0..series.len(),
    };
    let values = match derived {
        None => {
            let col = series.column(&attr.field).ok_or_else(unknown)?;
            range.clone().map(|i| col.value_f64(i).unwrap_or(f64::NAN)).collect()
        }
        Some((prefix, angle)) => derived::compute(series, prefix, angle)[range.clone()].to_vec(),
    };
    Ok(TimeSeries {
        attr: attr.clone(),
        timestamps: series.timestamps[range].to_vec(),
        values,
    })
}

/// Native and derived field names of a subscribed message.
pub fn field_names(log: &FlightLog, message: &str, multi_id: u8) -> Option<Vec<alloc::string::String>> {
    let schema = log.schema(message, multi_id)?;
    let mut names: Vec<_> = schema.fields.iter().map(|f| f.name.clone()).collect();
    names.extend(derived::derived_fields(schema).into_iter().map(|s| s.to_string()));
    Some(names)
}

fn same(a: f64, b: f64) -> bool {
    a == b || (a.is_nan() && b.is_nan())
}

/// The shared value when every point has it; NaN counts as equal to NaN.
pub fn detect_constant(series: &TimeSeries) -> Result<Option<f64>, ModelError> {
    let (&first, rest) = series.values.split_first().ok_or(ModelError::EmptySeries)?;
    Ok(rest.iter().all(|&v| same(v, first)).then_some(first))
}

/// Statistics of a series. `min`, `max` and `mean` skip NaN and are
/// `None` when every value is NaN; `count` includes NaN points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Summary {
    pub min: Option<f64>,
    pub max: Option<f64>,
    pub mean: Option<f64>,
    pub count: usize,
    pub nan_count: usize,
}

pub fn summarize(series: &TimeSeries) -> Result<Summary, ModelError> {
    if series.is_empty() {
        return Err(ModelError::EmptySeries);
    }
    let mut min = f64::INFINITY;
    let mut max = f64::NEG_INFINITY;
    let mut sum = 0.0;
    let mut n = 0usize;
    for &v in series.values.iter().filter(|v| !v.is_nan()) {
        min = min.min(v);
        max = max.max(v);
        sum += v;
        n += 1;
    }
    let some = |x: f64| (n > 0).then_some(x);
    Ok(Summary {
        min: some(min),
        max: some(max),
        mean: some(sum / n as f64),
        count: series.len(),
        nan_count: series.len() - n,
    })
}

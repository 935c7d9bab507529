use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use super::error::ParseWarning;
use super::format::{MessageFormat, MessageSchema};
use super::types::{
    le4, le8, Dropout, InfoValue, LoggedText, ParamChange, ParamValue, Scalar, ScalarKind,
};

/// Identifies one series: a message name plus its instance index.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SeriesKey {
    pub name: String,
    pub multi_id: u8,
}

impl SeriesKey {
    pub fn new(name: impl Into<String>, multi_id: u8) -> Self {
        Self {
            name: name.into(),
            multi_id,
        }
    }
}

impl fmt::Display for SeriesKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.name, self.multi_id)
    }
}

/// A typed column of values. Booleans and chars keep their raw octet.
///
/// Equality is bitwise, so columns holding NaN compare equal to themselves.
#[derive(Debug, Clone)]
pub enum Column {
    Int8(Vec<i8>),
    UInt8(Vec<u8>),
    Int16(Vec<i16>),
    UInt16(Vec<u16>),
    Int32(Vec<i32>),
    UInt32(Vec<u32>),
    Int64(Vec<i64>),
    UInt64(Vec<u64>),
    Float32(Vec<f32>),
    Float64(Vec<f64>),
    Bool(Vec<u8>),
    Char(Vec<u8>),
}

macro_rules! each_column {
    ($col:expr, $v:ident => $body:expr) => {
        match $col {
            Column::Int8($v) => $body,
            Column::UInt8($v) => $body,
            Column::Int16($v) => $body,
            Column::UInt16($v) => $body,
            Column::Int32($v) => $body,
            Column::UInt32($v) => $body,
            Column::Int64($v) => $body,
            Column::UInt64($v) => $body,
            Column::Float32($v) => $body,
            Column::Float64($v) => $body,
            Column::Bool($v) => $body,
            Column::Char($v) => $body,
        }
    };
}

impl PartialEq for Column {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Self::Float32(a), Self::Float32(b)) => {
                a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.to_bits() == y.to_bits())
            }
            (Self::Float64(a), Self::Float64(b)) => {
                a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.to_bits() == y.to_bits())
            }
            (Self::Int8(a), Self::Int8(b)) => a == b,
            (Self::UInt8(a), Self::UInt8(b)) => a == b,
            (Self::Int16(a), Self::Int16(b)) => a == b,
            (Self::UInt16(a), Self::UInt16(b)) => a == b,
            (Self::Int32(a), Self::Int32(b)) => a == b,
            (Self::UInt32(a), Self::UInt32(b)) => a == b,
            (Self::Int64(a), Self::Int64(b)) => a == b,
            (Self::UInt64(a), Self::UInt64(b)) => a == b,
            (Self::Bool(a), Self::Bool(b)) => a == b,
            (Self::Char(a), Self::Char(b)) => a == b,
            _ => false,
        }
    }
}

impl Column {
    /// Decodes one column out of `count` packed records of `stride` bytes.
    pub(crate) fn decode(kind: ScalarKind, raw: &[u8], stride: usize, offset: usize) -> Self {
        let rows = raw.chunks_exact(stride).map(|r| &r[offset..]);
        match kind {
            ScalarKind::Int8 => Self::Int8(rows.map(|b| b[0] as i8).collect()),
            ScalarKind::UInt8 => Self::UInt8(rows.map(|b| b[0]).collect()),
            ScalarKind::Bool => Self::Bool(rows.map(|b| b[0]).collect()),
            ScalarKind::Char => Self::Char(rows.map(|b| b[0]).collect()),
            ScalarKind::Int16 => Self::Int16(rows.map(|b| i16::from_le_bytes([b[0], b[1]])).collect()),
            ScalarKind::UInt16 => {
                Self::UInt16(rows.map(|b| u16::from_le_bytes([b[0], b[1]])).collect())
            }
            ScalarKind::Int32 => Self::Int32(rows.map(|b| i32::from_le_bytes(le4(b))).collect()),
            ScalarKind::UInt32 => Self::UInt32(rows.map(|b| u32::from_le_bytes(le4(b))).collect()),
            ScalarKind::Float32 => Self::Float32(rows.map(|b| f32::from_le_bytes(le4(b))).collect()),
            ScalarKind::Int64 => Self::Int64(rows.map(|b| i64::from_le_bytes(le8(b))).collect()),
            ScalarKind::UInt64 => Self::UInt64(rows.map(|b| u64::from_le_bytes(le8(b))).collect()),
            ScalarKind::Float64 => Self::Float64(rows.map(|b| f64::from_le_bytes(le8(b))).collect()),
        }
    }

    pub fn kind(&self) -> ScalarKind {
        match self {
            Self::Int8(_) => ScalarKind::Int8,
            Self::UInt8(_) => ScalarKind::UInt8,
            Self::Int16(_) => ScalarKind::Int16,
            Self::UInt16(_) => ScalarKind::UInt16,
            Self::Int32(_) => ScalarKind::Int32,
            Self::UInt32(_) => ScalarKind::UInt32,
            Self::Int64(_) => ScalarKind::Int64,
            Self::UInt64(_) => ScalarKind::UInt64,
            Self::Float32(_) => ScalarKind::Float32,
            Self::Float64(_) => ScalarKind::Float64,
            Self::Bool(_) => ScalarKind::Bool,
            Self::Char(_) => ScalarKind::Char,
        }
    }

    pub fn len(&self) -> usize {
        each_column!(self, v => v.len())
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn get(&self, i: usize) -> Option<Scalar> {
        Some(match self {
            Self::Int8(v) => Scalar::Int8(*v.get(i)?),
            Self::UInt8(v) => Scalar::UInt8(*v.get(i)?),
            Self::Int16(v) => Scalar::Int16(*v.get(i)?),
            Self::UInt16(v) => Scalar::UInt16(*v.get(i)?),
            Self::Int32(v) => Scalar::Int32(*v.get(i)?),
            Self::UInt32(v) => Scalar::UInt32(*v.get(i)?),
            Self::Int64(v) => Scalar::Int64(*v.get(i)?),
            Self::UInt64(v) => Scalar::UInt64(*v.get(i)?),
            Self::Float32(v) => Scalar::Float32(*v.get(i)?),
            Self::Float64(v) => Scalar::Float64(*v.get(i)?),
            Self::Bool(v) => Scalar::Bool(*v.get(i)?),
            Self::Char(v) => Scalar::Char(*v.get(i)?),
        })
    }

    pub fn value_f64(&self, i: usize) -> Option<f64> {
        self.get(i).map(|s| s.as_f64())
    }

    /// Every value widened to `f64`.
    pub fn to_f64_vec(&self) -> Vec<f64> {
        each_column!(self, v => v.iter().map(|x| *x as f64).collect())
    }

    /// Little-endian wire bytes of the whole column, as stored in the log.
    pub fn to_le_bytes(&self) -> Vec<u8> {
        each_column!(self, v => v.iter().flat_map(|x| x.to_le_bytes()).collect())
    }

    fn permute(&mut self, order: &[usize]) {
        each_column!(self, v => {
            let sorted = order.iter().map(|&i| v[i]).collect();
            *v = sorted;
        })
    }
}

/// All records of one (message, instance) pair, stored column-wise.
#[derive(Debug, Clone, PartialEq)]
pub struct MessageSeries {
    pub schema: MessageSchema,
    pub timestamps: Vec<u64>,
    /// Parallel to `schema.fields`; every column has `timestamps.len()` values.
    pub columns: Vec<Column>,
}

impl MessageSeries {
    pub(crate) fn from_raw(schema: MessageSchema, raw: &[u8]) -> (Self, bool) {
        let stride = schema.record_size;
        let columns: Vec<Column> = schema
            .fields
            .iter()
            .map(|f| Column::decode(f.kind, raw, stride, f.offset))
            .collect();
        let timestamps = match &columns[schema.timestamp_index] {
            Column::UInt64(t) => t.clone(),
            _ => unreachable!("schema guarantees a uint64 timestamp"),
        };
        let mut series = Self {
            schema,
            timestamps,
            columns,
        };
        let sorted = series.timestamps.windows(2).all(|w| w[0] <= w[1]);
        if !sorted {
            let mut order: Vec<usize> = (0..series.timestamps.len()).collect();
            // stable: equal timestamps keep file order
            order.sort_by_key(|&i| series.timestamps[i]);
            series.timestamps = order.iter().map(|&i| series.timestamps[i]).collect();
            for c in &mut series.columns {
                c.permute(&order);
            }
        }
        (series, !sorted)
    }

    pub fn len(&self) -> usize {
        self.timestamps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.timestamps.is_empty()
    }

    pub fn column(&self, field: &str) -> Option<&Column> {
        self.schema.field(field).map(|(i, _)| &self.columns[i])
    }

    pub fn first_timestamp(&self) -> Option<u64> {
        self.timestamps.first().copied()
    }

    pub fn last_timestamp(&self) -> Option<u64> {
        self.timestamps.last().copied()
    }
}

/// One row of [`FlightLog::list_messages`].
#[derive(Debug, Clone, PartialEq)]
pub struct MessageSummary<'a> {
    pub name: &'a str,
    pub multi_id: u8,
    pub record_count: usize,
    pub schema: &'a MessageSchema,
}

/// A decoded log: the message x time x attribute table plus metadata.
///
/// Built once by [`parse_log`](super::parse_log) and never mutated afterwards.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct FlightLog {
    pub(crate) version: u8,
    pub(crate) start_boot_us: u64,
    pub(crate) last_timestamp_us: u64,
    pub(crate) compat_flags: [u8; 8],
    pub(crate) incompat_flags: [u8; 8],
    pub(crate) formats: BTreeMap<String, MessageFormat>,
    pub(crate) subscriptions: BTreeMap<SeriesKey, MessageSchema>,
    pub(crate) series: BTreeMap<SeriesKey, MessageSeries>,
    pub(crate) parameters: BTreeMap<String, ParamValue>,
    pub(crate) changed_parameters: Vec<ParamChange>,
    pub(crate) default_parameters: BTreeMap<u8, BTreeMap<String, ParamValue>>,
    pub(crate) info: BTreeMap<String, InfoValue>,
    pub(crate) info_multiple: BTreeMap<String, Vec<Vec<InfoValue>>>,
    pub(crate) logged_text: Vec<LoggedText>,
    pub(crate) dropouts: Vec<Dropout>,
    pub(crate) sync_count: usize,
    pub(crate) warnings: Vec<ParseWarning>,
    pub(crate) truncated: bool,
}

impl FlightLog {
    pub fn version(&self) -> u8 {
        self.version
    }

    /// Logger start time from the file header, microseconds since boot.
    pub fn start_boot_us(&self) -> u64 {
        self.start_boot_us
    }

    /// Largest data timestamp seen, or the start time if there is no data.
    pub fn last_timestamp_us(&self) -> u64 {
        self.last_timestamp_us
    }

    pub fn compat_flags(&self) -> [u8; 8] {
        self.compat_flags
    }

    pub fn incompat_flags(&self) -> [u8; 8] {
        self.incompat_flags
    }

    pub fn formats(&self) -> &BTreeMap<String, MessageFormat> {
        &self.formats
    }

    /// Series with at least one record, keyed and ordered by (name, multi_id).
    pub fn series(&self) -> &BTreeMap<SeriesKey, MessageSeries> {
        &self.series
    }

    pub fn get(&self, name: &str, multi_id: u8) -> Option<&MessageSeries> {
        self.series.get(&SeriesKey::new(name, multi_id))
    }

    /// Layout of every subscribed message, including ones that never logged a record.
    pub fn subscriptions(&self) -> &BTreeMap<SeriesKey, MessageSchema> {
        &self.subscriptions
    }

    pub fn schema(&self, name: &str, multi_id: u8) -> Option<&MessageSchema> {
        self.subscriptions.get(&SeriesKey::new(name, multi_id))
    }

    /// Subscribed messages that have no records.
    pub fn empty_subscriptions(&self) -> impl Iterator<Item = &SeriesKey> {
        self.subscriptions
            .keys()
            .filter(move |k| !self.series.contains_key(*k))
    }

    /// One entry per series, ordered by name then instance.
    pub fn list_messages(&self) -> Vec<MessageSummary<'_>> {
        self.series
            .iter()
            .map(|(k, s)| MessageSummary {
                name: &k.name,
                multi_id: k.multi_id,
                record_count: s.len(),
                schema: &s.schema,
            })
            .collect()
    }

    /// Parameter values in effect when logging started.
    pub fn parameters(&self) -> &BTreeMap<String, ParamValue> {
        &self.parameters
    }

    pub fn changed_parameters(&self) -> &[ParamChange] {
        &self.changed_parameters
    }

    /// Default parameter values keyed by default-type bit index.
    pub fn default_parameters(&self) -> &BTreeMap<u8, BTreeMap<String, ParamValue>> {
        &self.default_parameters
    }

    pub fn info(&self) -> &BTreeMap<String, InfoValue> {
        &self.info
    }

    pub fn info_multiple(&self) -> &BTreeMap<String, Vec<Vec<InfoValue>>> {
        &self.info_multiple
    }

    /// Untagged and tagged text messages, in file order.
    pub fn logged_text(&self) -> &[LoggedText] {
        &self.logged_text
    }

    pub fn dropouts(&self) -> &[Dropout] {
        &self.dropouts
    }

    pub fn sync_count(&self) -> usize {
        self.sync_count
    }

    pub fn warnings(&self) -> &[ParseWarning] {
        &self.warnings
    }

    /// Set when the file ended in the middle of a record.
    pub fn truncated(&self) -> bool {
        self.truncated
    }

    /// Set when undecodable bytes or records had to be skipped.
    pub fn corrupt(&self) -> bool {
        self.warnings.iter().any(|w| {
            matches!(
                w,
                ParseWarning::Corruption { .. }
                    | ParseWarning::UnknownMessageId { .. }
                    | ParseWarning::MalformedRecord { .. }
            )
        })
    }

    /// Total number of attribute columns over all series.
    pub fn attribute_count(&self) -> usize {
        self.series.values().map(|s| s.columns.len()).sum()
    }
}

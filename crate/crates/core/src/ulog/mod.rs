//! ULog decoding.

mod error;
mod format;
mod log;
mod parser;
mod types;

pub use error::{ParseError, ParseWarning};
pub use format::{FieldSchema, FormatField, MessageFormat, MessageSchema};
pub use log::{Column, FlightLog, MessageSeries, MessageSummary, SeriesKey};
pub use parser::{parse_log, validate_header, Header, HEADER_LEN, MAGIC, SYNC};
pub use types::{
    Dropout, InfoValue, LoggedText, ParamChange, ParamValue, Scalar, ScalarKind, Severity,
};

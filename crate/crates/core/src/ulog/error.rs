use alloc::string::String;
use core::fmt;

/// Fatal decoding errors. Recoverable conditions (truncation, corrupt
/// records, unsorted timestamps) are reported as [`ParseWarning`]s on the
/// returned log instead.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseError {
    /// Missing or wrong magic, or fewer than 16 header octets.
    MalformedHeader(String),
    /// A data record or subscription that cannot match its declared layout.
    SchemaViolation(String),
    /// The flag-bits record sets incompatible flags this decoder does not know.
    UnsupportedFlags { incompat: [u8; 8] },
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::MalformedHeader(why) => write!(f, "malformed header: {why}"),
            Self::SchemaViolation(why) => write!(f, "schema violation: {why}"),
            Self::UnsupportedFlags { incompat } => {
                write!(f, "unsupported incompatible flags {incompat:02x?}")
            }
        }
    }
}

impl core::error::Error for ParseError {}

impl ParseError {
    pub fn kind(&self) -> &'static str {
        match self {
            Self::MalformedHeader(_) => "MalformedHeader",
            Self::SchemaViolation(_) => "SchemaViolation",
            Self::UnsupportedFlags { .. } => "UnsupportedFlags",
        }
    }
}

/// Non-fatal conditions met while decoding.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseWarning {
    /// The file ends inside a record; everything before `offset` was kept.
    TruncatedBody { offset: usize },
    /// Bytes that could not be framed as records were skipped.
    Corruption { offset: usize },
    /// Data records whose message id was never subscribed.
    UnknownMessageId { msg_id: u16 },
    /// Records of this series were not in timestamp order and were sorted.
    OutOfOrder { name: String, multi_id: u8 },
    /// A record of a known type that could not be decoded and was skipped.
    MalformedRecord { offset: usize, msg_type: u8 },
}

impl fmt::Display for ParseWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::TruncatedBody { offset } => write!(f, "file truncated at offset {offset}"),
            Self::Corruption { offset } => write!(f, "corrupt data near offset {offset}"),
            Self::UnknownMessageId { msg_id } => {
                write!(f, "data for unsubscribed message id {msg_id}")
            }
            Self::OutOfOrder { name, multi_id } => {
                write!(f, "{name}/{multi_id}: out-of-order timestamps sorted")
            }
            Self::MalformedRecord { offset, msg_type } => write!(
                f,
                "malformed '{}' record at offset {offset}",
                char::from(*msg_type)
            ),
        }
    }
}

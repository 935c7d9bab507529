use alloc::string::String;
use core::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ModelError {
    /// The reference names no message, instance or field of the log.
    UnknownAttribute(String),
    /// Text that is not `message[/instance].field`.
    InvalidAttribute(String),
    /// `start_us > end_us`.
    InvalidWindow { start_us: u64, end_us: u64 },
    EmptySeries,
}

impl fmt::Display for ModelError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::UnknownAttribute(a) => write!(f, "unknown attribute '{a}'"),
            Self::InvalidAttribute(a) => {
                write!(f, "invalid attribute '{a}', expected message[/instance].field")
            }
            Self::InvalidWindow { start_us, end_us } => {
                write!(f, "invalid window: start {start_us} is after end {end_us}")
            }
            Self::EmptySeries => f.write_str("series has no points"),
        }
    }
}

impl core::error::Error for ModelError {}

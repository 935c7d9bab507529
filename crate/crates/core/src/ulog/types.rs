use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

/// Primitive field types of the ULog format.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ScalarKind {
    Int8,
    UInt8,
    Int16,
    UInt16,
    Int32,
    UInt32,
    Int64,
    UInt64,
    Float32,
    Float64,
    Bool,
    Char,
}

impl ScalarKind {
    pub fn from_type_name(name: &str) -> Option<Self> {
        Some(match name {
            "int8_t" => Self::Int8,
            "uint8_t" => Self::UInt8,
            "int16_t" => Self::Int16,
            "uint16_t" => Self::UInt16,
            "int32_t" => Self::Int32,
            "uint32_t" => Self::UInt32,
            "int64_t" => Self::Int64,
            "uint64_t" => Self::UInt64,
            "float" => Self::Float32,
            "double" => Self::Float64,
            "bool" => Self::Bool,
            "char" => Self::Char,
            _ => return None,
        })
    }

    pub fn type_name(self) -> &'static str {
        match self {
            Self::Int8 => "int8_t",
            Self::UInt8 => "uint8_t",
            Self::Int16 => "int16_t",
            Self::UInt16 => "uint16_t",
            Self::Int32 => "int32_t",
            Self::UInt32 => "uint32_t",
            Self::Int64 => "int64_t",
            Self::UInt64 => "uint64_t",
            Self::Float32 => "float",
            Self::Float64 => "double",
            Self::Bool => "bool",
            Self::Char => "char",
        }
    }

    /// Size in bytes on the wire.
    pub fn size(self) -> usize {
        match self {
            Self::Int8 | Self::UInt8 | Self::Bool | Self::Char => 1,
            Self::Int16 | Self::UInt16 => 2,
            Self::Int32 | Self::UInt32 | Self::Float32 => 4,
            Self::Int64 | Self::UInt64 | Self::Float64 => 8,
        }
    }

    pub fn is_float(self) -> bool {
        matches!(self, Self::Float32 | Self::Float64)
    }
}

impl fmt::Display for ScalarKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.type_name())
    }
}

/// A decoded scalar, tagged with its wire type.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Scalar {
    Int8(i8),
    UInt8(u8),
    Int16(i16),
    UInt16(u16),
    Int32(i32),
    UInt32(u32),
    Int64(i64),
    UInt64(u64),
    Float32(f32),
    Float64(f64),
    Bool(u8),
    Char(u8),
}

impl Scalar {
    /// Decodes one little-endian value. `bytes` must hold at least `kind.size()` octets.
    pub(crate) fn decode(kind: ScalarKind, bytes: &[u8]) -> Self {
        match kind {
            ScalarKind::Int8 => Self::Int8(bytes[0] as i8),
            ScalarKind::UInt8 => Self::UInt8(bytes[0]),
            ScalarKind::Bool => Self::Bool(bytes[0]),
            ScalarKind::Char => Self::Char(bytes[0]),
            ScalarKind::Int16 => Self::Int16(i16::from_le_bytes([bytes[0], bytes[1]])),
            ScalarKind::UInt16 => Self::UInt16(u16::from_le_bytes([bytes[0], bytes[1]])),
            ScalarKind::Int32 => Self::Int32(i32::from_le_bytes(le4(bytes))),
            ScalarKind::UInt32 => Self::UInt32(u32::from_le_bytes(le4(bytes))),
            ScalarKind::Float32 => Self::Float32(f32::from_le_bytes(le4(bytes))),
            ScalarKind::Int64 => Self::Int64(i64::from_le_bytes(le8(bytes))),
            ScalarKind::UInt64 => Self::UInt64(u64::from_le_bytes(le8(bytes))),
            ScalarKind::Float64 => Self::Float64(f64::from_le_bytes(le8(bytes))),
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

    /// Widens to `f64`. 64-bit integers beyond 2^53 lose precision.
    pub fn as_f64(&self) -> f64 {
        match *self {
            Self::Int8(v) => v as f64,
            Self::UInt8(v) | Self::Bool(v) | Self::Char(v) => v as f64,
            Self::Int16(v) => v as f64,
            Self::UInt16(v) => v as f64,
            Self::Int32(v) => v as f64,
            Self::UInt32(v) => v as f64,
            Self::Int64(v) => v as f64,
            Self::UInt64(v) => v as f64,
            Self::Float32(v) => v as f64,
            Self::Float64(v) => v,
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Self::Int8(v) => write!(f, "{v}"),
            Self::UInt8(v) | Self::Bool(v) | Self::Char(v) => write!(f, "{v}"),
            Self::Int16(v) => write!(f, "{v}"),
            Self::UInt16(v) => write!(f, "{v}"),
            Self::Int32(v) => write!(f, "{v}"),
            Self::UInt32(v) => write!(f, "{v}"),
            Self::Int64(v) => write!(f, "{v}"),
            Self::UInt64(v) => write!(f, "{v}"),
            Self::Float32(v) => write!(f, "{v}"),
            Self::Float64(v) => write!(f, "{v}"),
        }
    }
}

pub(crate) fn le4(b: &[u8]) -> [u8; 4] {
    [b[0], b[1], b[2], b[3]]
}

pub(crate) fn le8(b: &[u8]) -> [u8; 8] {
    [b[0], b[1], b[2], b[3], b[4], b[5], b[6], b[7]]
}

/// Value of an info (`I`/`M`) record.
#[derive(Debug, Clone, PartialEq)]
pub enum InfoValue {
    Text(String),
    Scalar(Scalar),
    /// Arrays and non-basic types are kept undecoded.
    Raw(Vec<u8>),
}

impl fmt::Display for InfoValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Text(s) => f.write_str(s),
            Self::Scalar(s) => s.fmt(f),
            Self::Raw(bytes) => {
                for b in bytes {
                    write!(f, "{b:02x}")?;
                }
                Ok(())
            }
        }
    }
}

/// A parameter value; the logger only emits `int32_t` and `float` parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ParamValue {
    Int(i32),
    Float(f32),
}

impl ParamValue {
    pub fn as_f64(&self) -> f64 {
        match *self {
            Self::Int(v) => v as f64,
            Self::Float(v) => v as f64,
        }
    }
}

impl fmt::Display for ParamValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Int(v) => write!(f, "{v}"),
            Self::Float(v) => write!(f, "{v}"),
        }
    }
}

/// A parameter change recorded after logging started.
#[derive(Debug, Clone, PartialEq)]
pub struct ParamChange {
    pub timestamp_us: u64,
    pub name: String,
    pub value: ParamValue,
}

/// A text message printed by the vehicle (`L`, or tagged `C`).
#[derive(Debug, Clone, PartialEq)]
pub struct LoggedText {
    pub timestamp_us: u64,
    /// Raw level byte; the logger writes ASCII `'0'` (emergency) to `'7'` (debug).
    pub level: u8,
    pub tag: Option<u16>,
    pub text: String,
}

impl LoggedText {
    pub fn severity(&self) -> Severity {
        Severity::from_level(self.level)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Severity {
    Emergency,
    Alert,
    Critical,
    Error,
    Warning,
    Notice,
    Info,
    Debug,
    Unknown,
}

impl Severity {
    pub fn from_level(level: u8) -> Self {
        match level {
            b'0' => Self::Emergency,
            b'1' => Self::Alert,
            b'2' => Self::Critical,
            b'3' => Self::Error,
            b'4' => Self::Warning,
            b'5' => Self::Notice,
            b'6' => Self::Info,
            b'7' => Self::Debug,
            _ => Self::Unknown,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Emergency => "EMERGENCY",
            Self::Alert => "ALERT",
            Self::Critical => "CRITICAL",
            Self::Error => "ERROR",
            Self::Warning => "WARNING",
            Self::Notice => "NOTICE",
            Self::Info => "INFO",
            Self::Debug => "DEBUG",
            Self::Unknown => "UNKNOWN",
        }
    }

    /// 0 for emergency through 7 for debug, 8 for unknown levels.
    pub fn index(self) -> u32 {
        self as u32
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Dropout {
    /// Last data timestamp seen before the gap.
    pub timestamp_us: u64,
    pub duration_ms: u16,
}

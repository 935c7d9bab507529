//! Record framing and decoding.
//!
//! The file is a 16-octet header followed by records of the form
//! `u16 size, u8 type, payload[size]`. A definitions section (formats,
//! info, initial parameters) runs until the first subscription or logged
//! string; the data section follows. Corruption recovery mirrors the
//! reference tooling: a bad header advances the cursor by one octet and
//! searches for the next sync marker.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::error::{ParseError, ParseWarning};
use super::format::{MessageFormat, MessageSchema};
use super::log::{FlightLog, MessageSeries, SeriesKey};
use super::types::{le8, Dropout, InfoValue, LoggedText, ParamChange, ParamValue, Scalar, ScalarKind};

pub const MAGIC: [u8; 7] = [0x55, 0x4C, 0x6F, 0x67, 0x01, 0x12, 0x35];
pub const SYNC: [u8; 8] = [0x2F, 0x73, 0x13, 0x20, 0x25, 0x0C, 0xBB, 0x12];
pub const HEADER_LEN: usize = 16;

const MSG_FORMAT: u8 = b'F';
const MSG_DATA: u8 = b'D';
const MSG_INFO: u8 = b'I';
const MSG_INFO_MULTIPLE: u8 = b'M';
const MSG_PARAMETER: u8 = b'P';
const MSG_PARAMETER_DEFAULT: u8 = b'Q';
const MSG_ADD_LOGGED: u8 = b'A';
const MSG_SYNC: u8 = b'S';
const MSG_DROPOUT: u8 = b'O';
const MSG_LOGGING: u8 = b'L';
const MSG_LOGGING_TAGGED: u8 = b'C';
const MSG_FLAG_BITS: u8 = b'B';

/// Records larger than this with an unknown type are treated as corruption.
const MAX_PLAUSIBLE_UNKNOWN: usize = 10_000;

/// Fields of the fixed file header.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Header {
    pub version: u8,
    pub start_boot_us: u64,
}

pub fn validate_header(bytes: &[u8]) -> Result<Header, ParseError> {
    if bytes.len() < HEADER_LEN {
        return Err(ParseError::MalformedHeader(format!(
            "need {HEADER_LEN} octets, got {}",
            bytes.len()
        )));
    }
    if bytes[..7] != MAGIC {
        return Err(ParseError::MalformedHeader("bad magic".to_string()));
    }
    Ok(Header {
        version: bytes[7],
        start_boot_us: u64::from_le_bytes(le8(&bytes[8..16])),
    })
}

/// Decodes a complete ULog file held in memory.
///
/// Truncated files are salvaged: every complete record is kept and
/// [`FlightLog::truncated`] is set.
pub fn parse_log(bytes: &[u8]) -> Result<FlightLog, ParseError> {
    let header = validate_header(bytes)?;
    let mut parser = Parser::new(bytes, header);
    parser.read_definitions()?;

    let appended = parser.appended_offsets.clone();
    if parser.log.incompat_flags[0] & 1 != 0 {
        for offset in appended {
            parser.read_data(Some(offset))?;
            parser.pos = offset.min(bytes.len());
            // appended sections must announce their own subscriptions
            parser.by_msg_id.clear();
        }
    }
    parser.read_data(None)?;
    Ok(parser.finish())
}

struct Subscription {
    key: SeriesKey,
    schema: MessageSchema,
    raw: Vec<u8>,
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
    log: FlightLog,
    subs: Vec<Subscription>,
    by_msg_id: BTreeMap<u16, usize>,
    missing_ids: BTreeSet<u16>,
    appended_offsets: Vec<usize>,
    has_sync: bool,
}

enum Frame {
    End,
    Truncated,
    Record { start: usize, msg_type: u8, size: usize },
}

impl<'a> Parser<'a> {
    fn new(bytes: &'a [u8], header: Header) -> Self {
        let log = FlightLog {
            version: header.version,
            start_boot_us: header.start_boot_us,
            last_timestamp_us: header.start_boot_us,
            ..FlightLog::default()
        };
        Self {
            bytes,
            pos: HEADER_LEN,
            log,
            subs: Vec::new(),
            by_msg_id: BTreeMap::new(),
            missing_ids: BTreeSet::new(),
            appended_offsets: Vec::new(),
            has_sync: true,
        }
    }

    fn frame(&self) -> Frame {
        let rest = self.bytes.len().saturating_sub(self.pos);
        if rest == 0 {
            return Frame::End;
        }
        if rest < 3 {
            return Frame::Truncated;
        }
        let b = &self.bytes[self.pos..];
        let size = u16::from_le_bytes([b[0], b[1]]) as usize;
        if rest < 3 + size {
            return Frame::Truncated;
        }
        Frame::Record {
            start: self.pos,
            msg_type: b[2],
            size,
        }
    }

    fn mark_truncated(&mut self) {
        if !self.log.truncated {
            self.log.truncated = true;
            self.log
                .warnings
                .push(ParseWarning::TruncatedBody { offset: self.pos });
        }
    }

    fn corruption(&mut self, offset: usize) {
        if !self
            .log
            .warnings
            .iter()
            .any(|w| matches!(w, ParseWarning::Corruption { .. }))
        {
            self.log.warnings.push(ParseWarning::Corruption { offset });
        }
    }

    fn malformed(&mut self, offset: usize, msg_type: u8) {
        self.log
            .warnings
            .push(ParseWarning::MalformedRecord { offset, msg_type });
    }

    fn read_definitions(&mut self) -> Result<(), ParseError> {
        loop {
            let (start, msg_type, size) = match self.frame() {
                Frame::End => return Ok(()),
                Frame::Truncated => {
                    // a partial subscription/logging header still ends the section
                    if self.bytes.len() - self.pos >= 3
                        && matches!(
                            self.bytes[self.pos + 2],
                            MSG_ADD_LOGGED | MSG_LOGGING | MSG_LOGGING_TAGGED
                        )
                    {
                        return Ok(());
                    }
                    self.mark_truncated();
                    return Ok(());
                }
                Frame::Record {
                    start,
                    msg_type,
                    size,
                } => (start, msg_type, size),
            };
            if matches!(msg_type, MSG_ADD_LOGGED | MSG_LOGGING | MSG_LOGGING_TAGGED) {
                return Ok(());
            }
            let payload = &self.bytes[start + 3..start + 3 + size];
            self.pos = start + 3 + size;
            match msg_type {
                MSG_INFO => self.on_info(payload, start, false),
                MSG_INFO_MULTIPLE => self.on_info(payload, start, true),
                MSG_FORMAT => match MessageFormat::parse(&decode_text(payload)) {
                    Some(f) => {
                        self.log.formats.insert(f.name.clone(), f);
                    }
                    None => self.malformed(start, msg_type),
                },
                MSG_PARAMETER => match parse_param(payload) {
                    Some((name, value)) => {
                        self.log.parameters.insert(name, value);
                    }
                    None => self.malformed(start, msg_type),
                },
                MSG_PARAMETER_DEFAULT => self.on_param_default(payload, start),
                MSG_FLAG_BITS => self.on_flag_bits(payload, start)?,
                _ => {
                    if is_corrupt_header(msg_type, size) {
                        self.corruption(start);
                        self.pos = start + 1;
                    }
                }
            }
        }
    }

    fn read_data(&mut self, read_until: Option<usize>) -> Result<(), ParseError> {
        loop {
            let (start, msg_type, size) = match self.frame() {
                Frame::End => return Ok(()),
                Frame::Truncated => {
                    self.mark_truncated();
                    return Ok(());
                }
                Frame::Record {
                    start,
                    msg_type,
                    size,
                } => (start, msg_type, size),
            };
            let end = start + 3 + size;
            if read_until.is_some_and(|limit| end > limit) {
                return Ok(());
            }
            let payload = &self.bytes[start + 3..end];
            self.pos = end;
            match msg_type {
                MSG_DATA => self.on_data(payload, start)?,
                MSG_INFO => self.on_info(payload, start, false),
                MSG_INFO_MULTIPLE => self.on_info(payload, start, true),
                MSG_PARAMETER => match parse_param(payload) {
                    Some((name, value)) => self.log.changed_parameters.push(ParamChange {
                        timestamp_us: self.log.last_timestamp_us,
                        name,
                        value,
                    }),
                    None => self.malformed(start, msg_type),
                },
                MSG_PARAMETER_DEFAULT => self.on_param_default(payload, start),
                MSG_ADD_LOGGED => self.on_subscription(payload, start)?,
                MSG_LOGGING => {
                    if payload.len() < 9 {
                        self.malformed(start, msg_type);
                    } else {
                        self.log.logged_text.push(LoggedText {
                            level: payload[0],
                            timestamp_us: u64::from_le_bytes(le8(&payload[1..9])),
                            tag: None,
                            text: decode_text(&payload[9..]),
                        });
                    }
                }
                MSG_LOGGING_TAGGED => {
                    if payload.len() < 11 {
                        self.malformed(start, msg_type);
                    } else {
                        self.log.logged_text.push(LoggedText {
                            level: payload[0],
                            tag: Some(u16::from_le_bytes([payload[1], payload[2]])),
                            timestamp_us: u64::from_le_bytes(le8(&payload[3..11])),
                            text: decode_text(&payload[11..]),
                        });
                    }
                }
                MSG_DROPOUT => {
                    if payload.len() != 2 {
                        self.malformed(start, msg_type);
                    } else {
                        self.log.dropouts.push(Dropout {
                            timestamp_us: self.log.last_timestamp_us,
                            duration_ms: u16::from_le_bytes([payload[0], payload[1]]),
                        });
                    }
                }
                MSG_SYNC => self.log.sync_count += 1,
                _ => {
                    if is_corrupt_header(msg_type, size) {
                        self.corruption(start);
                        self.pos = start + 1;
                        if self.has_sync {
                            self.find_sync(None);
                        }
                    } else if self.has_sync {
                        // an unknown record may hide a sync marker in its payload
                        self.find_sync(Some(start + 3));
                    }
                }
            }
        }
    }

    /// Moves the cursor past the next sync marker. With `from` set, only
    /// the bytes between `from` and the cursor are searched.
    fn find_sync(&mut self, from: Option<usize>) {
        let (lo, hi) = match from {
            Some(lo) => (lo, self.pos),
            None => (self.pos, self.bytes.len()),
        };
        let window = &self.bytes[lo..hi];
        match window.windows(SYNC.len()).position(|w| w == SYNC) {
            Some(i) => {
                self.corruption(lo + i);
                self.pos = lo + i + SYNC.len();
            }
            None => {
                if from.is_none() {
                    self.has_sync = false;
                }
            }
        }
    }

    fn on_info(&mut self, payload: &[u8], start: usize, multiple: bool) {
        let msg_type = if multiple { MSG_INFO_MULTIPLE } else { MSG_INFO };
        let (continued, body) = if multiple {
            match payload.split_first() {
                Some((c, rest)) => (*c != 0, rest),
                None => return self.malformed(start, msg_type),
            }
        } else {
            (false, payload)
        };
        let Some((key, value)) = parse_info(body) else {
            return self.malformed(start, msg_type);
        };
        if multiple {
            let entry = self.log.info_multiple.entry(key).or_default();
            match entry.last_mut() {
                Some(last) if continued => last.push(value),
                _ => entry.push(alloc::vec![value]),
            }
        } else {
            self.log.info.insert(key, value);
        }
    }

    fn on_param_default(&mut self, payload: &[u8], start: usize) {
        let Some((&types, body)) = payload.split_first() else {
            return self.malformed(start, MSG_PARAMETER_DEFAULT);
        };
        let Some((name, value)) = parse_param(body) else {
            return self.malformed(start, MSG_PARAMETER_DEFAULT);
        };
        for bit in 0..8u8 {
            if types & (1 << bit) != 0 {
                self.log
                    .default_parameters
                    .entry(bit)
                    .or_default()
                    .insert(name.clone(), value);
            }
        }
    }

    fn on_flag_bits(&mut self, payload: &[u8], start: usize) -> Result<(), ParseError> {
        if payload.len() < 40 {
            self.malformed(start, MSG_FLAG_BITS);
            return Ok(());
        }
        let mut compat = [0u8; 8];
        let mut incompat = [0u8; 8];
        compat.copy_from_slice(&payload[..8]);
        incompat.copy_from_slice(&payload[8..16]);
        if incompat[0] & !1 != 0 || incompat[1..].iter().any(|&b| b != 0) {
            return Err(ParseError::UnsupportedFlags { incompat });
        }
        let mut offsets: Vec<u64> = payload[16..40]
            .chunks_exact(8)
            .map(|c| u64::from_le_bytes(le8(c)))
            .collect();
        while offsets.last() == Some(&0) {
            offsets.pop();
        }
        self.appended_offsets = offsets
            .into_iter()
            .map(|o| usize::try_from(o).unwrap_or(usize::MAX))
            .collect();
        self.log.compat_flags = compat;
        self.log.incompat_flags = incompat;
        Ok(())
    }

    fn on_subscription(&mut self, payload: &[u8], start: usize) -> Result<(), ParseError> {
        if payload.len() < 3 {
            self.malformed(start, MSG_ADD_LOGGED);
            return Ok(());
        }
        let multi_id = payload[0];
        let msg_id = u16::from_le_bytes([payload[1], payload[2]]);
        let name = decode_text(&payload[3..]);
        let key = SeriesKey::new(name.clone(), multi_id);
        let index = match self.subs.iter().position(|s| s.key == key) {
            Some(i) => i,
            None => {
                let schema = MessageSchema::build(&name, multi_id, &self.log.formats)?;
                self.log.subscriptions.insert(key.clone(), schema.clone());
                self.subs.push(Subscription {
                    key,
                    schema,
                    raw: Vec::new(),
                });
                self.subs.len() - 1
            }
        };
        self.by_msg_id.insert(msg_id, index);
        Ok(())
    }

    fn on_data(&mut self, payload: &[u8], start: usize) -> Result<(), ParseError> {
        if payload.len() < 2 {
            self.malformed(start, MSG_DATA);
            return Ok(());
        }
        let msg_id = u16::from_le_bytes([payload[0], payload[1]]);
        let Some(&index) = self.by_msg_id.get(&msg_id) else {
            if self.missing_ids.insert(msg_id) {
                self.log
                    .warnings
                    .push(ParseWarning::UnknownMessageId { msg_id });
            }
            return Ok(());
        };
        let body = &payload[2..];
        let sub = &mut self.subs[index];
        if body.len() != sub.schema.record_size {
            return Err(ParseError::SchemaViolation(format!(
                "record for '{}' at offset {start} has {} octets, layout needs {}",
                sub.key,
                body.len(),
                sub.schema.record_size
            )));
        }
        sub.raw.extend_from_slice(body);
        let t_off = sub.schema.timestamp_offset();
        let ts = u64::from_le_bytes(le8(&body[t_off..t_off + 8]));
        if ts > self.log.last_timestamp_us {
            self.log.last_timestamp_us = ts;
        }
        Ok(())
    }

    fn finish(mut self) -> FlightLog {
        for sub in core::mem::take(&mut self.subs) {
            if sub.raw.is_empty() || sub.schema.record_size == 0 {
                continue;
            }
            let (series, resorted) = MessageSeries::from_raw(sub.schema, &sub.raw);
            if resorted {
                self.log.warnings.push(ParseWarning::OutOfOrder {
                    name: sub.key.name.clone(),
                    multi_id: sub.key.multi_id,
                });
            }
            self.log.series.insert(sub.key, series);
        }
        self.log
    }
}

fn is_corrupt_header(msg_type: u8, size: usize) -> bool {
    msg_type == 0 || size == 0 || size > MAX_PLAUSIBLE_UNKNOWN
}

/// UTF-8 decode that drops invalid sequences instead of replacing them.
pub(crate) fn decode_text(bytes: &[u8]) -> String {
    let mut out = String::with_capacity(bytes.len());
    for chunk in bytes.utf8_chunks() {
        out.push_str(chunk.valid());
    }
    out
}

/// Parses the `key_len, "type key", value` body shared by info and parameter records.
fn parse_info(body: &[u8]) -> Option<(String, InfoValue)> {
    let (&key_len, rest) = body.split_first()?;
    let key_len = (key_len as usize).min(rest.len());
    let type_key = decode_text(&rest[..key_len]);
    let mut words = type_key.split(' ');
    let type_name = words.next()?;
    let key = words.next()?.to_string();
    let raw = &rest[key_len..];
    let value = if type_name.starts_with("char[") {
        InfoValue::Text(decode_text(raw))
    } else if let Some(kind) = ScalarKind::from_type_name(type_name) {
        if raw.len() != kind.size() {
            return None;
        }
        InfoValue::Scalar(Scalar::decode(kind, raw))
    } else {
        InfoValue::Raw(raw.to_vec())
    };
    Some((key, value))
}

fn parse_param(body: &[u8]) -> Option<(String, ParamValue)> {
    let (key, value) = parse_info(body)?;
    let value = match value {
        InfoValue::Scalar(Scalar::Int32(v)) => ParamValue::Int(v),
        InfoValue::Scalar(Scalar::Float32(v)) => ParamValue::Float(v),
        _ => return None,
    };
    Some((key, value))
}

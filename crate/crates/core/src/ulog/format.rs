//! Message format definitions (`F` records) and their flattening into
//! fixed-layout record schemas.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::error::ParseError;
use super::types::ScalarKind;

/// Nested definitions deeper than this are rejected; real logs nest two levels.
const MAX_NESTING: usize = 16;

/// Largest payload a single record can carry (u16 size minus the message id).
pub(crate) const MAX_RECORD_PAYLOAD: usize = u16::MAX as usize - 2;

/// One `type[len] name` entry of a format definition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormatField {
    pub type_name: String,
    /// `None` for plain fields, `Some(n)` for `type[n]`.
    pub array_len: Option<usize>,
    pub name: String,
}

/// A `name:type field;type field;...` definition as written by the logger.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MessageFormat {
    pub name: String,
    pub fields: Vec<FormatField>,
}

impl MessageFormat {
    pub(crate) fn parse(text: &str) -> Option<Self> {
        let mut parts = text.split(':');
        let name = parts.next()?;
        let body = parts.next()?;
        let mut fields = Vec::new();
        for decl in body.split(';').filter(|d| !d.is_empty()) {
            let mut words = decl.split(' ');
            let type_str = words.next()?;
            let name = words.next()?;
            let (type_name, array_len) = match type_str.find('[') {
                None => (type_str, None),
                Some(open) => {
                    let close = type_str.find(']')?;
                    if close <= open {
                        return None;
                    }
                    let len: usize = type_str[open + 1..close].trim().parse().ok()?;
                    // the reference tooling reads `type[0]` as a plain field
                    (&type_str[..open], (len > 0).then_some(len))
                }
            };
            fields.push(FormatField {
                type_name: type_name.to_string(),
                array_len,
                name: name.to_string(),
            });
        }
        Some(Self {
            name: name.to_string(),
            fields,
        })
    }
}

/// One scalar column of a flattened record layout.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldSchema {
    /// Flattened name: arrays expand to `name[i]`, nested types to `outer.inner`.
    pub name: String,
    pub kind: ScalarKind,
    /// Byte offset inside the record payload (after the message id).
    pub offset: usize,
}

/// Byte layout shared by every data record of one subscription.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MessageSchema {
    pub name: String,
    pub multi_id: u8,
    pub fields: Vec<FieldSchema>,
    /// Index of the `timestamp` field in `fields`.
    pub timestamp_index: usize,
    /// Exact payload size of a data record.
    pub record_size: usize,
}

impl MessageSchema {
    /// Flattens the format named `name`, expanding arrays and nested
    /// types. Trailing `_padding*` fields are dropped; padding in the
    /// middle of a record stays as ordinary columns.
    pub(crate) fn build(
        name: &str,
        multi_id: u8,
        formats: &BTreeMap<String, MessageFormat>,
    ) -> Result<Self, ParseError> {
        let mut fields = Vec::new();
        let mut offset = 0usize;
        flatten(name, "", formats, &mut fields, &mut offset, 0)?;

        while fields
            .last()
            .is_some_and(|f: &FieldSchema| f.name.starts_with("_padding"))
        {
            fields.pop();
        }
        let record_size = fields.last().map_or(0, |f| f.offset + f.kind.size());

        let mut seen = BTreeSet::new();
        for f in &fields {
            if !seen.insert(f.name.as_str()) {
                return Err(ParseError::SchemaViolation(format!(
                    "duplicate field '{}' in '{}'",
                    f.name, name
                )));
            }
        }
        let timestamp_index = fields
            .iter()
            .position(|f| f.name == "timestamp")
            .ok_or_else(|| {
                ParseError::SchemaViolation(format!("'{name}' has no timestamp field"))
            })?;
        if fields[timestamp_index].kind != ScalarKind::UInt64 {
            return Err(ParseError::SchemaViolation(format!(
                "timestamp of '{name}' is not uint64_t"
            )));
        }

        Ok(Self {
            name: name.to_string(),
            multi_id,
            fields,
            timestamp_index,
            record_size,
        })
    }

    pub fn field(&self, name: &str) -> Option<(usize, &FieldSchema)> {
        self.fields.iter().enumerate().find(|(_, f)| f.name == name)
    }

    pub fn timestamp_offset(&self) -> usize {
        self.fields[self.timestamp_index].offset
    }
}

fn flatten(
    type_name: &str,
    prefix: &str,
    formats: &BTreeMap<String, MessageFormat>,
    out: &mut Vec<FieldSchema>,
    offset: &mut usize,
    depth: usize,
) -> Result<(), ParseError> {
    if depth > MAX_NESTING {
        return Err(ParseError::SchemaViolation(format!(
            "format nesting too deep at '{type_name}'"
        )));
    }
    let fmt = formats.get(type_name).ok_or_else(|| {
        ParseError::SchemaViolation(format!("undefined format '{type_name}'"))
    })?;
    for field in &fmt.fields {
        let count = field.array_len.unwrap_or(1);
        if let Some(kind) = ScalarKind::from_type_name(&field.type_name) {
            let bytes = count.checked_mul(kind.size());
            match bytes.and_then(|b| offset.checked_add(b)) {
                Some(end) if end <= MAX_RECORD_PAYLOAD => {}
                _ => {
                    return Err(ParseError::SchemaViolation(format!(
                        "'{type_name}' exceeds the maximum record size"
                    )))
                }
            }
            match field.array_len {
                None => {
                    out.push(FieldSchema {
                        name: format!("{prefix}{}", field.name),
                        kind,
                        offset: *offset,
                    });
                    *offset += kind.size();
                }
                Some(n) => {
                    for i in 0..n {
                        out.push(FieldSchema {
                            name: format!("{prefix}{}[{i}]", field.name),
                            kind,
                            offset: *offset,
                        });
                        *offset += kind.size();
                    }
                }
            }
        } else {
            match field.array_len {
                None => {
                    let nested = format!("{prefix}{}.", field.name);
                    flatten(&field.type_name, &nested, formats, out, offset, depth + 1)?;
                }
                Some(n) => {
                    for i in 0..n {
                        let before = *offset;
                        let nested = format!("{prefix}{}[{i}].", field.name);
                        flatten(&field.type_name, &nested, formats, out, offset, depth + 1)?;
                        if *offset == before {
                            // zero-sized element type: the remaining elements add nothing
                            break;
                        }
                    }
                }
            }
        }
        if *offset > MAX_RECORD_PAYLOAD {
            return Err(ParseError::SchemaViolation(format!(
                "'{type_name}' exceeds the maximum record size"
            )));
        }
    }
    Ok(())
}

use alloc::string::{String, ToString};
use core::fmt;
use core::str::FromStr;

use super::ModelError;

/// Names one attribute column: `message/instance.field`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AttributeRef {
    pub message: String,
    pub multi_id: u8,
    pub field: String,
}

impl AttributeRef {
    pub fn new(message: impl Into<String>, multi_id: u8, field: impl Into<String>) -> Self {
        Self {
            message: message.into(),
            multi_id,
            field: field.into(),
        }
    }

    /// Parses `message.field` or `message/instance.field`. The field part
    /// may itself contain dots (`current.lat`).
    pub fn parse(text: &str) -> Result<Self, ModelError> {
        let invalid = || ModelError::InvalidAttribute(text.to_string());
        let (head, field) = text.split_once('.').ok_or_else(invalid)?;
        let (message, multi_id) = match head.split_once('/') {
            Some((m, i)) => (m, i.parse::<u8>().map_err(|_| invalid())?),
            None => (head, 0),
        };
        if message.is_empty() || field.is_empty() {
            return Err(invalid());
        }
        Ok(Self::new(message, multi_id, field))
    }
}

impl FromStr for AttributeRef {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::parse(s)
    }
}

impl fmt::Display for AttributeRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.multi_id == 0 {
            write!(f, "{}.{}", self.message, self.field)
        } else {
            write!(f, "{}/{}.{}", self.message, self.multi_id, self.field)
        }
    }
}

/// An attribute reference whose message and field may contain `*`
/// wildcards and whose instance may be `*` (all instances).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AttributePattern {
    pub message: String,
    /// `None` matches every instance.
    pub multi_id: Option<u8>,
    pub field: String,
}

impl AttributePattern {
    pub fn parse(text: &str) -> Result<Self, ModelError> {
        let invalid = || ModelError::InvalidAttribute(text.to_string());
        let (head, field) = text.split_once('.').ok_or_else(invalid)?;
        let (message, multi_id) = match head.split_once('/') {
            Some((m, "*")) => (m, None),
            Some((m, i)) => (m, Some(i.parse::<u8>().map_err(|_| invalid())?)),
            None => (head, Some(0)),
        };
        if message.is_empty() || field.is_empty() {
            return Err(invalid());
        }
        Ok(Self {
            message: message.to_string(),
            multi_id,
            field: field.to_string(),
        })
    }

    pub fn matches_series(&self, message: &str, multi_id: u8) -> bool {
        self.multi_id.map_or(true, |i| i == multi_id) && glob_match(&self.message, message)
    }

    pub fn matches_field(&self, field: &str) -> bool {
        glob_match(&self.field, field)
    }
}

impl fmt::Display for AttributePattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.multi_id {
            Some(0) => write!(f, "{}.{}", self.message, self.field),
            Some(i) => write!(f, "{}/{}.{}", self.message, i, self.field),
            None => write!(f, "{}/*.{}", self.message, self.field),
        }
    }
}

/// `*` matches any run of characters, everything else matches literally.
pub fn glob_match(pattern: &str, text: &str) -> bool {
    let p = pattern.as_bytes();
    let t = text.as_bytes();
    let (mut pi, mut ti) = (0, 0);
    let mut star: Option<(usize, usize)> = None;
    while ti < t.len() {
        if pi < p.len() && p[pi] == b'*' {
            star = Some((pi, ti));
            pi += 1;
        } else if pi < p.len() && p[pi] == t[ti] {
            pi += 1;
            ti += 1;
        } else if let Some((sp, st)) = star {
            pi = sp + 1;
            ti = st + 1;
            star = Some((sp, st + 1));
        } else {
            return false;
        }
    }
    p[pi..].iter().all(|&c| c == b'*')
}

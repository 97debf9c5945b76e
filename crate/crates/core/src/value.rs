use std::fmt;

use serde::{Deserialize, Serialize};

/// Port data types. Class-diagram types are not supported.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum DataType {
    Boolean,
    Integer,
    String,
}

impl DataType {
    pub fn from_keyword(s: &str) -> Option<Self> {
        match s {
            "Boolean" => Some(Self::Boolean),
            "Integer" => Some(Self::Integer),
            "String" => Some(Self::String),
            _ => None,
        }
    }

    pub fn keyword(self) -> &'static str {
        match self {
            Self::Boolean => "Boolean",
            Self::Integer => "Integer",
            Self::String => "String",
        }
    }
}

impl fmt::Display for DataType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

/// A message value carried by a port during one tick.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Value {
    Bool(bool),
    Int(i64),
    Str(String),
}

impl Value {
    pub fn data_type(&self) -> DataType {
        match self {
            Value::Bool(_) => DataType::Boolean,
            Value::Int(_) => DataType::Integer,
            Value::Str(_) => DataType::String,
        }
    }

    pub fn as_str(&self) -> Option<&str> {
        match self {
            Value::Str(s) => Some(s),
            _ => None,
        }
    }
}

impl From<&str> for Value {
    fn from(s: &str) -> Self {
        Value::Str(s.to_string())
    }
}

impl From<String> for Value {
    fn from(s: String) -> Self {
        Value::Str(s)
    }
}

impl From<i64> for Value {
    fn from(i: i64) -> Self {
        Value::Int(i)
    }
}

impl From<bool> for Value {
    fn from(b: bool) -> Self {
        Value::Bool(b)
    }
}

/// Literal syntax used by the model languages: `"text"`, `42`, `true`.
impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Bool(b) => write!(f, "{b}"),
            Value::Int(i) => write!(f, "{i}"),
            Value::Str(s) => write!(f, "{}", crate::lexer::quote(s)),
        }
    }
}

/// Dot-separated qualified name, e.g. `kitchen.Controller`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct QName(String);

impl QName {
    pub fn new(s: impl Into<String>) -> Self {
        Self(s.into())
    }

    pub fn from_segments<I, S>(segments: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let parts: Vec<String> = segments.into_iter().map(|s| s.as_ref().to_string()).collect();
        Self(parts.join("."))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn segments(&self) -> impl Iterator<Item = &str> {
        self.0.split('.')
    }

    pub fn first(&self) -> &str {
        self.0.split('.').next().unwrap_or("")
    }

    pub fn last(&self) -> &str {
        self.0.rsplit('.').next().unwrap_or("")
    }

    pub fn is_qualified(&self) -> bool {
        self.0.contains('.')
    }

    pub fn child(&self, name: &str) -> QName {
        if self.0.is_empty() {
            QName(name.to_string())
        } else {
            QName(format!("{}.{}", self.0, name))
        }
    }

    /// Everything before the last segment.
    pub fn parent(&self) -> QName {
        match self.0.rfind('.') {
            Some(i) => QName(self.0[..i].to_string()),
            None => QName::default(),
        }
    }
}

impl fmt::Display for QName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for QName {
    fn from(s: &str) -> Self {
        QName(s.to_string())
    }
}

impl AsRef<str> for QName {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

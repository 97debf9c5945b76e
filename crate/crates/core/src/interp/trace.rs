use std::path::Path;

use thiserror::Error;

use crate::behavior::PortValues;
use crate::value::Value;

/// One map of port name to message per tick.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Trace {
    pub ticks: Vec<PortValues>,
}

impl Trace {
    pub fn silent(ticks: usize) -> Self {
        Self { ticks: vec![PortValues::new(); ticks] }
    }

    pub fn len(&self) -> usize {
        self.ticks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ticks.is_empty()
    }

    /// Messages at tick `t`; ticks past the end are silent.
    pub fn at(&self, t: usize) -> Option<&PortValues> {
        self.ticks.get(t)
    }
}

#[derive(Debug, Error)]
pub enum TraceFormatError {
    #[error("line {line}: {reason}")]
    Line { line: usize, reason: String },
    #[error("{}: {source}", .path.display())]
    Io { path: std::path::PathBuf, source: std::io::Error },
}

/// Renders one compact JSON object per line, keys sorted.
pub fn render_trace(t: &Trace) -> String {
    let mut s = String::new();
    for tick in &t.ticks {
        s.push_str(&serde_json::to_string(tick).expect("port values serialize"));
        s.push('\n');
    }
    s
}

pub fn parse_trace(text: &str) -> Result<Trace, TraceFormatError> {
    let mut ticks = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        let err = |reason: String| TraceFormatError::Line { line: line_no, reason };
        let json: serde_json::Value = serde_json::from_str(line).map_err(|e| err(e.to_string()))?;
        let serde_json::Value::Object(obj) = json else {
            return Err(err("expected a JSON object".into()));
        };
        let mut tick = PortValues::new();
        for (k, v) in obj {
            let value = match v {
                serde_json::Value::Bool(b) => Value::Bool(b),
                serde_json::Value::String(s) => Value::Str(s),
                serde_json::Value::Number(n) => {
                    Value::Int(n.as_i64().ok_or_else(|| err(format!("port `{k}`: {n} is not a 64-bit integer")))?)
                }
                other => return Err(err(format!("port `{k}`: unsupported value {other}"))),
            };
            tick.insert(k, value);
        }
        ticks.push(tick);
    }
    Ok(Trace { ticks })
}

pub fn write_trace(t: &Trace, path: &Path) -> Result<(), TraceFormatError> {
    std::fs::write(path, render_trace(t)).map_err(|source| TraceFormatError::Io { path: path.to_path_buf(), source })
}

pub fn read_trace(path: &Path) -> Result<Trace, TraceFormatError> {
    let text = std::fs::read_to_string(path).map_err(|source| TraceFormatError::Io { path: path.to_path_buf(), source })?;
    parse_trace(&text)
}

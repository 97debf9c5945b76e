use std::fmt;
use std::path::PathBuf;

use serde::Serialize;

/// One-based line/column position in a source text.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize)]
pub struct Pos {
    pub line: u32,
    pub col: u32,
}

impl Pos {
    pub const fn new(line: u32, col: u32) -> Self {
        Self { line, col }
    }

    /// Maps a position that is relative to an embedded text starting at
    /// `origin` back into the enclosing file.
    pub fn rebase(self, origin: Pos) -> Pos {
        if self.line <= 1 {
            Pos::new(origin.line, origin.col + self.col.saturating_sub(1))
        } else {
            Pos::new(origin.line + self.line - 1, self.col)
        }
    }
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize)]
pub struct Location {
    pub file: PathBuf,
    pub pos: Pos,
}

impl Location {
    pub fn new(file: impl Into<PathBuf>, pos: Pos) -> Self {
        Self { file: file.into(), pos }
    }
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.file.display(), self.pos)
    }
}

/// A broken well-formedness rule. Violations are data: checkers collect all of
/// them instead of stopping at the first.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Violation {
    /// Condition identifier such as `CC4`, `A1` or `automaton.deterministic`.
    pub id: String,
    pub message: String,
    pub location: Location,
}

impl Violation {
    pub fn new(id: impl Into<String>, message: impl Into<String>, location: Location) -> Self {
        Self { id: id.into(), message: message.into(), location }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.id, self.location, self.message)
    }
}

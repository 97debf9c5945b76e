//! Load, resolve and check a model in one call.

use std::fmt;
use std::path::PathBuf;

use crate::adl::{check_context_conditions, load_model_dirs, resolve_symbols, LoadError, ResolutionError, RootError, SymbolTable};
use crate::behavior::{attach_behaviors, check_behaviors, EmbeddedParseError, EmbeddingRegistry};
use crate::diag::Violation;
use crate::value::QName;

#[derive(Debug)]
pub struct CheckedModel {
    pub table: SymbolTable,
    pub root: QName,
}

#[derive(Debug)]
pub enum PipelineError {
    Load(Vec<LoadError>),
    Resolve(Vec<ResolutionError>),
    /// Embedded parse errors and context-condition violations, reported together.
    Invalid { parse: Vec<EmbeddedParseError>, violations: Vec<Violation> },
    Root(RootError),
}

impl PipelineError {
    /// One line per diagnostic.
    pub fn lines(&self) -> Vec<String> {
        match self {
            PipelineError::Load(es) => es.iter().map(ToString::to_string).collect(),
            PipelineError::Resolve(es) => es.iter().map(ToString::to_string).collect(),
            PipelineError::Invalid { parse, violations } => {
                parse.iter().map(ToString::to_string).chain(violations.iter().map(ToString::to_string)).collect()
            }
            PipelineError::Root(e) => vec![e.to_string()],
        }
    }
}

impl fmt::Display for PipelineError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.lines().join("\n"))
    }
}

impl std::error::Error for PipelineError {}

/// Resolves, parses embedded behaviors and runs every check.
pub fn check_units(units: Vec<crate::adl::CompilationUnit>, languages: &EmbeddingRegistry) -> Result<SymbolTable, PipelineError> {
    let mut table = resolve_symbols(units).map_err(PipelineError::Resolve)?;
    let parse = attach_behaviors(&mut table, languages);
    let mut violations = check_context_conditions(&table, languages);
    violations.extend(check_behaviors(&table, languages));
    if parse.is_empty() && violations.is_empty() {
        Ok(table)
    } else {
        Err(PipelineError::Invalid { parse, violations })
    }
}

pub fn load_checked(dirs: &[PathBuf], languages: &EmbeddingRegistry, root: Option<&QName>) -> Result<CheckedModel, PipelineError> {
    let units = load_model_dirs(dirs).map_err(PipelineError::Load)?;
    let table = check_units(units, languages)?;
    let root = table.select_root(root).map_err(PipelineError::Root)?;
    Ok(CheckedModel { table, root })
}

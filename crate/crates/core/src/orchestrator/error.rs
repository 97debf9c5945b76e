use thiserror::Error;

use crate::diag::Location;

/// Why a selection of generators cannot be composed.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CompositionError {
    #[error("unknown generator `{name}`{}", if .reason.is_empty() { String::new() } else { format!(": {}", .reason) })]
    UnknownGenerator { name: String, reason: String },
    #[error("application selects no component generator")]
    MissingComponentGenerator,
    #[error("key `{key}` required by `{requirer}` is provided by neither the application context nor a selected generator")]
    UnsatisfiedRequire { key: String, requirer: String },
    #[error("generators depend on each other in a cycle: {}", .names.join(" -> "))]
    DependencyCycle { names: Vec<String> },
    #[error("no selected behavior generator handles language `{language}`")]
    UnhandledBehaviorLanguage { language: String },
    #[error("several selected generators handle language `{language}`: {}", .generators.join(", "))]
    AmbiguousResponsibility { language: String, generators: Vec<String> },
    #[error("selected generators target different runtimes: {}", .names.join(", "))]
    RuntimeMismatch { names: Vec<String> },
    #[error("{location}: constraint set `{set}` of generator `{generator}` violated: {message}")]
    ConstraintViolation { set: String, generator: String, location: Location, message: String },
}

impl CompositionError {
    pub fn kind(&self) -> &'static str {
        match self {
            CompositionError::UnknownGenerator { .. } => "UnknownGenerator",
            CompositionError::MissingComponentGenerator => "MissingComponentGenerator",
            CompositionError::UnsatisfiedRequire { .. } => "UnsatisfiedRequire",
            CompositionError::DependencyCycle { .. } => "DependencyCycle",
            CompositionError::UnhandledBehaviorLanguage { .. } => "UnhandledBehaviorLanguage",
            CompositionError::AmbiguousResponsibility { .. } => "AmbiguousResponsibility",
            CompositionError::RuntimeMismatch { .. } => "RuntimeMismatch",
            CompositionError::ConstraintViolation { .. } => "ConstraintViolation",
        }
    }
}

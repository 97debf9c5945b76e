//! Embedded behavior languages.
//!
//! An atomic component embeds its behavior as raw text; the architecture
//! parser only balances braces. The [`EmbeddingRegistry`] maps a language id
//! to a [`BehaviorLanguage`] that parses the body, checks it against its host
//! component and provides reference step semantics for the interpreter.

pub mod automaton;
mod registry;
pub mod robotarm;

use std::any::Any;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::adl::{ComponentType, SymbolTable};
use crate::diag::{Location, Pos, Violation};
use crate::lexer::ParseError;
use crate::value::Value;

pub use automaton::{Automaton, Transition};
pub use registry::{BehaviorError, EmbeddingRegistry, RegistryError};
pub use robotarm::{RaCommand, RaMode, RaProgramSet};

/// Messages present on ports during one tick; a missing key means no message.
pub type PortValues = BTreeMap<String, Value>;

/// Parsed body of a behavior embedding.
#[derive(Debug, Clone, PartialEq)]
pub enum BehaviorModel {
    Automaton(Automaton),
    RobotArm(RaProgramSet),
    /// Model of a language registered from outside this crate.
    Extension(ExtensionModel),
}

impl BehaviorModel {
    pub fn as_automaton(&self) -> Option<&Automaton> {
        match self {
            BehaviorModel::Automaton(a) => Some(a),
            _ => None,
        }
    }

    pub fn as_robot_arm(&self) -> Option<&RaProgramSet> {
        match self {
            BehaviorModel::RobotArm(p) => Some(p),
            _ => None,
        }
    }

    pub fn as_extension<T: Any>(&self) -> Option<&T> {
        match self {
            BehaviorModel::Extension(e) => e.downcast_ref(),
            _ => None,
        }
    }
}

pub trait ExtensionData: Any + fmt::Debug + Send + Sync {
    fn as_any(&self) -> &dyn Any;
}

impl<T: Any + fmt::Debug + Send + Sync> ExtensionData for T {
    fn as_any(&self) -> &dyn Any {
        self
    }
}

/// Opaque model owned by an extension language.
#[derive(Debug, Clone)]
pub struct ExtensionModel {
    language: String,
    data: Arc<dyn ExtensionData>,
}

impl ExtensionModel {
    pub fn new<T: ExtensionData>(language: impl Into<String>, data: T) -> Self {
        Self { language: language.into(), data: Arc::new(data) }
    }

    pub fn language(&self) -> &str {
        &self.language
    }

    pub fn downcast_ref<T: Any>(&self) -> Option<&T> {
        (*self.data).as_any().downcast_ref()
    }
}

impl PartialEq for ExtensionModel {
    fn eq(&self, other: &Self) -> bool {
        self.language == other.language && Arc::ptr_eq(&self.data, &other.data)
    }
}

/// Runtime state of one behavior instance.
#[derive(Debug, Clone, PartialEq)]
pub enum BehaviorState {
    Automaton { current: String },
    RobotArm(RaMode),
    Extension(serde_json::Value),
}

/// A violation located relative to the start of a behavior body.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BodyViolation {
    pub id: String,
    pub message: String,
    pub pos: Pos,
}

impl BodyViolation {
    pub fn new(id: impl Into<String>, message: impl Into<String>, pos: Pos) -> Self {
        Self { id: id.into(), message: message.into(), pos }
    }

    pub fn locate(self, file: &std::path::Path, body_origin: Pos) -> Violation {
        Violation::new(self.id, self.message, Location::new(file, self.pos.rebase(body_origin)))
    }
}

/// A behavior language that can be embedded into atomic components.
pub trait BehaviorLanguage: Send + Sync {
    fn id(&self) -> &str;

    /// Further ids the language answers to, e.g. the `ioautomaton` prefix of
    /// the automaton AST type named in generator descriptors.
    fn aliases(&self) -> Vec<String> {
        Vec::new()
    }

    fn parse(&self, body: &str) -> Result<BehaviorModel, ParseError>;

    fn check(&self, model: &BehaviorModel, host: &ComponentType) -> Vec<BodyViolation>;

    /// Names of the generator-specific constraint sets this language can check.
    fn constraint_sets(&self) -> Vec<String> {
        Vec::new()
    }

    fn check_constraint(&self, _set: &str, _model: &BehaviorModel, _host: &ComponentType) -> Vec<BodyViolation> {
        Vec::new()
    }

    fn initial_state(&self, model: &BehaviorModel) -> BehaviorState;

    fn step(&self, model: &BehaviorModel, state: &BehaviorState, inputs: &PortValues) -> (BehaviorState, PortValues);
}

/// Failure to parse one embedded body, located in its `.arc` file.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("{location}: in `{language}` behavior: expected {}, found {}", error.expected, error.found)]
pub struct EmbeddedParseError {
    pub location: Location,
    pub language: String,
    pub error: ParseError,
}

/// Parses every embedding whose language is registered and stores the
/// result in its `parsed` field. Unregistered languages are left alone
/// (they surface as CC8).
pub fn attach_behaviors(table: &mut SymbolTable, registry: &EmbeddingRegistry) -> Vec<EmbeddedParseError> {
    let mut errors = Vec::new();
    for unit in table.units_mut() {
        let file = unit.source_path.clone();
        for b in &mut unit.component.behaviors {
            match registry.parse_behavior(&b.language, &b.raw_body) {
                Ok(model) => b.parsed = Some(model),
                Err(BehaviorError::UnknownLanguage(_)) => {}
                Err(BehaviorError::Parse(error)) => errors.push(EmbeddedParseError {
                    location: Location::new(&file, error.pos.rebase(b.body_pos)),
                    language: b.language.clone(),
                    error,
                }),
            }
        }
    }
    errors
}

/// Runs each language's own checks on every parsed embedding.
pub fn check_behaviors(table: &SymbolTable, registry: &EmbeddingRegistry) -> Vec<Violation> {
    let mut out = Vec::new();
    for unit in table.units() {
        for b in &unit.component.behaviors {
            if let Some(model) = &b.parsed {
                for v in registry.check_behavior(&b.language, model, &unit.component) {
                    out.push(v.locate(&unit.source_path, b.body_pos));
                }
            }
        }
    }
    out
}

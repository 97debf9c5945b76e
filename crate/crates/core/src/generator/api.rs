//! Traits a generator implements and the contexts it is handed.

use std::collections::BTreeMap;
use std::path::PathBuf;

use thiserror::Error;

use crate::adl::SymbolTable;
use crate::behavior::BehaviorModel;
use crate::generator::descriptor::{GeneratorDescriptor, GeneratorKind};
use crate::template::RenderError;
use crate::value::QName;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeneratorError {
    #[error("generator `{generator}` was asked to generate before it was configured")]
    NotConfigured { generator: String },
    #[error("context key `{key}` is not available")]
    MissingContextKey { key: String },
    #[error(transparent)]
    Render(#[from] RenderError),
    #[error("generator `{generator}` cannot process this input: {reason}")]
    Unsupported { generator: String, reason: String },
    #[error("{0}")]
    Failed(String),
}

/// Key/value context assembled from the application configuration and the
/// `provides` of already instantiated generators.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct StaticContext {
    entries: BTreeMap<String, String>,
}

impl StaticContext {
    pub fn new(entries: BTreeMap<String, String>) -> Self {
        Self { entries }
    }

    pub fn get(&self, key: &str) -> Result<&str, GeneratorError> {
        self.entries
            .get(key)
            .map(String::as_str)
            .ok_or_else(|| GeneratorError::MissingContextKey { key: key.to_string() })
    }

    pub fn contains(&self, key: &str) -> bool {
        self.entries.contains_key(key)
    }

    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    pub fn entries(&self) -> &BTreeMap<String, String> {
        &self.entries
    }
}

/// How generated code reaches the generated factory.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactoryRef {
    pub generator: String,
    /// Target-language handle, e.g. a module name.
    pub handle: String,
}

/// The AST node a dispatch is about.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeRef {
    pub component: QName,
    /// Canonical behavior language id when the node is a behavior embedding.
    pub language: Option<String>,
}

/// Per-dispatch entries of a [`GenerationContext`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DispatchEntries {
    pub package: QName,
    /// Name of the artifact the generator is expected to produce, derived
    /// from the component name.
    pub artifact_name: String,
    pub factory: Option<FactoryRef>,
    pub imports: Vec<QName>,
    pub ast_node: NodeRef,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenerationContext {
    pub statics: StaticContext,
    pub dispatch: DispatchEntries,
}

impl GenerationContext {
    pub fn get(&self, key: &str) -> Result<&str, GeneratorError> {
        self.statics.get(key)
    }
}

/// Holds the context between `configure` and `generate`. Taking it empties
/// the slot, so each generate needs its own configure.
#[derive(Debug, Clone, Default)]
pub struct ConfigSlot(Option<GenerationContext>);

impl ConfigSlot {
    pub fn set(&mut self, ctx: GenerationContext) {
        self.0 = Some(ctx);
    }

    pub fn take(&mut self, generator: &str) -> Result<GenerationContext, GeneratorError> {
        self.0.take().ok_or_else(|| GeneratorError::NotConfigured { generator: generator.to_string() })
    }

    pub fn is_set(&self) -> bool {
        self.0.is_some()
    }
}

/// One generated file, relative to the application output directory.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratedArtifact {
    pub relative_path: PathBuf,
    pub content: String,
    pub producer: String,
}

impl GeneratedArtifact {
    pub fn new(relative_path: impl Into<PathBuf>, content: impl Into<String>, producer: impl Into<String>) -> Self {
        Self { relative_path: relative_path.into(), content: content.into(), producer: producer.into() }
    }
}

/// Base contract of every generator.
pub trait Generator {
    fn descriptor(&self) -> &GeneratorDescriptor;

    /// Values for the keys in the descriptor's `provides` clause. Keys from
    /// `requires` are readable in `ctx`.
    fn provide(&mut self, ctx: &StaticContext) -> Result<BTreeMap<String, String>, GeneratorError> {
        let _ = ctx;
        Ok(BTreeMap::new())
    }

    fn configure(&mut self, ctx: GenerationContext);
}

/// Callbacks the orchestrator offers a component generator.
pub trait Delegates {
    fn factory(&self) -> Option<&FactoryRef>;

    /// Generates the behavior of `component` with the responsible behavior
    /// generator and returns the artifact name to reference.
    fn dispatch_behavior(&mut self, component: &QName) -> Result<String, GeneratorError>;
}

pub trait ComponentGenerator: Generator {
    fn generate(
        &mut self,
        model: &SymbolTable,
        root: &QName,
        delegates: &mut dyn Delegates,
    ) -> Result<Vec<GeneratedArtifact>, GeneratorError>;
}

pub trait BehaviorGenerator: Generator {
    fn generate(&mut self, ast_node: &BehaviorModel) -> Result<Vec<GeneratedArtifact>, GeneratorError>;
}

pub trait FactoryGenerator: Generator {
    fn reference(&self) -> FactoryRef;

    fn generate(&mut self, model: &SymbolTable, root: &QName) -> Result<Vec<GeneratedArtifact>, GeneratorError>;
}

/// A constructed generator of one of the three kinds.
pub enum GeneratorInstance {
    Component(Box<dyn ComponentGenerator>),
    Behavior(Box<dyn BehaviorGenerator>),
    Factory(Box<dyn FactoryGenerator>),
}

impl GeneratorInstance {
    pub fn kind(&self) -> GeneratorKind {
        match self {
            GeneratorInstance::Component(_) => GeneratorKind::Component,
            GeneratorInstance::Behavior(_) => GeneratorKind::Behavior,
            GeneratorInstance::Factory(_) => GeneratorKind::Factory,
        }
    }

    pub fn base(&self) -> &dyn Generator {
        match self {
            GeneratorInstance::Component(g) => g.as_ref(),
            GeneratorInstance::Behavior(g) => g.as_ref(),
            GeneratorInstance::Factory(g) => g.as_ref(),
        }
    }

    pub fn base_mut(&mut self) -> &mut dyn Generator {
        match self {
            GeneratorInstance::Component(g) => g.as_mut(),
            GeneratorInstance::Behavior(g) => g.as_mut(),
            GeneratorInstance::Factory(g) => g.as_mut(),
        }
    }
}

impl std::fmt::Debug for GeneratorInstance {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "GeneratorInstance::{}({})", self.kind(), self.base().descriptor().name)
    }
}

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::behavior::EmbeddingRegistry;
use crate::generator::api::GeneratorInstance;
use crate::generator::descriptor::{validate_descriptor, DescriptorViolation, GeneratorDescriptor, GeneratorKind};
use crate::orchestrator::CompositionError;
use crate::template::TemplateStore;

/// What a constructor receives when the orchestrator instantiates a generator.
#[derive(Clone)]
pub struct GeneratorSetup {
    pub descriptor: GeneratorDescriptor,
    pub templates: Arc<TemplateStore>,
}

pub type Constructor = Arc<dyn Fn(GeneratorSetup) -> GeneratorInstance + Send + Sync>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RegistrationError {
    #[error("generator `{0}` is already registered")]
    AlreadyRegistered(String),
    #[error("invalid descriptor: {}", .0.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<DescriptorViolation>),
    #[error("generator `{name}` declares a {declared} interface but its implementation is a {actual} generator")]
    KindMismatch { name: String, declared: GeneratorKind, actual: GeneratorKind },
}

struct Entry {
    descriptor: GeneratorDescriptor,
    constructor: Constructor,
}

/// Descriptors and implementations of every available generator, plus the
/// template store and behavior languages they are validated against.
pub struct GeneratorRegistry {
    templates: Arc<TemplateStore>,
    languages: Arc<EmbeddingRegistry>,
    entries: BTreeMap<String, Entry>,
}

impl fmt::Debug for GeneratorRegistry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GeneratorRegistry").field("generators", &self.entries.keys().collect::<Vec<_>>()).finish()
    }
}

impl GeneratorRegistry {
    pub fn new(templates: Arc<TemplateStore>, languages: Arc<EmbeddingRegistry>) -> Self {
        Self { templates, languages, entries: BTreeMap::new() }
    }

    pub fn templates(&self) -> &Arc<TemplateStore> {
        &self.templates
    }

    pub fn languages(&self) -> &Arc<EmbeddingRegistry> {
        &self.languages
    }

    /// Registers a validated descriptor with its implementation. The
    /// constructor is invoked once to check that it builds the declared kind.
    pub fn register(&mut self, descriptor: GeneratorDescriptor, constructor: Constructor) -> Result<(), RegistrationError> {
        if self.entries.contains_key(&descriptor.name) {
            return Err(RegistrationError::AlreadyRegistered(descriptor.name));
        }
        let violations = validate_descriptor(&descriptor, self);
        if !violations.is_empty() {
            return Err(RegistrationError::Invalid(violations));
        }
        let declared = descriptor.kind().expect("validated descriptors have a kind");
        let probe = constructor(GeneratorSetup { descriptor: descriptor.clone(), templates: self.templates.clone() });
        if probe.kind() != declared {
            return Err(RegistrationError::KindMismatch { name: descriptor.name, declared, actual: probe.kind() });
        }
        self.entries.insert(descriptor.name.clone(), Entry { descriptor, constructor });
        Ok(())
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    pub fn descriptors(&self) -> impl Iterator<Item = &GeneratorDescriptor> {
        self.entries.values().map(|e| &e.descriptor)
    }

    pub fn descriptor(&self, name: &str) -> Option<&GeneratorDescriptor> {
        self.entries.get(name).map(|e| &e.descriptor)
    }

    pub fn instantiate(&self, name: &str) -> Option<GeneratorInstance> {
        let e = self.entries.get(name)?;
        Some((e.constructor)(GeneratorSetup { descriptor: e.descriptor.clone(), templates: self.templates.clone() }))
    }

    /// Canonical language id a behavior generator handles, following
    /// language aliases. Unregistered ids are returned unchanged.
    pub fn canonical_language(&self, descriptor: &GeneratorDescriptor) -> Option<String> {
        let lang = descriptor.handled_language()?;
        Some(self.languages.canonical(&lang).unwrap_or(&lang).to_string())
    }
}

/// The single behavior generator among `selected` that handles `language`.
pub fn responsible_generator<'r>(
    registry: &'r GeneratorRegistry,
    selected: &[String],
    language: &str,
) -> Result<&'r GeneratorDescriptor, CompositionError> {
    let wanted = registry.languages.canonical(language).unwrap_or(language);
    let mut matching: Vec<&GeneratorDescriptor> = selected
        .iter()
        .filter_map(|n| registry.descriptor(n))
        .filter(|d| d.kind() == Some(GeneratorKind::Behavior))
        .filter(|d| registry.canonical_language(d).as_deref() == Some(wanted))
        .collect();
    matching.sort_by(|a, b| a.name.cmp(&b.name));
    matching.dedup_by(|a, b| a.name == b.name);
    match matching.len() {
        0 => Err(CompositionError::UnhandledBehaviorLanguage { language: wanted.to_string() }),
        1 => Ok(matching[0]),
        _ => Err(CompositionError::AmbiguousResponsibility {
            language: wanted.to_string(),
            generators: matching.iter().map(|d| d.name.clone()).collect(),
        }),
    }
}

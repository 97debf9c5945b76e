use std::collections::BTreeMap;
use std::sync::Arc;

use thiserror::Error;

use crate::adl::ComponentType;
use crate::behavior::automaton::AutomatonLanguage;
use crate::behavior::robotarm::RobotArmLanguage;
use crate::behavior::{BehaviorLanguage, BehaviorModel, BehaviorState, BodyViolation, PortValues};
use crate::lexer::ParseError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BehaviorError {
    #[error("unknown behavior language `{0}`")]
    UnknownLanguage(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RegistryError {
    #[error("behavior language `{0}` is already registered")]
    AlreadyRegistered(String),
}

/// Language id to language implementation. `Default` registers `automaton`
/// and `robotarm`.
#[derive(Clone)]
pub struct EmbeddingRegistry {
    languages: BTreeMap<String, Arc<dyn BehaviorLanguage>>,
    aliases: BTreeMap<String, String>,
}

impl Default for EmbeddingRegistry {
    fn default() -> Self {
        let mut r = Self::empty();
        r.register(Arc::new(AutomatonLanguage)).expect("fresh registry");
        r.register(Arc::new(RobotArmLanguage)).expect("fresh registry");
        r
    }
}

impl std::fmt::Debug for EmbeddingRegistry {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("EmbeddingRegistry")
            .field("languages", &self.languages.keys().collect::<Vec<_>>())
            .field("aliases", &self.aliases)
            .finish()
    }
}

impl EmbeddingRegistry {
    pub fn empty() -> Self {
        Self { languages: BTreeMap::new(), aliases: BTreeMap::new() }
    }

    /// Adds a language; fails if its id or an alias is taken.
    pub fn register(&mut self, language: Arc<dyn BehaviorLanguage>) -> Result<(), RegistryError> {
        let id = language.id().to_string();
        for name in std::iter::once(id.clone()).chain(language.aliases()) {
            if self.is_registered(&name) {
                return Err(RegistryError::AlreadyRegistered(name));
            }
        }
        self.insert(id, language);
        Ok(())
    }

    /// Adds or overwrites a language.
    pub fn replace(&mut self, language: Arc<dyn BehaviorLanguage>) {
        let id = language.id().to_string();
        self.aliases.retain(|_, target| *target != id);
        self.insert(id, language);
    }

    fn insert(&mut self, id: String, language: Arc<dyn BehaviorLanguage>) {
        for alias in language.aliases() {
            self.aliases.insert(alias, id.clone());
        }
        self.languages.insert(id, language);
    }

    pub fn ids(&self) -> impl Iterator<Item = &str> {
        self.languages.keys().map(String::as_str)
    }

    /// Resolves aliases to the registered id.
    pub fn canonical<'a>(&'a self, id: &'a str) -> Option<&'a str> {
        if let Some((k, _)) = self.languages.get_key_value(id) {
            Some(k)
        } else {
            self.aliases.get(id).map(String::as_str)
        }
    }

    pub fn is_registered(&self, id: &str) -> bool {
        self.canonical(id).is_some()
    }

    pub fn get(&self, id: &str) -> Option<&dyn BehaviorLanguage> {
        let id = self.canonical(id)?;
        self.languages.get(id).map(|l| l.as_ref())
    }

    fn by_model(&self, model: &BehaviorModel) -> &dyn BehaviorLanguage {
        let id = match model {
            BehaviorModel::Automaton(_) => "automaton",
            BehaviorModel::RobotArm(_) => "robotarm",
            BehaviorModel::Extension(e) => e.language(),
        };
        self.get(id).unwrap_or_else(|| panic!("behavior language `{id}` is not registered"))
    }

    pub fn parse_behavior(&self, language: &str, body: &str) -> Result<BehaviorModel, BehaviorError> {
        let lang = self.get(language).ok_or_else(|| BehaviorError::UnknownLanguage(language.to_string()))?;
        Ok(lang.parse(body)?)
    }

    pub fn check_behavior(&self, language: &str, model: &BehaviorModel, host: &ComponentType) -> Vec<BodyViolation> {
        self.get(language).map(|l| l.check(model, host)).unwrap_or_default()
    }

    /// True if some registered language can check constraint set `set`.
    pub fn knows_constraint_set(&self, set: &str) -> bool {
        self.languages.values().any(|l| l.constraint_sets().iter().any(|s| s == set))
    }

    /// Checks `set` on a model. `None` when the model's language does not
    /// define that set.
    pub fn check_constraint(&self, set: &str, model: &BehaviorModel, host: &ComponentType) -> Option<Vec<BodyViolation>> {
        let lang = self.by_model(model);
        lang.constraint_sets().iter().any(|s| s == set).then(|| lang.check_constraint(set, model, host))
    }

    /// # Panics
    /// If the model's language is not registered.
    pub fn initial_state(&self, model: &BehaviorModel) -> BehaviorState {
        self.by_model(model).initial_state(model)
    }

    /// # Panics
    /// If the model's language is not registered.
    pub fn step(&self, model: &BehaviorModel, state: &BehaviorState, inputs: &PortValues) -> (BehaviorState, PortValues) {
        self.by_model(model).step(model, state, inputs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_and_aliases() {
        let r = EmbeddingRegistry::default();
        assert!(r.is_registered("automaton"));
        assert!(r.is_registered("robotarm"));
        assert_eq!(r.canonical("ioautomaton"), Some("automaton"));
        assert!(!r.is_registered("timer"));
        assert!(r.knows_constraint_set("automaton.deterministic"));
    }

    #[test]
    fn registration_does_not_overwrite() {
        let mut r = EmbeddingRegistry::default();
        assert_eq!(r.register(Arc::new(AutomatonLanguage)), Err(RegistryError::AlreadyRegistered("automaton".into())));
        r.replace(Arc::new(AutomatonLanguage));
        assert!(r.is_registered("ioautomaton"));
    }

    #[test]
    fn unknown_language_parse() {
        let r = EmbeddingRegistry::default();
        assert_eq!(r.parse_behavior("timer", "delay 1;"), Err(BehaviorError::UnknownLanguage("timer".into())));
    }
}

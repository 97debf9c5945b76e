//! Python module, class and creator names for the components of a model.

use std::collections::BTreeMap;

use arcgen_core::{QName, SymbolTable};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentNames {
    pub module: String,
    pub class_name: String,
    /// Factory method creating an instance.
    pub creator: String,
}

/// Names for every component reachable from a root. A component whose
/// lowercased simple name is shared with another component gets a package
/// prefix on its module and creator.
#[derive(Debug, Clone)]
pub struct PyNames {
    components: BTreeMap<QName, ComponentNames>,
}

impl PyNames {
    pub fn new(model: &SymbolTable, root: &QName) -> Self {
        let reachable = model.component_preorder(root);
        let mut by_lower: BTreeMap<String, usize> = BTreeMap::new();
        for q in &reachable {
            *by_lower.entry(q.last().to_lowercase()).or_default() += 1;
        }
        let components = reachable
            .into_iter()
            .map(|q| {
                let simple = q.last().to_string();
                let names = if by_lower[&simple.to_lowercase()] > 1 {
                    let prefix = q.parent().segments().collect::<Vec<_>>().join("_");
                    ComponentNames {
                        module: format!("{}_{}", prefix.to_lowercase(), simple.to_lowercase()),
                        creator: format!("create_{prefix}_{simple}"),
                        class_name: simple,
                    }
                } else {
                    ComponentNames { module: simple.to_lowercase(), creator: format!("create_{simple}"), class_name: simple }
                };
                (q, names)
            })
            .collect();
        Self { components }
    }

    pub fn get(&self, q: &QName) -> Option<&ComponentNames> {
        self.components.get(q)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&QName, &ComponentNames)> {
        self.components.iter()
    }
}

/// Module holding the behavior class for an artifact name such as
/// `ArmControllerBehavior`.
pub fn behavior_module(artifact_name: &str) -> String {
    artifact_name.to_lowercase()
}

/// Artifact name the orchestrator assigns to the behavior of `component`.
pub fn behavior_artifact(component: &QName) -> String {
    format!("{}Behavior", component.last())
}

pub fn behavior_creator(artifact_name: &str) -> String {
    format!("create_{artifact_name}")
}

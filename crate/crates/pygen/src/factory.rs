use std::collections::BTreeSet;
use std::sync::Arc;

use arcgen_core::generator::{
    ConfigSlot, FactoryGenerator, FactoryRef, GeneratedArtifact, GenerationContext, Generator, GeneratorDescriptor,
    GeneratorError, GeneratorSetup,
};
use arcgen_core::template::{RenderContext, RenderValue, TemplateStore};
use arcgen_core::{QName, SymbolTable};

use crate::naming::{behavior_artifact, behavior_creator, behavior_module, PyNames};

pub const FACTORY_MODULE: &str = "factory";

/// `factory.py`: a creator per component type and per behavior class.
pub struct FactoryPython {
    descriptor: GeneratorDescriptor,
    templates: Arc<TemplateStore>,
    slot: ConfigSlot,
}

impl FactoryPython {
    pub fn new(setup: GeneratorSetup) -> Self {
        Self { descriptor: setup.descriptor, templates: setup.templates, slot: ConfigSlot::default() }
    }
}

impl Generator for FactoryPython {
    fn descriptor(&self) -> &GeneratorDescriptor {
        &self.descriptor
    }

    fn configure(&mut self, ctx: GenerationContext) {
        self.slot.set(ctx);
    }
}

impl FactoryGenerator for FactoryPython {
    fn reference(&self) -> FactoryRef {
        FactoryRef { generator: self.descriptor.name.clone(), handle: FACTORY_MODULE.into() }
    }

    fn generate(&mut self, model: &SymbolTable, root: &QName) -> Result<Vec<GeneratedArtifact>, GeneratorError> {
        let _ctx = self.slot.take(&self.descriptor.name)?;
        let names = PyNames::new(model, root);
        let mut modules = BTreeSet::new();
        let mut components = Vec::new();
        let mut behaviors = Vec::new();
        for q in model.component_preorder(root) {
            let n = names.get(&q).expect("names cover the preorder");
            modules.insert(n.module.clone());
            components.push(RenderValue::record([
                ("creator", RenderValue::str(&n.creator)),
                ("module", RenderValue::str(&n.module)),
                ("className", RenderValue::str(&n.class_name)),
            ]));
            if model.component(&q).is_some_and(|c| c.is_atomic()) {
                let artifact = behavior_artifact(&q);
                let module = behavior_module(&artifact);
                modules.insert(module.clone());
                behaviors.push(RenderValue::record([
                    ("creator", RenderValue::str(behavior_creator(&artifact))),
                    ("module", RenderValue::str(module)),
                    ("className", RenderValue::str(artifact)),
                ]));
            }
        }
        let factory = RenderValue::record([
            ("root", RenderValue::str(root.as_str())),
            ("modules", RenderValue::list(modules.into_iter().map(RenderValue::Str))),
            ("components", RenderValue::list(components)),
            ("behaviors", RenderValue::list(behaviors)),
        ]);
        let text = self.templates.render(&self.descriptor.template, &RenderContext::new().with("factory", factory))?;
        Ok(vec![GeneratedArtifact::new(format!("{FACTORY_MODULE}.py"), text, &self.descriptor.name)])
    }
}

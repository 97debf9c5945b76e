use std::sync::Arc;

use arcgen_core::behavior::automaton::check_deterministic;
use arcgen_core::behavior::BehaviorModel;
use arcgen_core::generator::{
    BehaviorGenerator, ConfigSlot, GeneratedArtifact, GenerationContext, Generator, GeneratorDescriptor, GeneratorError,
    GeneratorSetup,
};
use arcgen_core::template::{RenderContext, RenderValue, TemplateStore};

use crate::naming::behavior_module;
use crate::{imports_comment, python_literal, python_string, python_type};

/// Behavior class for an I/O automaton. Transitions become checks in
/// declaration order, so the first enabled one fires.
pub struct IoAutomatonPython {
    descriptor: GeneratorDescriptor,
    templates: Arc<TemplateStore>,
    slot: ConfigSlot,
}

impl IoAutomatonPython {
    pub fn new(setup: GeneratorSetup) -> Self {
        Self { descriptor: setup.descriptor, templates: setup.templates, slot: ConfigSlot::default() }
    }
}

impl Generator for IoAutomatonPython {
    fn descriptor(&self) -> &GeneratorDescriptor {
        &self.descriptor
    }

    fn configure(&mut self, ctx: GenerationContext) {
        self.slot.set(ctx);
    }
}

impl BehaviorGenerator for IoAutomatonPython {
    fn generate(&mut self, ast_node: &BehaviorModel) -> Result<Vec<GeneratedArtifact>, GeneratorError> {
        let ctx = self.slot.take(&self.descriptor.name)?;
        let unsupported = |reason: String| GeneratorError::Unsupported { generator: self.descriptor.name.clone(), reason };
        let a = ast_node.as_automaton().ok_or_else(|| unsupported("not an automaton".into()))?;
        if let Some(v) = check_deterministic(a).into_iter().next() {
            return Err(unsupported(v.message));
        }
        let initial = a.initial().ok_or_else(|| unsupported("automaton has no initial state".into()))?;
        let transitions = a.transitions.iter().map(|t| {
            let mut condition = format!("state == {}", python_string(&t.from));
            for g in &t.guards {
                condition.push_str(&format!(
                    " and _is(inputs, {}, {}, {})",
                    python_string(&g.port),
                    python_type(&g.value),
                    python_literal(&g.value)
                ));
            }
            let outputs = t
                .actions
                .iter()
                .map(|p| format!("{}: {}", python_string(&p.port), python_literal(&p.value)))
                .collect::<Vec<_>>()
                .join(", ");
            RenderValue::record([
                ("condition", RenderValue::str(condition)),
                ("outputs", RenderValue::str(format!("{{{outputs}}}"))),
                ("target", RenderValue::str(python_string(&t.to))),
            ])
        });
        let d = &ctx.dispatch;
        let behavior = RenderValue::record([
            ("className", RenderValue::str(&d.artifact_name)),
            ("component", RenderValue::str(d.ast_node.component.as_str())),
            ("package", RenderValue::str(d.package.as_str())),
            ("imports", RenderValue::str(imports_comment(&d.imports))),
            ("initial", RenderValue::str(python_string(initial))),
            ("transitions", RenderValue::list(transitions)),
        ]);
        let text = self.templates.render(&self.descriptor.template, &RenderContext::new().with("behavior", behavior))?;
        let path = format!("{}.py", behavior_module(&d.artifact_name));
        Ok(vec![GeneratedArtifact::new(path, text, &self.descriptor.name)])
    }
}

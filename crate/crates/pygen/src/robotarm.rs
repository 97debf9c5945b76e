use std::sync::Arc;

use arcgen_core::behavior::robotarm::{RaCommandKind, ACTION_PORT, COMMAND_PORT};
use arcgen_core::behavior::BehaviorModel;
use arcgen_core::generator::{
    BehaviorGenerator, ConfigSlot, GeneratedArtifact, GenerationContext, Generator, GeneratorDescriptor, GeneratorError,
    GeneratorSetup,
};
use arcgen_core::template::{RenderContext, RenderValue, TemplateStore};

use crate::naming::behavior_module;
use crate::{imports_comment, python_string};

/// Behavior class running robot arm programs one command per tick.
pub struct RobotArmPython {
    descriptor: GeneratorDescriptor,
    templates: Arc<TemplateStore>,
    slot: ConfigSlot,
}

impl RobotArmPython {
    pub fn new(setup: GeneratorSetup) -> Self {
        Self { descriptor: setup.descriptor, templates: setup.templates, slot: ConfigSlot::default() }
    }
}

impl Generator for RobotArmPython {
    fn descriptor(&self) -> &GeneratorDescriptor {
        &self.descriptor
    }

    fn configure(&mut self, ctx: GenerationContext) {
        self.slot.set(ctx);
    }
}

impl BehaviorGenerator for RobotArmPython {
    fn generate(&mut self, ast_node: &BehaviorModel) -> Result<Vec<GeneratedArtifact>, GeneratorError> {
        let ctx = self.slot.take(&self.descriptor.name)?;
        let programs = ast_node.as_robot_arm().ok_or_else(|| GeneratorError::Unsupported {
            generator: self.descriptor.name.clone(),
            reason: "not a robot arm program set".into(),
        })?;
        let programs = programs.programs.iter().map(|p| {
            let commands = p.commands.iter().map(|c| {
                let (kind, arg) = match &c.kind {
                    RaCommandKind::Wait(n) => ("wait", n.to_string()),
                    other => ("emit", python_string(&other.message().expect("non-wait commands emit"))),
                };
                RenderValue::record([("kind", RenderValue::str(python_string(kind))), ("arg", RenderValue::str(arg))])
            });
            RenderValue::record([("name", RenderValue::str(python_string(&p.name))), ("commands", RenderValue::list(commands))])
        });
        let d = &ctx.dispatch;
        let behavior = RenderValue::record([
            ("className", RenderValue::str(&d.artifact_name)),
            ("component", RenderValue::str(d.ast_node.component.as_str())),
            ("package", RenderValue::str(d.package.as_str())),
            ("imports", RenderValue::str(imports_comment(&d.imports))),
            ("commandPort", RenderValue::str(COMMAND_PORT)),
            ("actionPort", RenderValue::str(ACTION_PORT)),
            ("programs", RenderValue::list(programs)),
        ]);
        let text = self.templates.render(&self.descriptor.template, &RenderContext::new().with("behavior", behavior))?;
        let path = format!("{}.py", behavior_module(&d.artifact_name));
        Ok(vec![GeneratedArtifact::new(path, text, &self.descriptor.name)])
    }
}

use std::sync::Arc;

use arcgen_core::adl::{ComponentType, PortDecl, PortRef};
use arcgen_core::generator::{
    ComponentGenerator, ConfigSlot, Delegates, GeneratedArtifact, GenerationContext, Generator, GeneratorDescriptor,
    GeneratorError, GeneratorSetup,
};
use arcgen_core::template::{RenderContext, RenderValue, TemplateStore};
use arcgen_core::{QName, SymbolTable};

use crate::naming::PyNames;
use crate::{imports_comment, python_string};

const ENTRY_TEMPLATE: &str = "components.Entry";

/// One Python module per component type plus `main.py`.
pub struct ComponentsPython {
    descriptor: GeneratorDescriptor,
    templates: Arc<TemplateStore>,
    slot: ConfigSlot,
}

impl ComponentsPython {
    pub fn new(setup: GeneratorSetup) -> Self {
        Self { descriptor: setup.descriptor, templates: setup.templates, slot: ConfigSlot::default() }
    }
}

fn ports<'a>(ports: impl Iterator<Item = &'a PortDecl>) -> RenderValue {
    RenderValue::list(ports.map(|p| {
        RenderValue::record([("name", RenderValue::str(&p.name)), ("type", RenderValue::str(p.ty.keyword()))])
    }))
}

fn endpoint(r: &PortRef) -> String {
    let instance = r.instance.as_deref().map(python_string).unwrap_or_else(|| "None".into());
    format!("{instance}, {}", python_string(&r.port))
}

impl Generator for ComponentsPython {
    fn descriptor(&self) -> &GeneratorDescriptor {
        &self.descriptor
    }

    fn configure(&mut self, ctx: GenerationContext) {
        self.slot.set(ctx);
    }
}

impl ComponentGenerator for ComponentsPython {
    fn generate(
        &mut self,
        model: &SymbolTable,
        root: &QName,
        delegates: &mut dyn Delegates,
    ) -> Result<Vec<GeneratedArtifact>, GeneratorError> {
        let _ctx = self.slot.take(&self.descriptor.name)?;
        let factory = delegates.factory().cloned().ok_or_else(|| GeneratorError::Unsupported {
            generator: self.descriptor.name.clone(),
            reason: "components are created through a factory, but no factory generator is configured".into(),
        })?;
        let names = PyNames::new(model, root);
        let mut out = Vec::new();
        for q in model.component_preorder(root) {
            let unit = model.unit(&q).expect("preorder yields known components");
            let ty: &ComponentType = &unit.component;
            let own = names.get(&q).expect("names cover the preorder");
            let mut comp = vec![
                ("className", RenderValue::str(&own.class_name)),
                ("qualifiedName", RenderValue::str(q.as_str())),
                ("atomic", RenderValue::Bool(ty.is_atomic())),
                ("inPorts", ports(ty.in_ports())),
                ("outPorts", ports(ty.out_ports())),
                (
                    "imports",
                    RenderValue::str(imports_comment(&unit.imports.iter().map(|i| i.name.clone()).collect::<Vec<_>>())),
                ),
            ];
            if ty.is_atomic() {
                let behavior = delegates.dispatch_behavior(&q)?;
                comp.push(("behaviorName", RenderValue::str(behavior)));
            } else {
                let subs = model.subcomponents(&q).into_iter().map(|(s, sub_ty)| {
                    let creator = &names.get(sub_ty).expect("subcomponents are reachable").creator;
                    RenderValue::record([("name", RenderValue::str(&s.name)), ("creator", RenderValue::str(creator))])
                });
                let connectors = ty.connectors.iter().flat_map(|c| {
                    c.targets.iter().map(move |t| {
                        RenderValue::record([
                            ("source", RenderValue::str(endpoint(&c.source))),
                            ("target", RenderValue::str(endpoint(t))),
                        ])
                    })
                });
                comp.push(("subcomponents", RenderValue::list(subs)));
                comp.push(("connectors", RenderValue::list(connectors)));
            }
            let ctx = RenderContext::new().with("comp", RenderValue::record(comp));
            let text = self.templates.render(&self.descriptor.template, &ctx)?;
            out.push(GeneratedArtifact::new(format!("{}.py", own.module), text, &self.descriptor.name));
        }

        let root_names = names.get(root).expect("root is named");
        let entry = RenderValue::record([
            ("factoryModule", RenderValue::str(&factory.handle)),
            ("rootCreator", RenderValue::str(&root_names.creator)),
            ("rootName", RenderValue::str(root.last())),
        ]);
        let text = self.templates.render(&QName::new(ENTRY_TEMPLATE), &RenderContext::new().with("entry", entry))?;
        out.push(GeneratedArtifact::new("main.py", text, &self.descriptor.name));
        Ok(out)
    }
}

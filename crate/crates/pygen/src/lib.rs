//! Python generators for the `pythontimesync` runtime.
//!
//! Four generators are bundled: `ComponentsPython`, `FactoryPython`,
//! `IOAutomatonPython` and `RobotArmPython`. Their descriptors and templates
//! live in `generators/` and are also compiled into the crate.
//!
//! Output layout, relative to the application directory:
//!
//! * `<component>.py` per component type (lowercase name),
//! * `<component>behavior.py` per atomic component type,
//! * `factory.py` with one creator per component and behavior,
//! * `main.py`, the entry point handing the root to `pythontimesync.main`.

mod automaton;
mod components;
mod factory;
pub mod naming;
mod robotarm;

use std::sync::Arc;

use arcgen_core::generator::{
    parse_generator_descriptor, Constructor, GeneratorDescriptor, GeneratorInstance, GeneratorRegistry, GeneratorSetup,
    RegistrationError,
};
use arcgen_core::template::{TemplateParseError, TemplateStore};
use arcgen_core::Value;

pub use automaton::IoAutomatonPython;
pub use components::ComponentsPython;
pub use factory::FactoryPython;
pub use robotarm::RobotArmPython;

/// Runtime package imported by all generated code.
pub const RUNTIME_MODULE: &str = "pythontimesync";

/// Bundled `.gen` files as `(file name, source)`.
pub const BUNDLED_DESCRIPTORS: [(&str, &str); 4] = [
    ("ComponentsPython.gen", include_str!("../generators/ComponentsPython.gen")),
    ("FactoryPython.gen", include_str!("../generators/FactoryPython.gen")),
    ("IOAutomatonPython.gen", include_str!("../generators/IOAutomatonPython.gen")),
    ("RobotArmPython.gen", include_str!("../generators/RobotArmPython.gen")),
];

/// Bundled templates as `(qualified name, source)`.
pub const BUNDLED_TEMPLATES: [(&str, &str); 8] = [
    ("components.Main", include_str!("../generators/components/Main.tpl")),
    ("components.Ports", include_str!("../generators/components/Ports.tpl")),
    ("components.Atomic", include_str!("../generators/components/Atomic.tpl")),
    ("components.Composed", include_str!("../generators/components/Composed.tpl")),
    ("components.Entry", include_str!("../generators/components/Entry.tpl")),
    ("factory.Main", include_str!("../generators/factory/Main.tpl")),
    ("ioautomaton.Main", include_str!("../generators/ioautomaton/Main.tpl")),
    ("robotarm.Main", include_str!("../generators/robotarm/Main.tpl")),
];

/// Directory holding the bundled descriptors and templates in the source tree.
pub fn generators_dir() -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("generators")
}

pub fn bundled_templates() -> Result<TemplateStore, TemplateParseError> {
    let mut store = TemplateStore::new();
    add_bundled_templates(&mut store)?;
    Ok(store)
}

pub fn add_bundled_templates(store: &mut TemplateStore) -> Result<(), TemplateParseError> {
    for (name, src) in BUNDLED_TEMPLATES {
        store.insert_source(name, src)?;
    }
    Ok(())
}

pub fn bundled_descriptors() -> Vec<GeneratorDescriptor> {
    BUNDLED_DESCRIPTORS
        .iter()
        .map(|(file, src)| parse_generator_descriptor(src).unwrap_or_else(|e| panic!("bundled {file}: {e}")))
        .collect()
}

/// Implementation of a bundled generator, by descriptor name.
pub fn constructor(name: &str) -> Option<Constructor> {
    let c: Constructor = match name {
        "ComponentsPython" => Arc::new(|s: GeneratorSetup| GeneratorInstance::Component(Box::new(ComponentsPython::new(s)))),
        "FactoryPython" => Arc::new(|s: GeneratorSetup| GeneratorInstance::Factory(Box::new(FactoryPython::new(s)))),
        "IOAutomatonPython" => Arc::new(|s: GeneratorSetup| GeneratorInstance::Behavior(Box::new(IoAutomatonPython::new(s)))),
        "RobotArmPython" => Arc::new(|s: GeneratorSetup| GeneratorInstance::Behavior(Box::new(RobotArmPython::new(s)))),
        _ => return None,
    };
    Some(c)
}

/// Registers the four bundled generators. The registry's template store must
/// contain the bundled templates.
pub fn register_bundled(registry: &mut GeneratorRegistry) -> Result<(), RegistrationError> {
    for d in bundled_descriptors() {
        let c = constructor(&d.name).expect("every bundled descriptor has an implementation");
        registry.register(d, c)?;
    }
    Ok(())
}

/// Python source for a model literal.
pub fn python_literal(v: &Value) -> String {
    match v {
        Value::Bool(true) => "True".into(),
        Value::Bool(false) => "False".into(),
        Value::Int(i) => i.to_string(),
        Value::Str(s) => python_string(s),
    }
}

/// A JSON string literal is also a valid Python string literal.
pub fn python_string(s: &str) -> String {
    serde_json::to_string(s).expect("strings serialize")
}

/// Python type a model data type maps to, as used in `type(v) is ...`.
pub fn python_type(v: &Value) -> &'static str {
    match v {
        Value::Bool(_) => "bool",
        Value::Int(_) => "int",
        Value::Str(_) => "str",
    }
}

fn imports_comment(imports: &[arcgen_core::QName]) -> String {
    if imports.is_empty() {
        "none".into()
    } else {
        imports.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
    }
}

mod common;

use std::collections::BTreeMap;
use std::sync::Arc;

use arcgen_core::behavior::BehaviorModel;
use arcgen_core::generator::{
    parse_generator_descriptor, BehaviorGenerator, ComponentGenerator, ConfigSlot, Constructor, Delegates,
    DescriptorViolation, FactoryGenerator, FactoryRef, GeneratedArtifact, GenerationContext, Generator,
    GeneratorDescriptor, GeneratorError, GeneratorInstance, GeneratorRegistry, GeneratorSetup, RegistrationError,
    StaticContext,
};
use arcgen_core::orchestrator::{
    check_composition, execute_plan, generate_artifacts, parse_application_config, CompositionError, GenerationFailure,
};
use arcgen_core::template::TemplateStore;
use arcgen_core::{EmbeddingRegistry, QName, SymbolTable};

/// Test generator of any kind. Component generators emit one file per
/// component, behavior generators one per dispatch.
struct Dummy {
    d: GeneratorDescriptor,
    slot: ConfigSlot,
}

impl Dummy {
    fn check_requires(&self, ctx: &GenerationContext) -> Result<String, GeneratorError> {
        let mut seen = Vec::new();
        for k in &self.d.requires {
            seen.push(format!("{k}={}", ctx.get(k)?));
        }
        Ok(seen.join(","))
    }
}

impl Generator for Dummy {
    fn descriptor(&self) -> &GeneratorDescriptor {
        &self.d
    }

    fn provide(&mut self, ctx: &StaticContext) -> Result<BTreeMap<String, String>, GeneratorError> {
        for k in &self.d.requires {
            ctx.get(k)?;
        }
        Ok(self.d.provides.iter().map(|k| (k.clone(), format!("from {}", self.d.name))).collect())
    }

    fn configure(&mut self, ctx: GenerationContext) {
        self.slot.set(ctx);
    }
}

impl ComponentGenerator for Dummy {
    fn generate(&mut self, model: &SymbolTable, root: &QName, delegates: &mut dyn Delegates) -> Result<Vec<GeneratedArtifact>, GeneratorError> {
        let ctx = self.slot.take(&self.d.name)?;
        let keys = self.check_requires(&ctx)?;
        let factory = delegates.factory().map(|f| f.handle.clone()).unwrap_or_default();
        let mut out = Vec::new();
        for q in model.component_preorder(root) {
            let behavior = if model.component(&q).unwrap().is_atomic() { delegates.dispatch_behavior(&q)? } else { String::new() };
            out.push(GeneratedArtifact::new(format!("{}.txt", q.last()), format!("{behavior} {factory} {keys}"), "ignored"));
        }
        Ok(out)
    }
}

impl BehaviorGenerator for Dummy {
    fn generate(&mut self, _: &BehaviorModel) -> Result<Vec<GeneratedArtifact>, GeneratorError> {
        let ctx = self.slot.take(&self.d.name)?;
        self.check_requires(&ctx)?;
        let name = &ctx.dispatch.artifact_name;
        if name.starts_with("Boom") {
            return Err(GeneratorError::Failed("boom".into()));
        }
        let file = if name.starts_with("Clash") { "clash.txt".to_string() } else { format!("{name}.txt") };
        Ok(vec![GeneratedArtifact::new(file, format!("{} in {}", name, ctx.dispatch.package), "ignored")])
    }
}

impl FactoryGenerator for Dummy {
    fn reference(&self) -> FactoryRef {
        FactoryRef { generator: self.d.name.clone(), handle: "fac".into() }
    }

    fn generate(&mut self, _: &SymbolTable, _: &QName) -> Result<Vec<GeneratedArtifact>, GeneratorError> {
        self.slot.take(&self.d.name)?;
        Ok(vec![GeneratedArtifact::new("factory.txt", "factory", "ignored")])
    }
}

fn dummy(kind: &'static str) -> Constructor {
    Arc::new(move |s: GeneratorSetup| {
        let g = Box::new(Dummy { d: s.descriptor, slot: ConfigSlot::default() });
        match kind {
            "component" => GeneratorInstance::Component(g),
            "behavior" => GeneratorInstance::Behavior(g),
            _ => GeneratorInstance::Factory(g),
        }
    })
}

fn descriptor(name: &str, kind: &str, extra: &str) -> GeneratorDescriptor {
    let (iface, ast) = match kind {
        "component" => ("IComponentGenerator", ""),
        "behavior" => ("IBehaviorGenerator", ""),
        _ => ("IFactoryGenerator", ""),
    };
    let ast = if extra.contains("ast ") { "" } else if kind == "behavior" { "ast automaton.ASTAutomaton;" } else { ast };
    let runtime = if extra.contains("runtime ") { "" } else { "runtime rt.one;" };
    parse_generator_descriptor(&format!("generator {name} {{ interface generators.{iface}; template t.Main; {ast} {runtime} {extra} }}"))
        .unwrap()
}

fn empty_registry() -> GeneratorRegistry {
    let mut store = TemplateStore::new();
    store.insert_source("t.Main", "${x}").unwrap();
    GeneratorRegistry::new(Arc::new(store), Arc::new(EmbeddingRegistry::default()))
}

fn registry(entries: &[(&str, &'static str, &str)]) -> GeneratorRegistry {
    let mut r = empty_registry();
    for (name, kind, extra) in entries {
        r.register(descriptor(name, kind, extra), dummy(kind)).unwrap();
    }
    r
}

fn standard() -> GeneratorRegistry {
    registry(&[
        ("Comp", "component", ""),
        ("Fac", "factory", ""),
        ("Auto", "behavior", "ast ioautomaton.ASTAutomaton;"),
        ("Arm", "behavior", "ast robotarm.ASTRobotArmProgram;"),
    ])
}

const APP: &str = "application App { componentgenerator Comp; factorygenerator Fac; behaviorgenerators Arm, Auto; }";

fn kinds(r: Result<impl std::fmt::Debug, Vec<CompositionError>>) -> Vec<&'static str> {
    r.unwrap_err().iter().map(|e| e.kind()).collect()
}

#[test]
fn toaster_plan_and_run() {
    let m = common::toaster();
    let reg = standard();
    let cfg = parse_application_config(APP).unwrap();
    let plan = check_composition(&cfg, &reg, &m.table, &m.root).unwrap();
    assert_eq!(plan.instantiation_order, ["Arm", "Auto", "Fac", "Comp"]);
    assert_eq!(plan.dispatch_table.get("automaton").map(String::as_str), Some("Auto"));
    assert_eq!(plan.dispatch_table.get("robotarm").map(String::as_str), Some("Arm"));
    assert_eq!(plan.runtime_id.as_str(), "rt.one");

    let run = generate_artifacts(&plan, &cfg, &reg, &m.table).unwrap();
    let produced: Vec<(String, String)> =
        run.report.artifacts.iter().map(|a| (a.path.clone(), a.producer.clone())).collect();
    assert_eq!(
        produced,
        [
            ("App/ArmController.txt", "Comp"),
            ("App/ArmControllerBehavior.txt", "Arm"),
            ("App/Controller.txt", "Comp"),
            ("App/ControllerBehavior.txt", "Auto"),
            ("App/ToastServiceRobot.txt", "Comp"),
            ("App/ToasterController.txt", "Comp"),
            ("App/ToasterControllerBehavior.txt", "Auto"),
            ("App/factory.txt", "Fac"),
        ]
        .map(|(a, b)| (a.to_string(), b.to_string()))
    );
    // Dispatch context carries the containing component's package.
    let behavior = &run.artifacts[std::path::Path::new("App/ControllerBehavior.txt")];
    assert_eq!(behavior.content, "ControllerBehavior in kitchen");
    let root = &run.artifacts[std::path::Path::new("App/ArmController.txt")];
    assert_eq!(root.content, "ArmControllerBehavior fac ");

    let json: serde_json::Value = serde_json::from_str(&run.report.to_json()).unwrap();
    let keys: Vec<&String> = json.as_object().unwrap().keys().collect();
    assert_eq!(keys, ["artifacts", "contextKeys", "order"]);
}

#[test]
fn execute_plan_writes_tree_and_report() {
    let m = common::toaster();
    let reg = standard();
    let cfg = parse_application_config(APP).unwrap();
    let plan = check_composition(&cfg, &reg, &m.table, &m.root).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let report = execute_plan(&plan, &cfg, &reg, &m.table, dir.path()).unwrap();
    assert_eq!(std::fs::read_to_string(dir.path().join("App/factory.txt")).unwrap(), "factory");
    assert_eq!(std::fs::read_to_string(dir.path().join("report.json")).unwrap(), report.to_json());
    let again = execute_plan(&plan, &cfg, &reg, &m.table, dir.path()).unwrap();
    assert_eq!(report, again);
}

#[test]
fn name_errors() {
    let m = common::toaster();
    let reg = standard();
    let unknown = parse_application_config("application A { componentgenerator Nope; factorygenerator Fac; behaviorgenerators Arm, Auto; }").unwrap();
    assert_eq!(kinds(check_composition(&unknown, &reg, &m.table, &m.root)), ["UnknownGenerator"]);
    let wrong = parse_application_config("application A { componentgenerator Fac; behaviorgenerators Arm, Auto; }").unwrap();
    assert_eq!(kinds(check_composition(&wrong, &reg, &m.table, &m.root)), ["UnknownGenerator"]);
    let missing = parse_application_config("application A { factorygenerator Fac; behaviorgenerators Arm, Auto; }").unwrap();
    assert_eq!(kinds(check_composition(&missing, &reg, &m.table, &m.root)), ["MissingComponentGenerator"]);
}

#[test]
fn runtime_mismatch() {
    let m = common::toaster();
    let reg = registry(&[
        ("Comp", "component", ""),
        ("Fac", "factory", "runtime rt.two;"),
        ("Auto", "behavior", "ast ioautomaton.ASTAutomaton;"),
        ("Arm", "behavior", "ast robotarm.ASTRobotArmProgram;"),
    ]);
    let cfg = parse_application_config(APP).unwrap();
    let errors = check_composition(&cfg, &reg, &m.table, &m.root).unwrap_err();
    assert!(matches!(&errors[..], [CompositionError::RuntimeMismatch { names }] if names.len() == 4), "{errors:?}");
}

#[test]
fn responsibility() {
    let m = common::toaster();
    let reg = registry(&[
        ("Comp", "component", ""),
        ("Auto", "behavior", "ast ioautomaton.ASTAutomaton;"),
        ("Auto2", "behavior", "ast automaton.Other;"),
    ]);
    let none = parse_application_config("application A { componentgenerator Comp; }").unwrap();
    let errors = check_composition(&none, &reg, &m.table, &m.root).unwrap_err();
    let langs: Vec<String> = errors
        .iter()
        .map(|e| match e {
            CompositionError::UnhandledBehaviorLanguage { language } => language.clone(),
            other => panic!("{other:?}"),
        })
        .collect();
    assert_eq!(langs, ["automaton", "robotarm"]);

    let two = parse_application_config("application A { componentgenerator Comp; behaviorgenerators Auto, Auto2; }").unwrap();
    let errors = check_composition(&two, &reg, &m.table, &m.root).unwrap_err();
    assert!(errors.contains(&CompositionError::AmbiguousResponsibility {
        language: "automaton".into(),
        generators: vec!["Auto".into(), "Auto2".into()],
    }));
}

#[test]
fn requires_and_context_priority() {
    let m = common::toaster();
    let reg = registry(&[
        ("Comp", "component", "requires k;"),
        ("Fac", "factory", ""),
        ("Auto", "behavior", "ast ioautomaton.ASTAutomaton;"),
        ("Arm", "behavior", "ast robotarm.ASTRobotArmProgram;"),
        ("Prov", "factory", "provides k;"),
    ]);
    let cfg = parse_application_config(APP).unwrap();
    let errors = check_composition(&cfg, &reg, &m.table, &m.root).unwrap_err();
    assert_eq!(errors, [CompositionError::UnsatisfiedRequire { key: "k".into(), requirer: "Comp".into() }]);

    let with_ctx = parse_application_config(
        "application App { componentgenerator Comp; factorygenerator Fac; behaviorgenerators Arm, Auto; context k = \"cfg\"; }",
    )
    .unwrap();
    let plan = check_composition(&with_ctx, &reg, &m.table, &m.root).unwrap();
    let run = generate_artifacts(&plan, &with_ctx, &reg, &m.table).unwrap();
    assert_eq!(run.report.context_keys, ["k"]);
    let root = &run.artifacts[std::path::Path::new("App/ToastServiceRobot.txt")];
    assert_eq!(root.content, " fac k=cfg");
}

#[test]
fn provided_keys_flow_to_requirers() {
    let m = common::toaster();
    let reg = registry(&[
        ("Comp", "component", "requires target.dir;"),
        ("Fac", "factory", "provides target.dir;"),
        ("Auto", "behavior", "ast ioautomaton.ASTAutomaton; requires target.dir;"),
        ("Arm", "behavior", "ast robotarm.ASTRobotArmProgram;"),
    ]);
    let cfg = parse_application_config(APP).unwrap();
    let plan = check_composition(&cfg, &reg, &m.table, &m.root).unwrap();
    assert_eq!(plan.instantiation_order, ["Arm", "Fac", "Auto", "Comp"]);
    let run = generate_artifacts(&plan, &cfg, &reg, &m.table).unwrap();
    assert_eq!(run.report.context_keys, ["target.dir"]);
    let root = &run.artifacts[std::path::Path::new("App/ToastServiceRobot.txt")];
    assert_eq!(root.content, " fac target.dir=from Fac");
}

#[test]
fn cycles_and_all_errors_together() {
    let m = common::toaster();
    let reg = registry(&[
        ("Comp", "component", ""),
        ("Fac", "factory", "provides p; requires q;"),
        ("Auto", "behavior", "ast ioautomaton.ASTAutomaton; provides q; requires p;"),
        ("Arm", "behavior", "ast robotarm.ASTRobotArmProgram; requires nobody;"),
    ]);
    let cfg = parse_application_config(APP).unwrap();
    assert_eq!(kinds(check_composition(&cfg, &reg, &m.table, &m.root)), ["UnsatisfiedRequire"]);

    let reg = registry(&[
        ("Comp", "component", ""),
        ("Fac", "factory", "provides p; requires q;"),
        ("Auto", "behavior", "ast ioautomaton.ASTAutomaton; provides q; requires p;"),
        ("Arm", "behavior", "ast robotarm.ASTRobotArmProgram;"),
    ]);
    let errors = check_composition(&cfg, &reg, &m.table, &m.root).unwrap_err();
    assert_eq!(errors, [CompositionError::DependencyCycle { names: vec!["Auto".into(), "Fac".into()] }]);

    let many = parse_application_config("application App { componentgenerator Comp; factorygenerator Nope; behaviorgenerators Arm; }").unwrap();
    assert_eq!(kinds(check_composition(&many, &reg, &m.table, &m.root)), ["UnknownGenerator", "UnhandledBehaviorLanguage"]);
}

const BOOM: &str = "package b; component Boom { port in String i, out String o; behavior automaton { state S initial; } }";
#[test]
fn behavior_failure_names_generator_and_component() {
    let table = common::model(&[BOOM, "package b; component Top { port in String i, out String o; instance Boom x; connect i -> x.i; connect x.o -> o; }"]).unwrap();
    let reg = standard();
    let cfg = parse_application_config("application App { componentgenerator Comp; factorygenerator Fac; behaviorgenerators Auto; }").unwrap();
    let root = QName::new("b.Top");
    let plan = check_composition(&cfg, &reg, &table, &root).unwrap();
    let dir = tempfile::tempdir().unwrap();
    match execute_plan(&plan, &cfg, &reg, &table, dir.path()) {
        Err(GenerationFailure::Generator { generator, component, .. }) => {
            assert_eq!(generator, "Auto");
            assert_eq!(component, Some(QName::new("b.Boom")));
        }
        other => panic!("{other:?}"),
    }
    assert!(!dir.path().join("report.json").exists());
}

#[test]
fn duplicate_artifact_is_an_error() {
    let clash = |n: &str| format!("package b; component {n} {{ port in String i, out String o; behavior automaton {{ state S initial; }} }}");
    let top = "package b; component Top { port in String i, out String o, out String p; instance Clash1 a; instance Clash2 c; \
        connect i -> a.i, c.i; connect a.o -> o; connect c.o -> p; }";
    let (c1, c2) = (clash("Clash1"), clash("Clash2"));
    let table = common::model(&[&c1, &c2, top]).unwrap();
    let reg = standard();
    let cfg = parse_application_config("application App { componentgenerator Comp; factorygenerator Fac; behaviorgenerators Auto; }").unwrap();
    let plan = check_composition(&cfg, &reg, &table, &QName::new("b.Top")).unwrap();
    let r = generate_artifacts(&plan, &cfg, &reg, &table);
    assert!(matches!(r, Err(GenerationFailure::DuplicateArtifact { ref first, ref second, .. }) if first == "Auto" && second == "Auto"), "{r:?}");
}

struct Stingy(GeneratorDescriptor);

impl Generator for Stingy {
    fn descriptor(&self) -> &GeneratorDescriptor {
        &self.0
    }
    fn configure(&mut self, _: GenerationContext) {}
}

impl FactoryGenerator for Stingy {
    fn reference(&self) -> FactoryRef {
        FactoryRef { generator: self.0.name.clone(), handle: "s".into() }
    }
    fn generate(&mut self, _: &SymbolTable, _: &QName) -> Result<Vec<GeneratedArtifact>, GeneratorError> {
        Ok(vec![])
    }
}

#[test]
fn missing_provided_key_fails_generation() {
    let m = common::toaster();
    let mut reg = standard();
    reg.register(descriptor("Stingy", "factory", "provides k;"), Arc::new(|s: GeneratorSetup| GeneratorInstance::Factory(Box::new(Stingy(s.descriptor)))))
        .unwrap();
    let cfg = parse_application_config("application App { componentgenerator Comp; factorygenerator Stingy; behaviorgenerators Arm, Auto; }").unwrap();
    let plan = check_composition(&cfg, &reg, &m.table, &m.root).unwrap();
    let r = generate_artifacts(&plan, &cfg, &reg, &m.table);
    assert!(matches!(r, Err(GenerationFailure::MissingProvidedKey { ref key, .. }) if key == "k"), "{r:?}");
}

#[test]
fn registration_validates_descriptors() {
    let mut reg = empty_registry();
    let bad_template = parse_generator_descriptor("generator G { interface generators.IFactoryGenerator; template t.Nope; runtime r; provides a; requires a; constraints no.such; }").unwrap();
    match reg.register(bad_template, dummy("factory")) {
        Err(RegistrationError::Invalid(vs)) => {
            assert!(matches!(vs[0], DescriptorViolation::ProvidesRequiresOverlap { .. }));
            assert!(matches!(vs[1], DescriptorViolation::UnknownTemplate { .. }));
            assert!(matches!(vs[2], DescriptorViolation::UnknownConstraintSet { .. }));
        }
        other => panic!("{other:?}"),
    }
    let no_ast = parse_generator_descriptor("generator G { interface generators.IBehaviorGenerator; template t.Main; runtime r; }").unwrap();
    assert!(matches!(reg.register(no_ast, dummy("behavior")), Err(RegistrationError::Invalid(ref v)) if matches!(v[0], DescriptorViolation::MissingHandledLanguage { .. })));
    let odd = parse_generator_descriptor("generator G { interface generators.IWeirdGenerator; template t.Main; runtime r; }").unwrap();
    assert!(matches!(reg.register(odd, dummy("factory")), Err(RegistrationError::Invalid(ref v)) if matches!(v[0], DescriptorViolation::UnknownInterface { .. })));
    let ast_on_factory = parse_generator_descriptor("generator G { interface generators.IFactoryGenerator; template t.Main; ast x.Y; runtime r; }").unwrap();
    assert!(matches!(reg.register(ast_on_factory, dummy("factory")), Err(RegistrationError::Invalid(ref v)) if matches!(v[0], DescriptorViolation::UnexpectedAst { .. })));

    assert!(matches!(reg.register(descriptor("G", "factory", ""), dummy("component")), Err(RegistrationError::KindMismatch { .. })));
    reg.register(descriptor("G", "factory", "constraints automaton.deterministic;"), dummy("factory")).unwrap();
    assert!(matches!(reg.register(descriptor("G", "factory", ""), dummy("factory")), Err(RegistrationError::AlreadyRegistered(_))));
}

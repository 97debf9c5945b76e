mod common;

use std::collections::BTreeSet;

use arcgen_core::generator::{
    BehaviorGenerator, ComponentGenerator, FactoryGenerator, GeneratorError, GeneratorInstance, GeneratorKind,
};
use arcgen_core::orchestrator::{check_composition, parse_application_config, CompositionError};
use arcgen_core::QName;

const ROBOT_ARM_GEN: &str = "generator RobotArmPython {\ninterface generators.IBehaviorGenerator;\ntemplate robotarm.Main;\n\
ast robotarm.ASTRobotArmProgram;\nruntime runtimes.pythontimesync;\n}\n";

#[test]
fn robot_arm_descriptor_is_verbatim() {
    let (_, src) = arcgen_pygen::BUNDLED_DESCRIPTORS.iter().find(|(f, _)| *f == "RobotArmPython.gen").unwrap();
    assert_eq!(*src, ROBOT_ARM_GEN);
    let on_disk = std::fs::read_to_string(arcgen_pygen::generators_dir().join("RobotArmPython.gen")).unwrap();
    assert_eq!(on_disk, ROBOT_ARM_GEN);
}

#[test]
fn bundled_descriptors_validate_and_share_runtime() {
    let reg = common::registry();
    let names: Vec<&str> = reg.names().collect();
    assert_eq!(names, ["ComponentsPython", "FactoryPython", "IOAutomatonPython", "RobotArmPython"]);
    for d in reg.descriptors() {
        assert_eq!(d.runtime.as_str(), "runtimes.pythontimesync");
        assert!(d.provides.is_empty() && d.requires.is_empty());
    }
    let io = reg.descriptor("IOAutomatonPython").unwrap();
    assert_eq!(io.ast.as_ref().unwrap().as_str(), "ioautomaton.ASTAutomaton");
    assert_eq!(io.template.as_str(), "ioautomaton.Main");
    assert_eq!(reg.canonical_language(io).as_deref(), Some("automaton"));
}

#[test]
fn toaster_artifact_set() {
    let m = common::toaster();
    let run = common::generate(&m.table, &m.root, &common::toaster_app());
    let names: Vec<String> = common::files(&run).into_keys().collect();
    assert_eq!(
        names,
        [
            "armcontroller.py",
            "armcontrollerbehavior.py",
            "controller.py",
            "controllerbehavior.py",
            "factory.py",
            "main.py",
            "toastercontroller.py",
            "toastercontrollerbehavior.py",
            "toastservicerobot.py",
        ]
    );
    assert!(run.artifacts.keys().all(|p| p.starts_with("ToasterRobotApplication")));
    assert_eq!(
        run.report.order,
        ["FactoryPython", "IOAutomatonPython", "RobotArmPython", "ComponentsPython"]
    );
}

#[test]
fn atomic_component_delegates_to_named_behavior() {
    let m = common::toaster();
    let files = common::files(&common::generate(&m.table, &m.root, &common::toaster_app()));
    let arm = &files["armcontroller.py"];
    assert!(arm.contains("class ArmController(pythontimesync.Component):"));
    assert!(arm.contains("factory.create_behavior(\"ArmControllerBehavior\")"));
    assert!(arm.contains("self.behavior.step(inputs, self.state)"));
    let root = &files["toastservicerobot.py"];
    assert_eq!(root.matches("self.add_child(").count(), 3);
    assert_eq!(root.matches("self.connect(").count(), 6);
}

fn creators(factory: &str) -> (usize, usize) {
    let defs: Vec<&str> = factory.lines().filter_map(|l| l.trim().strip_prefix("def create_")).collect();
    let behaviors = defs.iter().filter(|d| d.ends_with("(self):")).count();
    let components = defs.iter().filter(|d| d.ends_with("(self, name):") && !d.starts_with("behavior(")).count();
    (components, behaviors)
}

#[test]
fn factory_creators() {
    let m = common::toaster();
    let files = common::files(&common::generate(&m.table, &m.root, &common::toaster_app()));
    assert_eq!(creators(&files["factory.py"]), (4, 3));

    let single = common::model(&[
        "package s; component Lamp { port in Boolean on, out Boolean lit; \
         behavior automaton { state S initial; S -> S [on == true] / [lit = true]; } }"
            .to_string(),
    ]);
    let app = parse_application_config("application One { componentgenerator ComponentsPython; factorygenerator FactoryPython; behaviorgenerators IOAutomatonPython; }").unwrap();
    let files = common::files(&common::generate(&single, &QName::new("s.Lamp"), &app));
    assert_eq!(creators(&files["factory.py"]), (1, 1));
    assert_eq!(files.len(), 4);
}

/// `a.Sensor` and `b.Sensor` share a simple name.
pub fn collision_sources() -> Vec<String> {
    vec![
        "package a; component Sensor { port in Integer v, out Integer w; \
         behavior automaton { state S initial; S -> S [v == 1] / [w = 2]; } }"
            .into(),
        "package b; component Sensor { port in Integer v, out Integer w; instance c.Inner inner; \
         connect v -> inner.x; connect inner.y -> w; }"
            .into(),
        "package c; component Inner { port in Integer x, out Integer y; \
         behavior automaton { state S initial; S -> S [x == 2] / [y = 3]; } }"
            .into(),
        "package top; import a.Sensor; component Top { port in Integer p, out Integer q, out Integer r; \
         instance a.Sensor left; instance b.Sensor right; connect p -> left.v, right.v; \
         connect left.w -> q; connect right.w -> r; }"
            .into(),
    ]
}

#[test]
fn colliding_names_get_package_prefix() {
    let table = common::model(&collision_sources());
    let app = parse_application_config("application Clash { componentgenerator ComponentsPython; factorygenerator FactoryPython; behaviorgenerators IOAutomatonPython; }").unwrap();
    let files = common::files(&common::generate(&table, &QName::new("top.Top"), &app));
    assert!(files.contains_key("a_sensor.py") && files.contains_key("b_sensor.py"));
    assert!(!files.contains_key("sensor.py"));
    let factory = &files["factory.py"];
    assert!(factory.contains("def create_a_Sensor(self, name):\n        return a_sensor.Sensor(name, self)"));
    assert!(factory.contains("def create_b_Sensor(self, name):\n        return b_sensor.Sensor(name, self)"));
    assert!(factory.contains("def create_Inner(self, name):"));
    let top = &files["top.py"];
    assert!(top.contains("factory.create_a_Sensor(\"left\")") && top.contains("factory.create_b_Sensor(\"right\")"));
}

#[test]
fn imports_stay_within_runtime_and_siblings() {
    let m = common::toaster();
    let run = common::generate(&m.table, &m.root, &common::toaster_app());
    let files = common::files(&run);
    let mut allowed: BTreeSet<String> = files.keys().map(|f| f.trim_end_matches(".py").to_string()).collect();
    allowed.insert(arcgen_pygen::RUNTIME_MODULE.to_string());
    for (name, text) in &files {
        for line in text.lines() {
            let t = line.trim_start();
            let module = t.strip_prefix("import ").or_else(|| t.strip_prefix("from ").map(|r| r.split(' ').next().unwrap()));
            if let Some(m) = module {
                assert!(allowed.contains(m.trim()), "{name}: disallowed import `{line}`");
            }
        }
    }
}

#[test]
fn regeneration_is_byte_identical() {
    let m = common::toaster();
    let a = common::generate(&m.table, &m.root, &common::toaster_app());
    let b = common::generate(&m.table, &m.root, &common::toaster_app());
    assert_eq!(common::files(&a), common::files(&b));
    assert_eq!(a.report, b.report);
}

#[test]
fn zero_connector_component_and_trivial_behaviors() {
    let table = common::model(&[
        "package z; component Empty { port in String a; instance Mute m; }".into(),
        "package z; component Mute { port out String b; behavior automaton { state Only initial; } }".into(),
    ]);
    let app = parse_application_config("application Z { componentgenerator ComponentsPython; factorygenerator FactoryPython; behaviorgenerators IOAutomatonPython; }").unwrap();
    let files = common::files(&common::generate(&table, &QName::new("z.Empty"), &app));
    assert!(!files["empty.py"].contains("self.connect("));
    assert!(files["mutebehavior.py"].contains("return {}, state"));

    let idle = common::model(&["package z; component Idle { port in String cmd, out String act; behavior robotarm { } }".into()]);
    let app = parse_application_config("application I { componentgenerator ComponentsPython; factorygenerator FactoryPython; behaviorgenerators RobotArmPython; }").unwrap();
    let files = common::files(&common::generate(&idle, &QName::new("z.Idle"), &app));
    assert!(files["idlebehavior.py"].contains("PROGRAMS = {\n}"));
}

#[test]
fn nondeterministic_automaton_rejected_at_plan_time() {
    let table = common::model(&[
        "package n; component Flip { port in Integer x, out Integer y; behavior automaton { state A initial; state B; \
         A -> A [x == 1] / [y = 1]; A -> B [x == 1] / [y = 2]; } }"
            .into(),
    ]);
    let app = parse_application_config("application N { componentgenerator ComponentsPython; factorygenerator FactoryPython; behaviorgenerators IOAutomatonPython; }").unwrap();
    let errors = check_composition(&app, &common::registry(), &table, &QName::new("n.Flip")).unwrap_err();
    assert_eq!(errors.len(), 1, "{errors:?}");
    match &errors[0] {
        CompositionError::ConstraintViolation { set, generator, location, .. } => {
            assert_eq!(set, "automaton.deterministic");
            assert_eq!(generator, "IOAutomatonPython");
            assert_eq!(location.file.to_str(), Some("m0.arc"));
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn generators_require_configure_before_generate() {
    let reg = common::registry();
    let m = common::toaster();
    let node = m.table.behavior_nodes(&m.root).into_iter().find(|n| n.embedding.language == "robotarm").unwrap();
    let parsed = node.embedding.parsed.as_ref().unwrap();
    let Some(GeneratorInstance::Behavior(mut ra)) = reg.instantiate("RobotArmPython") else { panic!() };
    assert!(matches!(ra.generate(parsed), Err(GeneratorError::NotConfigured { .. })));
    let Some(GeneratorInstance::Factory(mut f)) = reg.instantiate("FactoryPython") else { panic!() };
    assert!(matches!(FactoryGenerator::generate(f.as_mut(), &m.table, &m.root), Err(GeneratorError::NotConfigured { .. })));
    let Some(GeneratorInstance::Component(mut c)) = reg.instantiate("ComponentsPython") else { panic!() };
    struct NoDelegates;
    impl arcgen_core::generator::Delegates for NoDelegates {
        fn factory(&self) -> Option<&arcgen_core::generator::FactoryRef> {
            None
        }
        fn dispatch_behavior(&mut self, _: &QName) -> Result<String, GeneratorError> {
            unreachable!()
        }
    }
    assert!(matches!(ComponentGenerator::generate(c.as_mut(), &m.table, &m.root, &mut NoDelegates), Err(GeneratorError::NotConfigured { .. })));
    assert_eq!(reg.instantiate("IOAutomatonPython").unwrap().kind(), GeneratorKind::Behavior);
}

#[test]
fn behavior_generator_rejects_foreign_model() {
    let reg = common::registry();
    let m = common::toaster();
    let node = m.table.behavior_nodes(&m.root).into_iter().find(|n| n.embedding.language == "robotarm").unwrap();
    let Some(GeneratorInstance::Behavior(mut io)) = reg.instantiate("IOAutomatonPython") else { panic!() };
    io.configure(arcgen_core::generator::GenerationContext {
        statics: Default::default(),
        dispatch: arcgen_core::generator::DispatchEntries {
            package: QName::new("toaster"),
            artifact_name: "ArmControllerBehavior".into(),
            factory: None,
            imports: vec![],
            ast_node: arcgen_core::generator::NodeRef { component: node.component.clone(), language: Some("robotarm".into()) },
        },
    });
    let r = BehaviorGenerator::generate(io.as_mut(), node.embedding.parsed.as_ref().unwrap());
    assert!(matches!(r, Err(GeneratorError::Unsupported { .. })), "{r:?}");
}

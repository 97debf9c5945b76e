#![allow(dead_code)]

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::sync::Arc;

use arcgen_core::adl::parse_architecture;
use arcgen_core::generator::GeneratorRegistry;
use arcgen_core::orchestrator::{check_composition, generate_artifacts, parse_application_config, ApplicationConfig, GenerationRun};
use arcgen_core::pipeline::{check_units, load_checked, CheckedModel};
use arcgen_core::{EmbeddingRegistry, QName, SymbolTable};

pub fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

pub fn registry() -> GeneratorRegistry {
    let mut r = GeneratorRegistry::new(
        Arc::new(arcgen_pygen::bundled_templates().unwrap()),
        Arc::new(EmbeddingRegistry::default()),
    );
    arcgen_pygen::register_bundled(&mut r).unwrap();
    r
}

pub fn toaster() -> CheckedModel {
    load_checked(&[fixtures().join("toaster/models")], &EmbeddingRegistry::default(), None).unwrap()
}

pub fn toaster_app() -> ApplicationConfig {
    parse_application_config(&std::fs::read_to_string(fixtures().join("toaster/toaster.app")).unwrap()).unwrap()
}

pub fn model(sources: &[String]) -> SymbolTable {
    let units = sources
        .iter()
        .enumerate()
        .map(|(i, s)| parse_architecture(s, format!("m{i}.arc")).unwrap_or_else(|e| panic!("{e}\n{s}")))
        .collect();
    check_units(units, &EmbeddingRegistry::default()).unwrap_or_else(|e| panic!("{e}\n{}", sources.join("\n")))
}

pub fn generate(model: &SymbolTable, root: &QName, config: &ApplicationConfig) -> GenerationRun {
    let reg = registry();
    let plan = check_composition(config, &reg, model, root).unwrap_or_else(|e| panic!("{e:?}"));
    generate_artifacts(&plan, config, &reg, model).unwrap()
}

/// Artifact texts keyed by file name within the application directory.
pub fn files(run: &GenerationRun) -> BTreeMap<String, String> {
    run.artifacts
        .iter()
        .map(|(p, a)| (p.file_name().unwrap().to_string_lossy().into_owned(), a.content.clone()))
        .collect()
}

pub fn python() -> Option<&'static str> {
    let ok = Command::new("python3").arg("--version").output().map(|o| o.status.success()).unwrap_or(false);
    if ok {
        Some("python3")
    } else {
        eprintln!("python3 not available; skipping execution of generated code");
        None
    }
}

pub fn runtime_stub() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data")
}

/// Writes a run below `dir` and returns the application directory.
pub fn write(run: &GenerationRun, dir: &Path) -> PathBuf {
    arcgen_core::orchestrator::write_artifacts(run, dir).unwrap();
    let first = run.artifacts.keys().next().unwrap();
    dir.join(first.parent().unwrap())
}

/// Runs `main.py` of a generated application under the runtime stub.
pub fn run_app(app_dir: &Path, stimulus: &Path, ticks: usize, out: &Path) -> std::process::Output {
    Command::new("python3")
        .arg(app_dir.join("main.py"))
        .arg(stimulus)
        .arg(ticks.to_string())
        .arg(out)
        .env("PYTHONPATH", runtime_stub())
        .env("PYTHONDONTWRITEBYTECODE", "1")
        .output()
        .unwrap()
}

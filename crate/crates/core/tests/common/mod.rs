#![allow(dead_code)]

use std::path::PathBuf;

use arcgen_core::adl::parse_architecture;
use arcgen_core::pipeline::{check_units, load_checked, CheckedModel, PipelineError};
use arcgen_core::{EmbeddingRegistry, SymbolTable};

pub fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

pub fn toaster() -> CheckedModel {
    load_checked(&[fixtures().join("toaster/models")], &EmbeddingRegistry::default(), None).expect("toaster fixture is clean")
}

/// Checks in-memory sources, named `<Component>.arc`.
pub fn model(sources: &[&str]) -> Result<SymbolTable, PipelineError> {
    let units = sources
        .iter()
        .enumerate()
        .map(|(i, s)| parse_architecture(s, format!("m{i}.arc")).expect("test source parses"))
        .collect();
    check_units(units, &EmbeddingRegistry::default())
}

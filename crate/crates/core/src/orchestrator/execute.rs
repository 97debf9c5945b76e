use std::collections::{BTreeMap, BTreeSet};
use std::path::{Component, Path, PathBuf};

use serde::Serialize;
use thiserror::Error;

use crate::adl::SymbolTable;
use crate::generator::{
    Delegates, DispatchEntries, FactoryRef, GeneratedArtifact, GenerationContext, GeneratorError, GeneratorInstance,
    GeneratorRegistry, NodeRef, StaticContext,
};
use crate::orchestrator::config::ApplicationConfig;
use crate::orchestrator::plan::ExecutionPlan;
use crate::value::QName;

#[derive(Debug, Error)]
pub enum GenerationFailure {
    #[error("generator `{generator}`{}: {error}", .component.as_ref().map(|c| format!(" on `{c}`")).unwrap_or_default())]
    Generator { generator: String, component: Option<QName>, error: GeneratorError },
    #[error("generator `{generator}` does not provide declared key `{key}`")]
    MissingProvidedKey { generator: String, key: String },
    #[error("artifact `{}` produced by both `{first}` and `{second}`", .path.display())]
    DuplicateArtifact { path: PathBuf, first: String, second: String },
    #[error("generator `{producer}` produced an artifact path outside the output directory: `{}`", .path.display())]
    InvalidArtifactPath { path: PathBuf, producer: String },
    #[error("{}: {source}", .path.display())]
    Io { path: PathBuf, source: std::io::Error },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ArtifactRecord {
    pub path: String,
    pub producer: String,
}

/// Summary of a generation run, serialized to `report.json`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GenerationReport {
    pub order: Vec<String>,
    pub artifacts: Vec<ArtifactRecord>,
    #[serde(rename = "contextKeys")]
    pub context_keys: Vec<String>,
}

impl GenerationReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }
}

/// Artifacts of a run, keyed by path below the output directory.
#[derive(Debug, Clone)]
pub struct GenerationRun {
    pub artifacts: BTreeMap<PathBuf, GeneratedArtifact>,
    pub report: GenerationReport,
}

/// Runs the generators of `plan` without touching the file system. Artifact
/// paths are placed in a directory named after the application.
pub fn generate_artifacts(
    plan: &ExecutionPlan,
    config: &ApplicationConfig,
    registry: &GeneratorRegistry,
    model: &SymbolTable,
) -> Result<GenerationRun, GenerationFailure> {
    let fail = |generator: &str, component: Option<&QName>| {
        let generator = generator.to_string();
        let component = component.cloned();
        move |error| GenerationFailure::Generator { generator, component, error }
    };

    let mut statics: BTreeMap<String, String> = config.context.clone();
    let mut instances: BTreeMap<String, GeneratorInstance> = BTreeMap::new();
    for name in &plan.instantiation_order {
        let mut g = registry.instantiate(name).ok_or_else(|| GenerationFailure::Generator {
            generator: name.clone(),
            component: None,
            error: GeneratorError::Failed("generator is not registered".into()),
        })?;
        let ctx = StaticContext::new(statics.clone());
        let provided = g.base_mut().provide(&ctx).map_err(fail(name, None))?;
        let declared = &g.base().descriptor().provides;
        if let Some(key) = declared.iter().find(|k| !provided.contains_key(*k)) {
            return Err(GenerationFailure::MissingProvidedKey { generator: name.clone(), key: key.clone() });
        }
        for (k, v) in provided.into_iter().filter(|(k, _)| declared.contains(k)) {
            statics.entry(k).or_insert(v);
        }
        instances.insert(name.clone(), g);
    }

    let mut collected = Collected::new(&plan.application);
    let root_unit = model.unit(&plan.root).expect("plan root is in the model");
    let root_context = |factory: Option<FactoryRef>| GenerationContext {
        statics: StaticContext::new(statics.clone()),
        dispatch: DispatchEntries {
            package: root_unit.package.clone(),
            artifact_name: plan.root.last().to_string(),
            factory,
            imports: root_unit.imports.iter().map(|i| i.name.clone()).collect(),
            ast_node: NodeRef { component: plan.root.clone(), language: None },
        },
    };

    let mut factory_ref = None;
    if let Some(fname) = &plan.factory_generator {
        let Some(GeneratorInstance::Factory(f)) = instances.get_mut(fname) else {
            unreachable!("factory generator checked at plan time")
        };
        let r = f.reference();
        f.configure(root_context(Some(r.clone())));
        let artifacts = f.generate(model, &plan.root).map_err(fail(fname, Some(&plan.root)))?;
        collected.add(artifacts, fname)?;
        factory_ref = Some(r);
    }

    let cname = &plan.component_generator;
    let Some(GeneratorInstance::Component(mut component)) = instances.remove(cname) else {
        unreachable!("component generator checked at plan time")
    };
    component.configure(root_context(factory_ref.clone()));
    let mut dispatcher = Dispatcher {
        plan,
        registry,
        model,
        statics: StaticContext::new(statics.clone()),
        factory: factory_ref,
        instances: &mut instances,
        collected: &mut collected,
        failure: None,
    };
    let result = component.generate(model, &plan.root, &mut dispatcher);
    if let Some(f) = dispatcher.failure.take() {
        return Err(f);
    }
    collected.add(result.map_err(fail(cname, Some(&plan.root)))?, cname)?;

    let report = GenerationReport {
        order: plan.instantiation_order.clone(),
        artifacts: collected
            .artifacts
            .iter()
            .map(|(p, a)| ArtifactRecord { path: slash_path(p), producer: a.producer.clone() })
            .collect(),
        context_keys: statics.keys().cloned().collect::<BTreeSet<_>>().into_iter().collect(),
    };
    Ok(GenerationRun { artifacts: collected.artifacts, report })
}

/// Writes every artifact below `out_dir` and the report to `out_dir/report.json`.
pub fn write_artifacts(run: &GenerationRun, out_dir: &Path) -> Result<(), GenerationFailure> {
    let io = |path: &Path| {
        let path = path.to_path_buf();
        move |source| GenerationFailure::Io { path, source }
    };
    for (rel, a) in &run.artifacts {
        let path = out_dir.join(rel);
        if let Some(parent) = path.parent() {
            std::fs::create_dir_all(parent).map_err(io(parent))?;
        }
        std::fs::write(&path, &a.content).map_err(io(&path))?;
    }
    std::fs::create_dir_all(out_dir).map_err(io(out_dir))?;
    let report = out_dir.join("report.json");
    std::fs::write(&report, run.report.to_json()).map_err(io(&report))?;
    Ok(())
}

/// Generates and writes the application.
pub fn execute_plan(
    plan: &ExecutionPlan,
    config: &ApplicationConfig,
    registry: &GeneratorRegistry,
    model: &SymbolTable,
    out_dir: &Path,
) -> Result<GenerationReport, GenerationFailure> {
    let run = generate_artifacts(plan, config, registry, model)?;
    write_artifacts(&run, out_dir)?;
    Ok(run.report)
}

fn slash_path(p: &Path) -> String {
    p.components().map(|c| c.as_os_str().to_string_lossy().into_owned()).collect::<Vec<_>>().join("/")
}

struct Collected {
    prefix: PathBuf,
    artifacts: BTreeMap<PathBuf, GeneratedArtifact>,
}

impl Collected {
    fn new(application: &str) -> Self {
        Self { prefix: PathBuf::from(application), artifacts: BTreeMap::new() }
    }

    fn add(&mut self, artifacts: Vec<GeneratedArtifact>, producer: &str) -> Result<(), GenerationFailure> {
        for mut a in artifacts {
            a.producer = producer.to_string();
            let rel = &a.relative_path;
            let valid = rel.components().next().is_some() && rel.components().all(|c| matches!(c, Component::Normal(_)));
            if !valid {
                return Err(GenerationFailure::InvalidArtifactPath { path: rel.clone(), producer: a.producer });
            }
            let path = self.prefix.join(rel);
            if let Some(prev) = self.artifacts.get(&path) {
                return Err(GenerationFailure::DuplicateArtifact { path, first: prev.producer.clone(), second: a.producer });
            }
            self.artifacts.insert(path, a);
        }
        Ok(())
    }
}

struct Dispatcher<'a> {
    plan: &'a ExecutionPlan,
    registry: &'a GeneratorRegistry,
    model: &'a SymbolTable,
    statics: StaticContext,
    factory: Option<FactoryRef>,
    instances: &'a mut BTreeMap<String, GeneratorInstance>,
    collected: &'a mut Collected,
    failure: Option<GenerationFailure>,
}

impl Dispatcher<'_> {
    fn dispatch(&mut self, component: &QName) -> Result<String, GenerationFailure> {
        let lookup_error = |msg: String| GenerationFailure::Generator {
            generator: self.plan.component_generator.clone(),
            component: Some(component.clone()),
            error: GeneratorError::Failed(msg),
        };
        let unit = self.model.unit(component).ok_or_else(|| lookup_error("unknown component".into()))?;
        let embedding = unit.component.behavior().ok_or_else(|| lookup_error("component has no behavior".into()))?;
        let parsed = embedding.parsed.as_ref().ok_or_else(|| lookup_error("behavior was not parsed".into()))?;
        let languages = self.registry.languages();
        let lang = languages.canonical(&embedding.language).unwrap_or(&embedding.language).to_string();
        let gname = self.plan.dispatch_table.get(&lang).ok_or_else(|| lookup_error(format!("no generator for language `{lang}`")))?;
        let Some(GeneratorInstance::Behavior(g)) = self.instances.get_mut(gname) else {
            unreachable!("dispatch table names behavior generators")
        };
        let artifact_name = format!("{}Behavior", component.last());
        g.configure(GenerationContext {
            statics: self.statics.clone(),
            dispatch: DispatchEntries {
                package: unit.package.clone(),
                artifact_name: artifact_name.clone(),
                factory: self.factory.clone(),
                imports: unit.imports.iter().map(|i| i.name.clone()).collect(),
                ast_node: NodeRef { component: component.clone(), language: Some(lang) },
            },
        });
        let artifacts = g.generate(parsed).map_err(|error| GenerationFailure::Generator {
            generator: gname.clone(),
            component: Some(component.clone()),
            error,
        })?;
        self.collected.add(artifacts, gname)?;
        Ok(artifact_name)
    }
}

impl Delegates for Dispatcher<'_> {
    fn factory(&self) -> Option<&FactoryRef> {
        self.factory.as_ref()
    }

    fn dispatch_behavior(&mut self, component: &QName) -> Result<String, GeneratorError> {
        if self.failure.is_some() {
            return Err(GeneratorError::Failed("an earlier behavior dispatch failed".into()));
        }
        self.dispatch(component).map_err(|f| {
            let msg = f.to_string();
            self.failure = Some(f);
            GeneratorError::Failed(msg)
        })
    }
}

//! The `arcgen` command line: `check`, `plan`, `generate` and `simulate`.
//!
//! [`Toolchain`] bundles the behavior languages and generator
//! implementations a run can use; [`run`] executes parsed arguments against
//! it and returns the process exit code.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use arcgen_core::behavior::{BehaviorLanguage, RegistryError};
use arcgen_core::generator::{parse_generator_descriptor, Constructor, DescriptorError, GeneratorRegistry, RegistrationError};
use arcgen_core::interp::{self, Trace, TraceFormatError};
use arcgen_core::orchestrator::{self, parse_application_config, ApplicationConfig, CompositionError, ConfigError, ExecutionPlan};
use arcgen_core::pipeline::{load_checked, CheckedModel, PipelineError};
use arcgen_core::template::{StoreError, TemplateParseError, TemplateStore};
use arcgen_core::{EmbeddingRegistry, QName};
use clap::{Args, Parser, Subcommand};

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    pub const VIOLATIONS: i32 = 1;
    pub const INPUT: i32 = 2;
    pub const GENERATION: i32 = 3;
}

#[derive(Debug, thiserror::Error)]
pub enum ToolchainError {
    #[error("{}: {source}", .path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{}: {source}", .path.display())]
    Descriptor { path: PathBuf, source: DescriptorError },
    #[error(transparent)]
    Templates(#[from] StoreError),
    #[error(transparent)]
    Template(#[from] TemplateParseError),
    #[error("{}: no implementation is registered for generator `{name}`", .path.display())]
    NotImplemented { path: PathBuf, name: String },
    #[error(transparent)]
    Registration(#[from] RegistrationError),
}

/// Behavior languages and generator implementations available to a run.
pub struct Toolchain {
    languages: EmbeddingRegistry,
    constructors: BTreeMap<String, Constructor>,
}

impl Default for Toolchain {
    fn default() -> Self {
        Self::new()
    }
}

impl Toolchain {
    /// The built-in `automaton` and `robotarm` languages and the bundled
    /// Python generators.
    pub fn new() -> Self {
        let constructors = arcgen_pygen::bundled_descriptors()
            .into_iter()
            .map(|d| {
                let c = arcgen_pygen::constructor(&d.name).expect("bundled generators are implemented");
                (d.name, c)
            })
            .collect();
        Self { languages: EmbeddingRegistry::default(), constructors }
    }

    pub fn with_language(mut self, language: Arc<dyn BehaviorLanguage>) -> Result<Self, RegistryError> {
        self.languages.register(language)?;
        Ok(self)
    }

    pub fn with_generator(mut self, name: impl Into<String>, constructor: Constructor) -> Self {
        self.constructors.insert(name.into(), constructor);
        self
    }

    pub fn languages(&self) -> &EmbeddingRegistry {
        &self.languages
    }

    pub fn load_model(&self, dirs: &[PathBuf], root: Option<&QName>) -> Result<CheckedModel, PipelineError> {
        load_checked(dirs, &self.languages, root)
    }

    /// Registry of the `.gen` descriptors and `.tpl` templates found in
    /// `dirs`, or of the bundled generators when `dirs` is empty.
    pub fn generator_registry(&self, dirs: &[PathBuf]) -> Result<GeneratorRegistry, ToolchainError> {
        let mut templates = TemplateStore::new();
        let mut descriptors = Vec::new();
        if dirs.is_empty() {
            arcgen_pygen::add_bundled_templates(&mut templates)?;
            for (file, src) in arcgen_pygen::BUNDLED_DESCRIPTORS {
                let path = PathBuf::from(file);
                let d = parse_generator_descriptor(src).map_err(|source| ToolchainError::Descriptor { path: path.clone(), source })?;
                descriptors.push((path, d));
            }
        }
        for dir in dirs {
            templates.load_dir(dir)?;
            for path in gen_files(dir)? {
                let src = std::fs::read_to_string(&path).map_err(|source| ToolchainError::Io { path: path.clone(), source })?;
                let d = parse_generator_descriptor(&src).map_err(|source| ToolchainError::Descriptor { path: path.clone(), source })?;
                descriptors.push((path, d));
            }
        }
        let mut registry = GeneratorRegistry::new(Arc::new(templates), Arc::new(self.languages.clone()));
        for (path, d) in descriptors {
            let c = self
                .constructors
                .get(&d.name)
                .cloned()
                .ok_or_else(|| ToolchainError::NotImplemented { path: path.clone(), name: d.name.clone() })?;
            registry.register(d, c)?;
        }
        Ok(registry)
    }
}

fn gen_files(dir: &Path) -> Result<Vec<PathBuf>, ToolchainError> {
    let io = |source| ToolchainError::Io { path: dir.to_path_buf(), source };
    let mut out = Vec::new();
    for entry in std::fs::read_dir(dir).map_err(io)? {
        let path = entry.map_err(io)?.path();
        if path.is_file() && path.extension().is_some_and(|e| e == "gen") {
            out.push(path);
        }
    }
    out.sort();
    Ok(out)
}

#[derive(Debug, Parser)]
#[command(name = "arcgen", version, about = "Compose code generators over component-and-connector architectures")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse, resolve and check models.
    Check(ModelArgs),
    /// Check generator composition and print the execution plan as JSON.
    Plan(PlanArgs),
    /// Generate the application into an output directory.
    Generate(GenerateArgs),
    /// Run the reference interpreter on a stimulus trace.
    Simulate(SimulateArgs),
}

#[derive(Debug, Args)]
pub struct ModelArgs {
    /// Directory of `.arc` files (repeatable).
    #[arg(long = "models", required = true)]
    pub models: Vec<PathBuf>,
    /// Qualified name of the root component (default: the unique root).
    #[arg(long)]
    pub root: Option<String>,
}

#[derive(Debug, Args)]
pub struct PlanArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Directory of `.gen` descriptors and `.tpl` templates (repeatable;
    /// default: the bundled Python generators).
    #[arg(long = "generators")]
    pub generators: Vec<PathBuf>,
    /// Application configuration (`.app`).
    #[arg(long)]
    pub app: PathBuf,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[command(flatten)]
    pub plan: PlanArgs,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Stimulus trace (JSON lines); omitted means silent inputs.
    #[arg(long)]
    pub stimulus: Option<PathBuf>,
    #[arg(long)]
    pub ticks: usize,
    /// Output trace file (default: standard output).
    #[arg(long = "trace-out")]
    pub trace_out: Option<PathBuf>,
}

/// Executes a command; diagnostics go to `err`, payloads to `out`.
pub fn run(cli: &Cli, toolchain: &Toolchain, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let result = match &cli.command {
        Command::Check(a) => load(toolchain, a).map(|_| exit::OK),
        Command::Plan(a) => plan(toolchain, a).map(|(plan, _, _, _)| {
            let _ = writeln!(out, "{}", plan_json(&plan));
            exit::OK
        }),
        Command::Generate(a) => generate(toolchain, a),
        Command::Simulate(a) => simulate(toolchain, a, out),
    };
    match result {
        Ok(code) => code,
        Err(Failure { code, lines }) => {
            for l in lines {
                let _ = writeln!(err, "{l}");
            }
            code
        }
    }
}

struct Failure {
    code: i32,
    lines: Vec<String>,
}

impl Failure {
    fn new(code: i32, line: impl ToString) -> Self {
        Self { code, lines: vec![line.to_string()] }
    }
}

fn load(toolchain: &Toolchain, a: &ModelArgs) -> Result<CheckedModel, Failure> {
    let root = a.root.as_deref().map(QName::new);
    toolchain.load_model(&a.models, root.as_ref()).map_err(|e| {
        let code = match &e {
            PipelineError::Load(_) => exit::INPUT,
            PipelineError::Invalid { parse, .. } if !parse.is_empty() => exit::INPUT,
            _ => exit::VIOLATIONS,
        };
        Failure { code, lines: e.lines() }
    })
}

fn read_app(path: &Path) -> Result<ApplicationConfig, Failure> {
    let src = std::fs::read_to_string(path).map_err(|e| Failure::new(exit::INPUT, format!("{}: {e}", path.display())))?;
    parse_application_config(&src).map_err(|e: ConfigError| Failure::new(exit::INPUT, format!("{}: {e}", path.display())))
}

fn composition_lines(errors: &[CompositionError]) -> Vec<String> {
    errors.iter().map(|e| format!("{}: {e}", e.kind())).collect()
}

fn plan(toolchain: &Toolchain, a: &PlanArgs) -> Result<(ExecutionPlan, ApplicationConfig, GeneratorRegistry, CheckedModel), Failure> {
    let model = load(toolchain, &a.model)?;
    let config = read_app(&a.app)?;
    let registry = toolchain.generator_registry(&a.generators).map_err(|e| Failure::new(exit::INPUT, e))?;
    let plan = orchestrator::check_composition(&config, &registry, &model.table, &model.root)
        .map_err(|es| Failure { code: exit::VIOLATIONS, lines: composition_lines(&es) })?;
    Ok((plan, config, registry, model))
}

/// JSON rendering of a plan, as printed by `arcgen plan`.
pub fn plan_json(plan: &ExecutionPlan) -> String {
    let v = serde_json::json!({
        "application": plan.application,
        "root": plan.root.as_str(),
        "runtime": plan.runtime_id.as_str(),
        "order": plan.instantiation_order,
        "componentGenerator": plan.component_generator,
        "factoryGenerator": plan.factory_generator,
        "dispatch": plan.dispatch_table,
        "providedKeys": plan.provided_keys,
    });
    serde_json::to_string_pretty(&v).expect("plan serializes")
}

fn generate(toolchain: &Toolchain, a: &GenerateArgs) -> Result<i32, Failure> {
    let (plan, config, registry, model) = plan(toolchain, &a.plan)?;
    orchestrator::execute_plan(&plan, &config, &registry, &model.table, &a.out)
        .map_err(|e| Failure::new(exit::GENERATION, e))?;
    Ok(exit::OK)
}

fn simulate(toolchain: &Toolchain, a: &SimulateArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let model = load(toolchain, &a.model)?;
    let stimulus = match &a.stimulus {
        Some(p) => interp::read_trace(p).map_err(|e: TraceFormatError| Failure::new(exit::INPUT, format!("{}: {e}", p.display())))?,
        None => Trace::default(),
    };
    let trace = interp::simulate(&model.table, toolchain.languages(), &model.root, &stimulus, a.ticks)
        .map_err(|e| Failure::new(exit::INPUT, e))?;
    match &a.trace_out {
        Some(p) => interp::write_trace(&trace, p).map_err(|e| Failure::new(exit::INPUT, e))?,
        None => {
            let _ = out.write_all(interp::render_trace(&trace).as_bytes());
        }
    }
    Ok(exit::OK)
}

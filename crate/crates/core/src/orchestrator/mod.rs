//! Application configuration, composition checks and generation runs.

mod config;
mod error;
mod execute;
mod plan;

pub use config::{parse_application_config, print_application_config, ApplicationConfig, ConfigError};
pub use error::CompositionError;
pub use execute::{execute_plan, generate_artifacts, write_artifacts, ArtifactRecord, GenerationFailure, GenerationReport, GenerationRun};
pub use plan::{check_composition, compute_execution_order, dependency_edges, ExecutionPlan};

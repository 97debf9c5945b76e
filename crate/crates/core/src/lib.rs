//! Core of the `arcgen` toolchain.
//!
//! The crate is organized along the pipeline a model goes through:
//!
//! * [`adl`] parses `.arc` component-and-connector models, resolves symbols
//!   and checks context conditions CC1 to CC8.
//! * [`behavior`] hosts the embedding registry and the two built-in behavior
//!   languages (`automaton` and `robotarm`) with their reference semantics.
//! * [`template`] is the small text-template engine generators render with.
//! * [`generator`] describes generators (the `.gen` descriptor language), the
//!   generator traits and the generator registry.
//! * [`orchestrator`] reads `.app` application configurations, checks that a
//!   selection of generators composes and drives a generation run.
//! * [`interp`] is the time-synchronous reference interpreter and the trace
//!   file format shared with generated applications.

pub mod adl;
pub mod behavior;
pub mod diag;
pub mod generator;
pub mod interp;
pub mod lexer;
pub mod orchestrator;
pub mod pipeline;
pub mod template;
pub mod value;

pub use adl::{CompilationUnit, ComponentType, SymbolTable};
pub use behavior::{BehaviorModel, BehaviorState, EmbeddingRegistry};
pub use interp::Trace;
pub use diag::{Location, Pos, Violation};
pub use generator::{GeneratorDescriptor, GeneratorKind, GeneratorRegistry};
pub use orchestrator::{ApplicationConfig, CompositionError, ExecutionPlan, GenerationReport};
pub use value::{DataType, QName, Value};

//! Generator interfaces.
//!
//! A generator is known to the orchestrator only through its
//! [`GeneratorDescriptor`] (parsed from a `.gen` file) and one of the three
//! kind traits in [`api`]. Implementations are registered programmatically
//! in a [`GeneratorRegistry`] next to their descriptor.

pub mod api;
mod descriptor;
mod registry;

pub use api::{
    BehaviorGenerator, ComponentGenerator, ConfigSlot, Delegates, DispatchEntries, FactoryGenerator, FactoryRef,
    GeneratedArtifact, GenerationContext, Generator, GeneratorError, GeneratorInstance, NodeRef, StaticContext,
};
pub use descriptor::{
    parse_generator_descriptor, print_generator_descriptor, validate_descriptor, DescriptorError, DescriptorViolation,
    GeneratorDescriptor, GeneratorKind, DEFAULT_OUTPUT,
};
pub use registry::{responsible_generator, Constructor, GeneratorRegistry, GeneratorSetup, RegistrationError};

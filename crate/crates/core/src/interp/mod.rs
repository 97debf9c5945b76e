//! Time-synchronous reference interpreter.
//!
//! Every connector delays a message by one tick. Stimuli and observations
//! use the JSON-lines trace format also read and written by generated
//! applications.

mod simulate;
mod trace;
pub mod vectors;

pub use simulate::{simulate, simulate_with_steps, SimulationError, StepRecord};
pub use trace::{parse_trace, read_trace, render_trace, write_trace, Trace, TraceFormatError};

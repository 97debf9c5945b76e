//! Shared test vectors for the Python runtime and generated code.
//!
//! A vector file is a JSON object `{"simulations": [...]}`. Each simulation
//! carries the stimulus, the expected root observations and every behavior
//! step the reference interpreter took, so behaviors can be tested in
//! isolation as well as end to end.

use serde_json::{json, Value as Json};

use crate::behavior::{BehaviorState, PortValues, RaMode};
use crate::interp::simulate::StepRecord;
use crate::interp::trace::Trace;
use crate::value::QName;

/// `{"kind": "automaton", "current": ..}`, `{"kind": "robotarm", "mode": "idle"}`
/// or `{"kind": "robotarm", "mode": "running", "program", "pc", "waitRemaining"}`.
pub fn state_json(s: &BehaviorState) -> Json {
    match s {
        BehaviorState::Automaton { current } => json!({"kind": "automaton", "current": current}),
        BehaviorState::RobotArm(RaMode::Idle) => json!({"kind": "robotarm", "mode": "idle"}),
        BehaviorState::RobotArm(RaMode::Running { program, pc, wait_remaining }) => json!({
            "kind": "robotarm", "mode": "running", "program": program, "pc": pc, "waitRemaining": wait_remaining
        }),
        BehaviorState::Extension(v) => json!({"kind": "extension", "state": v}),
    }
}

fn ports_json(p: &PortValues) -> Json {
    serde_json::to_value(p).expect("port values serialize")
}

fn trace_json(t: &Trace) -> Json {
    Json::Array(t.ticks.iter().map(ports_json).collect())
}

pub fn step_json(s: &StepRecord) -> Json {
    json!({
        "tick": s.tick,
        "instance": s.instance,
        "component": s.component.as_str(),
        "state": state_json(&s.state),
        "inputs": ports_json(&s.inputs),
        "nextState": state_json(&s.next_state),
        "outputs": ports_json(&s.outputs),
    })
}

pub fn simulation_vector(name: &str, root: &QName, stimulus: &Trace, expected: &Trace, steps: &[StepRecord]) -> Json {
    json!({
        "name": name,
        "root": root.as_str(),
        "ticks": expected.len(),
        "stimulus": trace_json(stimulus),
        "expected": trace_json(expected),
        "steps": steps.iter().map(step_json).collect::<Vec<_>>(),
    })
}

/// Pretty-printed vector file with a trailing newline.
pub fn vector_file(simulations: Vec<Json>) -> String {
    serde_json::to_string_pretty(&json!({ "simulations": simulations })).expect("vectors serialize") + "\n"
}

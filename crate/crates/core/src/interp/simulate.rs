use std::collections::BTreeMap;

use thiserror::Error;

use crate::adl::{ComponentType, Direction, PortRef, SymbolTable};
use crate::behavior::{BehaviorModel, BehaviorState, EmbeddingRegistry, PortValues};
use crate::interp::trace::Trace;
use crate::value::{DataType, QName, Value};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SimulationError {
    #[error("unknown component `{0}`")]
    UnknownComponent(QName),
    #[error("tick {tick}: `{port}` is not an in-port of the root component")]
    UnknownPort { tick: usize, port: String },
    #[error("tick {tick}: port `{port}` expects {expected}, got {found}")]
    StimulusTypeError { tick: usize, port: String, expected: DataType, found: Value },
    #[error("atomic instance `{instance}` has no parsed behavior")]
    MissingBehavior { instance: String },
}

/// One behavior step of one atomic instance.
#[derive(Debug, Clone, PartialEq)]
pub struct StepRecord {
    pub tick: usize,
    /// Dot-separated instance path below the root.
    pub instance: String,
    pub component: QName,
    pub state: BehaviorState,
    pub inputs: PortValues,
    pub next_state: BehaviorState,
    pub outputs: PortValues,
}

/// A port in the instance tree; the root has the empty path.
type PortId = (Vec<String>, String);

struct Atomic<'m> {
    path: Vec<String>,
    component: QName,
    ty: &'m ComponentType,
    model: &'m BehaviorModel,
    state: BehaviorState,
}

struct Network<'m> {
    atomics: Vec<Atomic<'m>>,
    routes: BTreeMap<PortId, Vec<PortId>>,
}

fn port_id(path: &[String], r: &PortRef) -> PortId {
    let mut p = path.to_vec();
    if let Some(i) = &r.instance {
        p.push(i.clone());
    }
    (p, r.port.clone())
}

fn build<'m>(
    model: &'m SymbolTable,
    languages: &EmbeddingRegistry,
    q: &QName,
    path: Vec<String>,
    net: &mut Network<'m>,
) -> Result<(), SimulationError> {
    let ty = model.component(q).ok_or_else(|| SimulationError::UnknownComponent(q.clone()))?;
    for c in &ty.connectors {
        let targets = net.routes.entry(port_id(&path, &c.source)).or_default();
        targets.extend(c.targets.iter().map(|t| port_id(&path, t)));
    }
    if let Some(b) = ty.behavior() {
        let behavior = b.parsed.as_ref().ok_or_else(|| SimulationError::MissingBehavior { instance: path.join(".") })?;
        net.atomics.push(Atomic {
            path,
            component: q.clone(),
            ty,
            model: behavior,
            state: languages.initial_state(behavior),
        });
        return Ok(());
    }
    for (s, sub_ty) in model.subcomponents(q) {
        let mut p = path.clone();
        p.push(s.name.clone());
        build(model, languages, sub_ty, p, net)?;
    }
    Ok(())
}

fn check_stimulus(root: &ComponentType, stimulus: &Trace) -> Result<(), SimulationError> {
    for (tick, msgs) in stimulus.ticks.iter().enumerate() {
        for (port, v) in msgs {
            let decl = root
                .port(port)
                .filter(|p| p.direction == Direction::In)
                .ok_or_else(|| SimulationError::UnknownPort { tick, port: port.clone() })?;
            if v.data_type() != decl.ty {
                return Err(SimulationError::StimulusTypeError { tick, port: port.clone(), expected: decl.ty, found: v.clone() });
            }
        }
    }
    Ok(())
}

pub fn simulate(
    model: &SymbolTable,
    languages: &EmbeddingRegistry,
    root: &QName,
    stimulus: &Trace,
    ticks: usize,
) -> Result<Trace, SimulationError> {
    run(model, languages, root, stimulus, ticks, None)
}

/// Like [`simulate`], also returning every behavior step taken.
pub fn simulate_with_steps(
    model: &SymbolTable,
    languages: &EmbeddingRegistry,
    root: &QName,
    stimulus: &Trace,
    ticks: usize,
) -> Result<(Trace, Vec<StepRecord>), SimulationError> {
    let mut steps = Vec::new();
    let trace = run(model, languages, root, stimulus, ticks, Some(&mut steps))?;
    Ok((trace, steps))
}

fn run(
    model: &SymbolTable,
    languages: &EmbeddingRegistry,
    root: &QName,
    stimulus: &Trace,
    ticks: usize,
    mut log: Option<&mut Vec<StepRecord>>,
) -> Result<Trace, SimulationError> {
    let root_ty = model.component(root).ok_or_else(|| SimulationError::UnknownComponent(root.clone()))?;
    check_stimulus(root_ty, stimulus)?;
    let mut net = Network { atomics: Vec::new(), routes: BTreeMap::new() };
    build(model, languages, root, Vec::new(), &mut net)?;

    let mut in_flight: BTreeMap<PortId, Value> = BTreeMap::new();
    let mut out = Trace::default();
    for tick in 0..ticks {
        // Messages present on ports this tick: deliveries, stimulus, behavior outputs.
        let mut present = std::mem::take(&mut in_flight);
        for (port, v) in stimulus.at(tick).into_iter().flatten() {
            present.insert((Vec::new(), port.clone()), v.clone());
        }
        let mut emitted = Vec::new();
        for a in &mut net.atomics {
            let inputs: PortValues = a
                .ty
                .in_ports()
                .filter_map(|p| present.get(&(a.path.clone(), p.name.clone())).map(|v| (p.name.clone(), v.clone())))
                .collect();
            let (next, outputs) = languages.step(a.model, &a.state, &inputs);
            for (port, v) in &outputs {
                if a.ty.port(port).is_some_and(|p| p.direction == Direction::Out) {
                    emitted.push(((a.path.clone(), port.clone()), v.clone()));
                }
            }
            if let Some(log) = log.as_deref_mut() {
                log.push(StepRecord {
                    tick,
                    instance: a.path.join("."),
                    component: a.component.clone(),
                    state: a.state.clone(),
                    inputs,
                    next_state: next.clone(),
                    outputs,
                });
            }
            a.state = next;
        }
        present.extend(emitted);

        let observed: PortValues = root_ty
            .out_ports()
            .filter_map(|p| present.get(&(Vec::new(), p.name.clone())).map(|v| (p.name.clone(), v.clone())))
            .collect();
        out.ticks.push(observed);

        for (src, v) in &present {
            for target in net.routes.get(src).into_iter().flatten() {
                in_flight.insert(target.clone(), v.clone());
            }
        }
    }
    Ok(out)
}

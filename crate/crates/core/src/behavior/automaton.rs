//! Guarded I/O automata.
//!
//! ```text
//! body       := { statedecl } { transition }
//! statedecl  := "state" NAME [ "initial" ] ";"
//! transition := NAME "->" NAME "[" [ guard { "," guard } ] "]" "/" "[" [ action { "," action } ] "]" ";"
//! guard      := NAME "==" literal ;  action := NAME "=" literal
//! ```
//!
//! Each tick the first transition (in declaration order) leaving the current
//! state whose guards all match fires. An absent message never matches.

use std::collections::BTreeMap;

use crate::adl::{ComponentType, Direction};
use crate::behavior::{BehaviorLanguage, BehaviorModel, BehaviorState, BodyViolation, PortValues};
use crate::diag::Pos;
use crate::lexer::{Lexer, ParseError, Sym};
use crate::value::Value;

pub const DETERMINISTIC: &str = "automaton.deterministic";

#[derive(Debug, Clone, PartialEq)]
pub struct Automaton {
    pub states: Vec<StateDecl>,
    pub transitions: Vec<Transition>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StateDecl {
    pub name: String,
    pub initial: bool,
    pub pos: Pos,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Transition {
    pub from: String,
    pub to: String,
    pub guards: Vec<PortLiteral>,
    pub actions: Vec<PortLiteral>,
    pub pos: Pos,
}

/// `port == literal` in a guard, `port = literal` in an action.
#[derive(Debug, Clone, PartialEq)]
pub struct PortLiteral {
    pub port: String,
    pub value: Value,
    pub pos: Pos,
}

impl Automaton {
    /// The first state marked `initial`.
    pub fn initial(&self) -> Option<&str> {
        self.states.iter().find(|s| s.initial).map(|s| s.name.as_str())
    }

    /// Index of the transition that fires, if any.
    pub fn enabled(&self, current: &str, inputs: &PortValues) -> Option<usize> {
        self.transitions
            .iter()
            .position(|t| t.from == current && t.guards.iter().all(|g| inputs.get(&g.port) == Some(&g.value)))
    }

    /// Pairs `(i, j)`, `i < j`, of transitions leaving the same state that some
    /// input valuation enables together.
    pub fn overlapping_transitions(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (i, a) in self.transitions.iter().enumerate() {
            for (j, b) in self.transitions.iter().enumerate().skip(i + 1) {
                if a.from == b.from && guards_compatible(&a.guards, &b.guards) {
                    out.push((i, j));
                }
            }
        }
        out
    }
}

fn guard_map(guards: &[PortLiteral]) -> Option<BTreeMap<&str, &Value>> {
    let mut m = BTreeMap::new();
    for g in guards {
        if let Some(prev) = m.insert(g.port.as_str(), &g.value) {
            if prev != &g.value {
                return None;
            }
        }
    }
    Some(m)
}

/// Both conjunctions are satisfiable and agree on every shared port.
fn guards_compatible(a: &[PortLiteral], b: &[PortLiteral]) -> bool {
    let (Some(ma), Some(mb)) = (guard_map(a), guard_map(b)) else {
        return false;
    };
    ma.iter().all(|(port, v)| mb.get(port).is_none_or(|w| w == v))
}

/// Fires at most one transition. Returns the next state and the outputs.
pub fn step_automaton(a: &Automaton, current: &str, inputs: &PortValues) -> (String, PortValues) {
    match a.enabled(current, inputs) {
        Some(i) => {
            let t = &a.transitions[i];
            let outputs = t.actions.iter().map(|act| (act.port.clone(), act.value.clone())).collect();
            (t.to.clone(), outputs)
        }
        None => (current.to_string(), PortValues::new()),
    }
}

pub fn parse_automaton(body: &str) -> Result<Automaton, ParseError> {
    let mut lx = Lexer::new(body);
    let mut states = Vec::new();
    while lx.at_keyword("state")? {
        lx.next_token()?;
        let (name, pos) = lx.expect_ident("state name")?;
        let initial = lx.eat_keyword("initial")?;
        lx.expect_sym(Sym::Semi)?;
        states.push(StateDecl { name, initial, pos });
    }
    let mut transitions = Vec::new();
    while !lx.at_eof()? {
        let (from, pos) = lx.expect_ident("state name or end of automaton")?;
        lx.expect_sym(Sym::Arrow)?;
        let (to, _) = lx.expect_ident("target state")?;
        let guards = parse_literal_list(&mut lx, Sym::EqEq)?;
        lx.expect_sym(Sym::Slash)?;
        let actions = parse_literal_list(&mut lx, Sym::Eq)?;
        lx.expect_sym(Sym::Semi)?;
        transitions.push(Transition { from, to, guards, actions, pos });
    }
    Ok(Automaton { states, transitions })
}

fn parse_literal_list(lx: &mut Lexer<'_>, op: Sym) -> Result<Vec<PortLiteral>, ParseError> {
    lx.expect_sym(Sym::LBracket)?;
    let mut items = Vec::new();
    if lx.eat_sym(Sym::RBracket)? {
        return Ok(items);
    }
    loop {
        let (port, pos) = lx.expect_ident("port name")?;
        lx.expect_sym(op)?;
        let (value, _) = lx.expect_literal()?;
        items.push(PortLiteral { port, value, pos });
        if !lx.eat_sym(Sym::Comma)? {
            lx.expect_sym(Sym::RBracket)?;
            return Ok(items);
        }
    }
}

/// A1 to A4.
pub fn check_automaton(a: &Automaton, host: &ComponentType) -> Vec<BodyViolation> {
    let mut out = Vec::new();
    let initials: Vec<&StateDecl> = a.states.iter().filter(|s| s.initial).collect();
    match initials.as_slice() {
        [_] => {}
        [] => out.push(BodyViolation::new("A1", "automaton has no initial state", Pos::new(1, 1))),
        [_, rest @ ..] => {
            for s in rest {
                out.push(BodyViolation::new("A1", format!("second initial state `{}`", s.name), s.pos));
            }
        }
    }
    let mut declared = std::collections::BTreeSet::new();
    for s in &a.states {
        if !declared.insert(s.name.as_str()) {
            out.push(BodyViolation::new("A2", format!("state `{}` declared twice", s.name), s.pos));
        }
    }
    for t in &a.transitions {
        for s in [&t.from, &t.to] {
            if !declared.contains(s.as_str()) {
                out.push(BodyViolation::new("A2", format!("undeclared state `{s}`"), t.pos));
            }
        }
        for g in &t.guards {
            match host.port(&g.port) {
                Some(p) if p.direction == Direction::In && p.ty == g.value.data_type() => {}
                Some(p) if p.direction == Direction::In => out.push(BodyViolation::new(
                    "A3",
                    format!("guard literal {} does not match {} port `{}`", g.value, p.ty, g.port),
                    g.pos,
                )),
                _ => out.push(BodyViolation::new("A3", format!("guard port `{}` is not an in-port of `{}`", g.port, host.name), g.pos)),
            }
        }
        for act in &t.actions {
            match host.port(&act.port) {
                Some(p) if p.direction == Direction::Out && p.ty == act.value.data_type() => {}
                Some(p) if p.direction == Direction::Out => out.push(BodyViolation::new(
                    "A4",
                    format!("action literal {} does not match {} port `{}`", act.value, p.ty, act.port),
                    act.pos,
                )),
                _ => out.push(BodyViolation::new("A4", format!("action port `{}` is not an out-port of `{}`", act.port, host.name), act.pos)),
            }
        }
    }
    out
}

pub fn check_deterministic(a: &Automaton) -> Vec<BodyViolation> {
    a.overlapping_transitions()
        .into_iter()
        .map(|(i, j)| {
            let (ti, tj) = (&a.transitions[i], &a.transitions[j]);
            BodyViolation::new(
                DETERMINISTIC,
                format!(
                    "in state `{}` transitions #{} (-> {}) and #{} (-> {}) can be enabled together",
                    ti.from,
                    i + 1,
                    ti.to,
                    j + 1,
                    tj.to
                ),
                tj.pos,
            )
        })
        .collect()
}

pub struct AutomatonLanguage;

impl BehaviorLanguage for AutomatonLanguage {
    fn id(&self) -> &str {
        "automaton"
    }

    fn aliases(&self) -> Vec<String> {
        vec!["ioautomaton".to_string()]
    }

    fn parse(&self, body: &str) -> Result<BehaviorModel, ParseError> {
        parse_automaton(body).map(BehaviorModel::Automaton)
    }

    fn check(&self, model: &BehaviorModel, host: &ComponentType) -> Vec<BodyViolation> {
        model.as_automaton().map(|a| check_automaton(a, host)).unwrap_or_default()
    }

    fn constraint_sets(&self) -> Vec<String> {
        vec![DETERMINISTIC.to_string()]
    }

    fn check_constraint(&self, set: &str, model: &BehaviorModel, _host: &ComponentType) -> Vec<BodyViolation> {
        match (set, model.as_automaton()) {
            (DETERMINISTIC, Some(a)) => check_deterministic(a),
            _ => Vec::new(),
        }
    }

    fn initial_state(&self, model: &BehaviorModel) -> BehaviorState {
        let current = model.as_automaton().and_then(Automaton::initial).unwrap_or_default().to_string();
        BehaviorState::Automaton { current }
    }

    fn step(&self, model: &BehaviorModel, state: &BehaviorState, inputs: &PortValues) -> (BehaviorState, PortValues) {
        match (model.as_automaton(), state) {
            (Some(a), BehaviorState::Automaton { current }) => {
                let (current, outputs) = step_automaton(a, current, inputs);
                (BehaviorState::Automaton { current }, outputs)
            }
            _ => (state.clone(), PortValues::new()),
        }
    }
}

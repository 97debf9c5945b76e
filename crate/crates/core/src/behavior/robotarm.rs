//! RobotArm programs: named command sequences triggered by a token on the
//! host's `cmd` port and executed one command per tick.
//!
//! ```text
//! body     := { "location" NAME ";" } { program }
//! program  := "program" NAME "{" { command } "}"
//! command  := "moveTo" NAME ";" | "grip" ("open"|"close") ";" | "wait" INT ";"
//! ```

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::adl::{ComponentType, Direction};
use crate::behavior::{BehaviorLanguage, BehaviorModel, BehaviorState, BodyViolation, PortValues};
use crate::diag::Pos;
use crate::lexer::{Lexer, ParseError, Sym, Tok};
use crate::value::{DataType, Value};

pub const COMMAND_PORT: &str = "cmd";
pub const ACTION_PORT: &str = "act";

#[derive(Debug, Clone, PartialEq)]
pub struct RaProgramSet {
    pub locations: Vec<Location>,
    pub programs: Vec<RaProgram>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Location {
    pub name: String,
    pub pos: Pos,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RaProgram {
    pub name: String,
    pub commands: Vec<RaCommand>,
    pub pos: Pos,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RaCommand {
    pub kind: RaCommandKind,
    pub pos: Pos,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RaCommandKind {
    MoveTo(String),
    Grip(Grip),
    /// At least one tick.
    Wait(u32),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Grip {
    Open,
    Close,
}

impl Grip {
    pub fn keyword(self) -> &'static str {
        match self {
            Grip::Open => "open",
            Grip::Close => "close",
        }
    }
}

impl RaCommandKind {
    /// Message written to `act` when the command executes; `None` for `wait`.
    pub fn message(&self) -> Option<String> {
        match self {
            RaCommandKind::MoveTo(l) => Some(format!("MOVE:{l}")),
            RaCommandKind::Grip(Grip::Open) => Some("GRIP:OPEN".to_string()),
            RaCommandKind::Grip(Grip::Close) => Some("GRIP:CLOSE".to_string()),
            RaCommandKind::Wait(_) => None,
        }
    }

    /// Ticks the command occupies.
    pub fn duration(&self) -> u32 {
        match self {
            RaCommandKind::Wait(n) => *n,
            _ => 1,
        }
    }
}

impl RaProgramSet {
    /// First program with that name.
    pub fn program(&self, name: &str) -> Option<&RaProgram> {
        self.programs.iter().find(|p| p.name == name)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum RaMode {
    Idle,
    /// `pc` indexes the next command to execute. `wait_remaining` counts the
    /// ticks still to spend in a `wait` that has already started.
    Running { program: String, pc: usize, wait_remaining: u32 },
}

/// Executes one tick. Tokens arriving while a program runs are dropped.
pub fn step_ra(p: &RaProgramSet, mode: &RaMode, inputs: &PortValues) -> (RaMode, PortValues) {
    let (program, pc, wait_remaining) = match mode {
        RaMode::Running { program, pc, wait_remaining } => (program.clone(), *pc, *wait_remaining),
        RaMode::Idle => match inputs.get(COMMAND_PORT).and_then(Value::as_str).and_then(|t| p.program(t)) {
            Some(prog) => (prog.name.clone(), 0, 0),
            None => return (RaMode::Idle, PortValues::new()),
        },
    };
    let Some(prog) = p.program(&program) else {
        return (RaMode::Idle, PortValues::new());
    };
    let Some(cmd) = prog.commands.get(pc) else {
        return (RaMode::Idle, PortValues::new());
    };
    let mut outputs = PortValues::new();
    let (next_pc, remaining) = match &cmd.kind {
        RaCommandKind::Wait(n) => {
            let left = if wait_remaining == 0 { n.saturating_sub(1) } else { wait_remaining - 1 };
            if left == 0 {
                (pc + 1, 0)
            } else {
                (pc, left)
            }
        }
        kind => {
            outputs.insert(ACTION_PORT.to_string(), Value::Str(kind.message().expect("non-wait command")));
            (pc + 1, 0)
        }
    };
    let next = if next_pc >= prog.commands.len() {
        RaMode::Idle
    } else {
        RaMode::Running { program, pc: next_pc, wait_remaining: remaining }
    };
    (next, outputs)
}

pub fn parse_robot_arm(body: &str) -> Result<RaProgramSet, ParseError> {
    let mut lx = Lexer::new(body);
    let mut locations = Vec::new();
    while lx.eat_keyword("location")? {
        let (name, pos) = lx.expect_ident("location name")?;
        lx.expect_sym(Sym::Semi)?;
        locations.push(Location { name, pos });
    }
    let mut programs = Vec::new();
    while !lx.at_eof()? {
        lx.expect_keyword("program")?;
        let (name, pos) = lx.expect_ident("program name")?;
        lx.expect_sym(Sym::LBrace)?;
        let mut commands = Vec::new();
        while !lx.eat_sym(Sym::RBrace)? {
            commands.push(parse_command(&mut lx)?);
        }
        programs.push(RaProgram { name, commands, pos });
    }
    Ok(RaProgramSet { locations, programs })
}

fn parse_command(lx: &mut Lexer<'_>) -> Result<RaCommand, ParseError> {
    let t = lx.next_token()?;
    let kind = match &t.tok {
        Tok::Ident(k) if k == "moveTo" => RaCommandKind::MoveTo(lx.expect_ident("location name")?.0),
        Tok::Ident(k) if k == "grip" => {
            let g = lx.next_token()?;
            match &g.tok {
                Tok::Ident(s) if s == "open" => RaCommandKind::Grip(Grip::Open),
                Tok::Ident(s) if s == "close" => RaCommandKind::Grip(Grip::Close),
                other => return Err(ParseError::new(g.pos, "`open` or `close`", other.to_string())),
            }
        }
        Tok::Ident(k) if k == "wait" => {
            let (n, pos) = lx.expect_int("tick count")?;
            let n = u32::try_from(n)
                .ok()
                .filter(|&n| n >= 1)
                .ok_or_else(|| ParseError::new(pos, "positive tick count", format!("`{n}`")))?;
            RaCommandKind::Wait(n)
        }
        other => return Err(ParseError::new(t.pos, "`moveTo`, `grip`, `wait` or `}`", other.to_string())),
    };
    lx.expect_sym(Sym::Semi)?;
    Ok(RaCommand { kind, pos: t.pos })
}

/// R1 unique program names, R2 declared moveTo targets, R3 host interface.
pub fn check_robot_arm(p: &RaProgramSet, host: &ComponentType) -> Vec<BodyViolation> {
    let mut out = Vec::new();
    let mut names = BTreeSet::new();
    for prog in &p.programs {
        if !names.insert(prog.name.as_str()) {
            out.push(BodyViolation::new("R1", format!("program `{}` defined twice", prog.name), prog.pos));
        }
    }
    let locations: BTreeSet<&str> = p.locations.iter().map(|l| l.name.as_str()).collect();
    for prog in &p.programs {
        for c in &prog.commands {
            if let RaCommandKind::MoveTo(l) = &c.kind {
                if !locations.contains(l.as_str()) {
                    out.push(BodyViolation::new("R2", format!("undeclared location `{l}`"), c.pos));
                }
            }
        }
    }
    let ins: Vec<_> = host.in_ports().collect();
    let outs: Vec<_> = host.out_ports().collect();
    let ok = |ports: &[&crate::adl::PortDecl], name: &str, dir: Direction| {
        matches!(ports, [p] if p.name == name && p.ty == DataType::String && p.direction == dir)
    };
    if !ok(&ins, COMMAND_PORT, Direction::In) || !ok(&outs, ACTION_PORT, Direction::Out) {
        out.push(BodyViolation::new(
            "R3",
            format!("robot arm host `{}` must have exactly `in String {COMMAND_PORT}` and `out String {ACTION_PORT}`", host.name),
            Pos::new(1, 1),
        ));
    }
    out
}

pub struct RobotArmLanguage;

impl BehaviorLanguage for RobotArmLanguage {
    fn id(&self) -> &str {
        "robotarm"
    }

    fn parse(&self, body: &str) -> Result<BehaviorModel, ParseError> {
        parse_robot_arm(body).map(BehaviorModel::RobotArm)
    }

    fn check(&self, model: &BehaviorModel, host: &ComponentType) -> Vec<BodyViolation> {
        model.as_robot_arm().map(|p| check_robot_arm(p, host)).unwrap_or_default()
    }

    fn initial_state(&self, _model: &BehaviorModel) -> BehaviorState {
        BehaviorState::RobotArm(RaMode::Idle)
    }

    fn step(&self, model: &BehaviorModel, state: &BehaviorState, inputs: &PortValues) -> (BehaviorState, PortValues) {
        match (model.as_robot_arm(), state) {
            (Some(p), BehaviorState::RobotArm(mode)) => {
                let (mode, out) = step_ra(p, mode, inputs);
                (BehaviorState::RobotArm(mode), out)
            }
            _ => (state.clone(), PortValues::new()),
        }
    }
}

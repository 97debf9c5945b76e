//! Context conditions of the architecture language.
//!
//! | id  | condition |
//! |-----|-----------|
//! | CC1 | component type names unique per package |
//! | CC2 | port and instance names unique within a component |
//! | CC3 | connector endpoints resolve and have legal directions |
//! | CC4 | connected ports have identical types |
//! | CC5 | every subcomponent in-port and composed out-port has exactly one incoming connector |
//! | CC6 | atomic components have exactly one behavior |
//! | CC7 | composed components have no behavior |
//! | CC8 | behavior languages are registered |

use std::collections::{BTreeMap, BTreeSet};

use crate::adl::ast::*;
use crate::adl::symbols::SymbolTable;
use crate::behavior::EmbeddingRegistry;
use crate::diag::{Location, Pos, Violation};
use crate::value::{DataType, QName};

pub fn check_context_conditions(table: &SymbolTable, languages: &EmbeddingRegistry) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut seen: BTreeSet<QName> = BTreeSet::new();
    for unit in table.units() {
        let q = unit.qualified_name();
        let at = |pos: Pos| Location::new(&unit.source_path, pos);
        if !seen.insert(q.clone()) {
            out.push(Violation::new("CC1", format!("component type `{q}` declared more than once"), at(unit.component.pos)));
            // Later duplicates are not bound in the table; checking their
            // bodies against the first declaration would be misleading.
            continue;
        }
        check_component(table, unit, &q, languages, &mut out);
    }
    out
}

struct Endpoint {
    direction: Direction,
    ty: DataType,
    /// True for a port of the enclosing component.
    own: bool,
}

fn check_component(
    table: &SymbolTable,
    unit: &CompilationUnit,
    q: &QName,
    languages: &EmbeddingRegistry,
    out: &mut Vec<Violation>,
) {
    let c = &unit.component;
    let at = |pos: Pos| Location::new(&unit.source_path, pos);

    // CC2
    let mut names: BTreeSet<&str> = BTreeSet::new();
    for p in &c.ports {
        if !names.insert(&p.name) {
            out.push(Violation::new("CC2", format!("duplicate port name `{}`", p.name), at(p.pos)));
        }
    }
    for s in &c.subcomponents {
        if !names.insert(&s.name) {
            out.push(Violation::new("CC2", format!("instance name `{}` clashes with another port or instance", s.name), at(s.pos)));
        }
    }

    // CC6 / CC7 / CC8
    if c.is_atomic() {
        if c.behaviors.len() != 1 {
            out.push(Violation::new(
                "CC6",
                format!("atomic component `{}` must embed exactly one behavior, found {}", c.name, c.behaviors.len()),
                at(c.behaviors.get(1).map_or(c.pos, |b| b.pos)),
            ));
        }
    } else {
        for b in &c.behaviors {
            out.push(Violation::new("CC7", format!("composed component `{}` must not embed a behavior", c.name), at(b.pos)));
        }
    }
    for b in &c.behaviors {
        if !languages.is_registered(&b.language) {
            out.push(Violation::new("CC8", format!("behavior language `{}` is not registered", b.language), at(b.pos)));
        }
    }

    // CC3 / CC4 / CC5
    let resolve = |r: &PortRef| -> Result<Endpoint, String> {
        match &r.instance {
            None => c
                .port(&r.port)
                .map(|p| Endpoint { direction: p.direction, ty: p.ty, own: true })
                .ok_or_else(|| format!("`{}` is not a port of `{}`", r.port, c.name)),
            Some(inst) => {
                let ty = table
                    .instance_type(q, inst)
                    .ok_or_else(|| format!("`{inst}` is not a subcomponent of `{}`", c.name))?;
                let sub = table.component(ty).ok_or_else(|| format!("type of `{inst}` is unresolved"))?;
                sub.port(&r.port)
                    .map(|p| Endpoint { direction: p.direction, ty: p.ty, own: false })
                    .ok_or_else(|| format!("`{}` is not a port of `{ty}`", r.port))
            }
        }
    };

    let mut incoming: BTreeMap<(Option<&str>, &str), usize> = BTreeMap::new();
    for con in &c.connectors {
        let source = match resolve(&con.source) {
            Ok(e) => {
                let legal = if e.own { e.direction == Direction::In } else { e.direction == Direction::Out };
                if !legal {
                    out.push(Violation::new(
                        "CC3",
                        format!("connector source `{}` must be an own in-port or a subcomponent out-port", con.source),
                        at(con.source.pos),
                    ));
                }
                Some(e)
            }
            Err(msg) => {
                out.push(Violation::new("CC3", msg, at(con.source.pos)));
                None
            }
        };
        for t in &con.targets {
            match resolve(t) {
                Ok(e) => {
                    let legal = if e.own { e.direction == Direction::Out } else { e.direction == Direction::In };
                    if !legal {
                        out.push(Violation::new(
                            "CC3",
                            format!("connector target `{t}` must be an own out-port or a subcomponent in-port"),
                            at(t.pos),
                        ));
                    } else if e.own && source.as_ref().is_some_and(|s| s.own) {
                        out.push(Violation::new(
                            "CC3",
                            format!("pass-through connector `{}` -> `{t}` is not allowed", con.source),
                            at(t.pos),
                        ));
                    }
                    if let Some(s) = &source {
                        if s.ty != e.ty {
                            out.push(Violation::new(
                                "CC4",
                                format!("type mismatch: `{}` is {} but `{t}` is {}", con.source, s.ty, e.ty),
                                at(t.pos),
                            ));
                        }
                    }
                    if legal {
                        *incoming.entry((t.instance.as_deref(), t.port.as_str())).or_default() += 1;
                    }
                }
                Err(msg) => out.push(Violation::new("CC3", msg, at(t.pos))),
            }
        }
    }

    if !c.is_atomic() {
        let mut expect_one = |inst: Option<&str>, port: &str, what: String, pos: Pos| {
            let n = incoming.get(&(inst, port)).copied().unwrap_or(0);
            if n != 1 {
                out.push(Violation::new("CC5", format!("{what} has {n} incoming connectors, expected exactly 1"), at(pos)));
            }
        };
        for p in c.out_ports() {
            expect_one(None, &p.name, format!("out-port `{}`", p.name), p.pos);
        }
        for (s, ty) in table.subcomponents(q) {
            let Some(sub) = table.component(ty) else { continue };
            for p in sub.in_ports() {
                expect_one(Some(&s.name), &p.name, format!("in-port `{}.{}`", s.name, p.name), s.pos);
            }
        }
    }
}

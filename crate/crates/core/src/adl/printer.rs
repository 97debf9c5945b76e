use std::fmt::Write;

use crate::adl::ast::*;

/// Canonical text of a compilation unit; `parse_architecture` of the result
/// yields a structurally equal unit.
pub fn print_unit(u: &CompilationUnit) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "package {};", u.package);
    if !u.imports.is_empty() {
        out.push('\n');
        for i in &u.imports {
            let _ = writeln!(out, "import {};", i.name);
        }
    }
    out.push('\n');
    let c = &u.component;
    let _ = writeln!(out, "component {} {{", c.name);
    for p in &c.ports {
        let _ = writeln!(out, "  port {} {} {};", p.direction.keyword(), p.ty, p.name);
    }
    for s in &c.subcomponents {
        let _ = writeln!(out, "  instance {} {};", s.type_ref, s.name);
    }
    for con in &c.connectors {
        let targets: Vec<String> = con.targets.iter().map(ToString::to_string).collect();
        let _ = writeln!(out, "  connect {} -> {};", con.source, targets.join(", "));
    }
    for b in &c.behaviors {
        let _ = writeln!(out, "  behavior {} {{{}}}", b.language, b.raw_body);
    }
    out.push_str("}\n");
    out
}

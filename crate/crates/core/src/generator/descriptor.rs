use std::collections::BTreeSet;
use std::fmt::{self, Write};

use thiserror::Error;

use crate::diag::Pos;
use crate::generator::registry::GeneratorRegistry;
use crate::lexer::{Lexer, ParseError, Sym, Tok};
use crate::value::QName;

pub const DEFAULT_OUTPUT: &str = "python.source";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GeneratorKind {
    Component,
    Behavior,
    Factory,
}

impl GeneratorKind {
    /// Interface name a descriptor declares for this kind. All three extend
    /// the base `IGenerator` contract.
    pub fn interface_name(self) -> &'static str {
        match self {
            GeneratorKind::Component => "IComponentGenerator",
            GeneratorKind::Behavior => "IBehaviorGenerator",
            GeneratorKind::Factory => "IFactoryGenerator",
        }
    }

    pub fn from_interface(interface: &QName) -> Option<Self> {
        match interface.last() {
            "IComponentGenerator" => Some(GeneratorKind::Component),
            "IBehaviorGenerator" => Some(GeneratorKind::Behavior),
            "IFactoryGenerator" => Some(GeneratorKind::Factory),
            _ => None,
        }
    }
}

impl fmt::Display for GeneratorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GeneratorKind::Component => "component",
            GeneratorKind::Behavior => "behavior",
            GeneratorKind::Factory => "factory",
        })
    }
}

/// The machine-readable interface of one generator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorDescriptor {
    pub name: String,
    pub interface: QName,
    /// Main template, the generator's entry point.
    pub template: QName,
    /// AST type the generator processes (`ast` clause).
    pub ast: Option<QName>,
    /// Runtime environment the generated code depends on.
    pub runtime: QName,
    pub provides: BTreeSet<String>,
    pub requires: BTreeSet<String>,
    /// Language and format of the output.
    pub output: QName,
    /// Generator-specific context conditions on the input models.
    pub constraints: BTreeSet<String>,
}

impl GeneratorDescriptor {
    pub fn kind(&self) -> Option<GeneratorKind> {
        GeneratorKind::from_interface(&self.interface)
    }

    /// Language id handled by a behavior generator: the lowercased first
    /// segment of the `ast` type (`robotarm.ASTRobotArmProgram` → `robotarm`).
    pub fn handled_language(&self) -> Option<String> {
        self.ast.as_ref().map(|a| a.first().to_lowercase())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DescriptorError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("{}: duplicate `{clause}` clause", pos)]
    DuplicateClause { clause: String, pos: Pos },
    #[error("generator `{generator}` lacks the required `{clause}` clause")]
    MissingClause { generator: String, clause: &'static str },
}

pub fn parse_generator_descriptor(source: &str) -> Result<GeneratorDescriptor, DescriptorError> {
    let mut lx = Lexer::new(source);
    lx.expect_keyword("generator")?;
    let (name, _) = lx.expect_ident("generator name")?;
    lx.expect_sym(Sym::LBrace)?;

    let mut interface = None;
    let mut template = None;
    let mut ast = None;
    let mut runtime = None;
    let mut provides = None;
    let mut requires = None;
    let mut output = None;
    let mut constraints = None;

    fn set<T>(slot: &mut Option<T>, v: T, clause: &str, pos: Pos) -> Result<(), DescriptorError> {
        if slot.is_some() {
            return Err(DescriptorError::DuplicateClause { clause: clause.to_string(), pos });
        }
        *slot = Some(v);
        Ok(())
    }

    loop {
        let t = lx.next_token()?;
        let clause = match &t.tok {
            Tok::Sym(Sym::RBrace) => break,
            Tok::Ident(c) => c.clone(),
            other => return Err(ParseError::new(t.pos, "clause or `}`", other.to_string()).into()),
        };
        match clause.as_str() {
            "interface" => set(&mut interface, lx.expect_qname("interface name")?.0, &clause, t.pos)?,
            "template" => set(&mut template, lx.expect_qname("template name")?.0, &clause, t.pos)?,
            "ast" => set(&mut ast, lx.expect_qname("AST type")?.0, &clause, t.pos)?,
            "runtime" => set(&mut runtime, lx.expect_qname("runtime id")?.0, &clause, t.pos)?,
            "output" => set(&mut output, lx.expect_qname("output representation")?.0, &clause, t.pos)?,
            "provides" => set(&mut provides, name_list(&mut lx)?, &clause, t.pos)?,
            "requires" => set(&mut requires, name_list(&mut lx)?, &clause, t.pos)?,
            "constraints" => set(&mut constraints, name_list(&mut lx)?, &clause, t.pos)?,
            _ => {
                return Err(ParseError::new(
                    t.pos,
                    "`interface`, `template`, `ast`, `runtime`, `provides`, `requires`, `output` or `constraints`",
                    t.tok.to_string(),
                )
                .into())
            }
        }
        lx.expect_sym(Sym::Semi)?;
    }
    lx.expect_eof()?;

    let missing = |clause| DescriptorError::MissingClause { generator: name.clone(), clause };
    Ok(GeneratorDescriptor {
        interface: interface.ok_or_else(|| missing("interface"))?,
        template: template.ok_or_else(|| missing("template"))?,
        runtime: runtime.ok_or_else(|| missing("runtime"))?,
        ast,
        provides: provides.unwrap_or_default(),
        requires: requires.unwrap_or_default(),
        output: output.unwrap_or_else(|| QName::new(DEFAULT_OUTPUT)),
        constraints: constraints.unwrap_or_default(),
        name,
    })
}

fn name_list(lx: &mut Lexer<'_>) -> Result<BTreeSet<String>, ParseError> {
    let mut out = BTreeSet::new();
    loop {
        out.insert(lx.expect_qname("name")?.0.to_string());
        if !lx.eat_sym(Sym::Comma)? {
            return Ok(out);
        }
    }
}

pub fn print_generator_descriptor(d: &GeneratorDescriptor) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "generator {} {{", d.name);
    let _ = writeln!(s, "  interface {};", d.interface);
    let _ = writeln!(s, "  template {};", d.template);
    if let Some(a) = &d.ast {
        let _ = writeln!(s, "  ast {a};");
    }
    let _ = writeln!(s, "  runtime {};", d.runtime);
    let list = |set: &BTreeSet<String>| set.iter().cloned().collect::<Vec<_>>().join(", ");
    if !d.provides.is_empty() {
        let _ = writeln!(s, "  provides {};", list(&d.provides));
    }
    if !d.requires.is_empty() {
        let _ = writeln!(s, "  requires {};", list(&d.requires));
    }
    if d.output.as_str() != DEFAULT_OUTPUT {
        let _ = writeln!(s, "  output {};", d.output);
    }
    if !d.constraints.is_empty() {
        let _ = writeln!(s, "  constraints {};", list(&d.constraints));
    }
    s.push_str("}\n");
    s
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DescriptorViolation {
    #[error("generator `{generator}`: unknown interface `{interface}`")]
    UnknownInterface { generator: String, interface: QName },
    #[error("generator `{generator}`: behavior generators must name the handled language with an `ast` clause")]
    MissingHandledLanguage { generator: String },
    #[error("generator `{generator}`: only behavior generators take an `ast` clause")]
    UnexpectedAst { generator: String },
    #[error("generator `{generator}`: keys both provided and required: {}", keys.join(", "))]
    ProvidesRequiresOverlap { generator: String, keys: Vec<String> },
    #[error("generator `{generator}`: template `{template}` not found")]
    UnknownTemplate { generator: String, template: QName },
    #[error("generator `{generator}`: constraint set `{set}` is not known to any behavior language")]
    UnknownConstraintSet { generator: String, set: String },
}

/// Checks a descriptor's invariants against the registry's template store
/// and behavior languages.
pub fn validate_descriptor(d: &GeneratorDescriptor, registry: &GeneratorRegistry) -> Vec<DescriptorViolation> {
    let generator = d.name.clone();
    let mut out = Vec::new();
    match d.kind() {
        None => out.push(DescriptorViolation::UnknownInterface { generator: generator.clone(), interface: d.interface.clone() }),
        Some(GeneratorKind::Behavior) if d.ast.is_none() => {
            out.push(DescriptorViolation::MissingHandledLanguage { generator: generator.clone() })
        }
        Some(GeneratorKind::Component | GeneratorKind::Factory) if d.ast.is_some() => {
            out.push(DescriptorViolation::UnexpectedAst { generator: generator.clone() })
        }
        Some(_) => {}
    }
    let overlap: Vec<String> = d.provides.intersection(&d.requires).cloned().collect();
    if !overlap.is_empty() {
        out.push(DescriptorViolation::ProvidesRequiresOverlap { generator: generator.clone(), keys: overlap });
    }
    if !registry.templates().contains(&d.template) {
        out.push(DescriptorViolation::UnknownTemplate { generator: generator.clone(), template: d.template.clone() });
    }
    for set in &d.constraints {
        if !registry.languages().knows_constraint_set(set) {
            out.push(DescriptorViolation::UnknownConstraintSet { generator: generator.clone(), set: set.clone() });
        }
    }
    out
}

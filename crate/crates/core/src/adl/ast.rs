use std::path::PathBuf;

use crate::behavior::BehaviorModel;
use crate::diag::Pos;
use crate::value::{DataType, QName};

#[derive(Debug, Clone, PartialEq)]
pub struct CompilationUnit {
    pub package: QName,
    pub package_pos: Pos,
    pub imports: Vec<Import>,
    pub component: ComponentType,
    pub source_path: PathBuf,
}

impl CompilationUnit {
    /// Fully qualified name of the unit's component.
    pub fn qualified_name(&self) -> QName {
        self.package.child(&self.component.name)
    }

    /// Zeroes every source position, for structural comparisons.
    pub fn without_positions(&self) -> Self {
        let mut u = self.clone();
        u.package_pos = Pos::default();
        for i in &mut u.imports {
            i.pos = Pos::default();
        }
        let c = &mut u.component;
        c.pos = Pos::default();
        for p in &mut c.ports {
            p.pos = Pos::default();
        }
        for s in &mut c.subcomponents {
            s.pos = Pos::default();
        }
        for con in &mut c.connectors {
            con.pos = Pos::default();
            con.source.pos = Pos::default();
            for t in &mut con.targets {
                t.pos = Pos::default();
            }
        }
        for b in &mut c.behaviors {
            b.pos = Pos::default();
            b.body_pos = Pos::default();
        }
        u
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Import {
    pub name: QName,
    pub pos: Pos,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComponentType {
    pub name: String,
    pub pos: Pos,
    pub ports: Vec<PortDecl>,
    pub subcomponents: Vec<SubcomponentInstance>,
    pub connectors: Vec<ConnectorDecl>,
    /// Well-formed atomic components carry exactly one entry (CC6), composed
    /// ones none (CC7). The parser accepts any number so that the checker
    /// can report them.
    pub behaviors: Vec<BehaviorEmbedding>,
}

impl ComponentType {
    pub fn is_atomic(&self) -> bool {
        self.subcomponents.is_empty()
    }

    pub fn behavior(&self) -> Option<&BehaviorEmbedding> {
        self.behaviors.first()
    }

    pub fn port(&self, name: &str) -> Option<&PortDecl> {
        self.ports.iter().find(|p| p.name == name)
    }

    pub fn subcomponent(&self, name: &str) -> Option<&SubcomponentInstance> {
        self.subcomponents.iter().find(|s| s.name == name)
    }

    pub fn in_ports(&self) -> impl Iterator<Item = &PortDecl> {
        self.ports.iter().filter(|p| p.direction == Direction::In)
    }

    pub fn out_ports(&self) -> impl Iterator<Item = &PortDecl> {
        self.ports.iter().filter(|p| p.direction == Direction::Out)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    In,
    Out,
}

impl Direction {
    pub fn keyword(self) -> &'static str {
        match self {
            Direction::In => "in",
            Direction::Out => "out",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PortDecl {
    pub direction: Direction,
    pub ty: DataType,
    pub name: String,
    pub pos: Pos,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SubcomponentInstance {
    pub type_ref: QName,
    pub name: String,
    pub pos: Pos,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConnectorDecl {
    pub source: PortRef,
    pub targets: Vec<PortRef>,
    pub pos: Pos,
}

/// `port` names a port of the enclosing component, `inst.port` a port of a
/// subcomponent instance.
#[derive(Debug, Clone, PartialEq)]
pub struct PortRef {
    pub instance: Option<String>,
    pub port: String,
    pub pos: Pos,
}

impl std::fmt::Display for PortRef {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match &self.instance {
            Some(i) => write!(f, "{i}.{}", self.port),
            None => f.write_str(&self.port),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BehaviorEmbedding {
    pub language: String,
    /// Text between the braces, verbatim.
    pub raw_body: String,
    pub pos: Pos,
    /// Position of the first character of `raw_body`.
    pub body_pos: Pos,
    pub parsed: Option<BehaviorModel>,
}

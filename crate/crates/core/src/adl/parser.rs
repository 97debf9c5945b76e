use std::path::Path;

use crate::adl::ast::*;
use crate::lexer::{Lexer, ParseError, Sym, Tok};
use crate::value::DataType;

/// Parses one `.arc` compilation unit.
pub fn parse_architecture(source: &str, path: impl AsRef<Path>) -> Result<CompilationUnit, ParseError> {
    let mut lx = Lexer::new(source);
    let package_pos = lx.expect_keyword("package")?;
    let (package, _) = lx.expect_qname("package name")?;
    lx.expect_sym(Sym::Semi)?;
    let mut imports = Vec::new();
    while lx.at_keyword("import")? {
        let pos = lx.next_token()?.pos;
        let (name, _) = lx.expect_qname("import name")?;
        lx.expect_sym(Sym::Semi)?;
        imports.push(Import { name, pos });
    }
    let component = parse_component(&mut lx)?;
    lx.expect_eof()?;
    Ok(CompilationUnit { package, package_pos, imports, component, source_path: path.as_ref().to_path_buf() })
}

fn parse_component(lx: &mut Lexer<'_>) -> Result<ComponentType, ParseError> {
    lx.expect_keyword("component")?;
    let (name, pos) = lx.expect_ident("component name")?;
    lx.expect_sym(Sym::LBrace)?;
    let mut c = ComponentType {
        name,
        pos,
        ports: Vec::new(),
        subcomponents: Vec::new(),
        connectors: Vec::new(),
        behaviors: Vec::new(),
    };
    loop {
        let t = lx.next_token()?;
        match &t.tok {
            Tok::Sym(Sym::RBrace) => break,
            Tok::Ident(kw) if kw == "port" => loop {
                c.ports.push(parse_port_decl(lx)?);
                if !lx.eat_sym(Sym::Comma)? {
                    lx.expect_sym(Sym::Semi)?;
                    break;
                }
            },
            Tok::Ident(kw) if kw == "instance" => {
                let (type_ref, _) = lx.expect_qname("component type")?;
                let (name, pos) = lx.expect_ident("instance name")?;
                lx.expect_sym(Sym::Semi)?;
                c.subcomponents.push(SubcomponentInstance { type_ref, name, pos });
            }
            Tok::Ident(kw) if kw == "connect" => {
                let source = parse_port_ref(lx)?;
                lx.expect_sym(Sym::Arrow)?;
                let mut targets = vec![parse_port_ref(lx)?];
                while lx.eat_sym(Sym::Comma)? {
                    targets.push(parse_port_ref(lx)?);
                }
                lx.expect_sym(Sym::Semi)?;
                c.connectors.push(ConnectorDecl { source, targets, pos: t.pos });
            }
            Tok::Ident(kw) if kw == "behavior" => {
                let (language, _) = lx.expect_ident("behavior language")?;
                lx.expect_sym(Sym::LBrace)?;
                let (raw_body, body_pos) = lx.raw_balanced()?;
                c.behaviors.push(BehaviorEmbedding { language, raw_body, pos: t.pos, body_pos, parsed: None });
            }
            other => {
                return Err(ParseError::new(
                    t.pos,
                    "`port`, `instance`, `connect`, `behavior` or `}`",
                    other.to_string(),
                ))
            }
        }
    }
    Ok(c)
}

fn parse_port_decl(lx: &mut Lexer<'_>) -> Result<PortDecl, ParseError> {
    let t = lx.next_token()?;
    let direction = match &t.tok {
        Tok::Ident(s) if s == "in" => Direction::In,
        Tok::Ident(s) if s == "out" => Direction::Out,
        other => return Err(ParseError::new(t.pos, "`in` or `out`", other.to_string())),
    };
    let t = lx.next_token()?;
    let ty = match &t.tok {
        Tok::Ident(s) => DataType::from_keyword(s),
        _ => None,
    }
    .ok_or_else(|| ParseError::new(t.pos, "`Boolean`, `Integer` or `String`", t.tok.to_string()))?;
    let (name, pos) = lx.expect_ident("port name")?;
    Ok(PortDecl { direction, ty, name, pos })
}

fn parse_port_ref(lx: &mut Lexer<'_>) -> Result<PortRef, ParseError> {
    let (first, pos) = lx.expect_ident("port reference")?;
    if lx.eat_sym(Sym::Dot)? {
        let (port, _) = lx.expect_ident("port name")?;
        Ok(PortRef { instance: Some(first), port, pos })
    } else {
        Ok(PortRef { instance: None, port: first, pos })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diag::Pos;

    #[test]
    fn minimal_unit() {
        let u = parse_architecture("package demo; component Empty { }", "Empty.arc").unwrap();
        assert_eq!(u.package.as_str(), "demo");
        assert_eq!(u.component.name, "Empty");
        assert!(u.component.ports.is_empty());
        assert!(u.component.is_atomic());
    }

    #[test]
    fn missing_semicolon_after_port() {
        let err = parse_architecture("package p;\ncomponent X { port in Integer a port", "X.arc").unwrap_err();
        assert_eq!(err.pos, Pos::new(2, 33));
        assert_eq!(err.expected, "`;`");
        assert_eq!(err.found, "`port`");
    }

    #[test]
    fn elements_and_positions() {
        let src = "package a.b;\nimport c.D;\ncomponent X {\n  port in Integer i, out String o;\n  instance c.D d;\n  connect i -> d.x, d.y;\n  behavior automaton { state S initial; }\n}\n";
        let u = parse_architecture(src, "X.arc").unwrap();
        let c = &u.component;
        assert_eq!(u.imports[0].name.as_str(), "c.D");
        assert_eq!(c.ports.len(), 2);
        assert_eq!(c.ports[1].direction, Direction::Out);
        assert_eq!(c.ports[1].pos, Pos::new(4, 33));
        assert_eq!(c.subcomponents[0].type_ref.as_str(), "c.D");
        assert_eq!(c.connectors[0].targets.len(), 2);
        assert_eq!(c.connectors[0].targets[1].instance.as_deref(), Some("d"));
        assert_eq!(c.behaviors[0].language, "automaton");
        assert_eq!(c.behaviors[0].raw_body, " state S initial; ");
        assert_eq!(c.behaviors[0].body_pos, Pos::new(7, 23));
    }

    #[test]
    fn unknown_type_keyword() {
        let err = parse_architecture("package p; component X { port in Float f; }", "X.arc").unwrap_err();
        assert!(err.expected.contains("Integer"));
    }

    #[test]
    fn trailing_garbage() {
        assert!(parse_architecture("package p; component X { } component Y { }", "X.arc").is_err());
    }
}

use thiserror::Error;

use crate::value::QName;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Template {
    pub name: QName,
    pub nodes: Vec<Node>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Node {
    Text(String),
    Placeholder { path: String, line: u32 },
    List { path: String, var: String, body: Vec<Node>, line: u32 },
    If { path: String, then: Vec<Node>, otherwise: Option<Vec<Node>>, line: u32 },
    Include { name: QName, line: u32 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TemplateParseErrorKind {
    UnclosedBlock(String),
    UnknownDirective(String),
    /// A closing tag or `<#else>` that does not belong to the open block.
    UnexpectedDirective(String),
    Malformed(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("template `{template}` line {line}: {}", describe(kind))]
pub struct TemplateParseError {
    pub template: QName,
    pub line: u32,
    pub kind: TemplateParseErrorKind,
}

fn describe(kind: &TemplateParseErrorKind) -> String {
    match kind {
        TemplateParseErrorKind::UnclosedBlock(b) => format!("unclosed `<#{b}>` block"),
        TemplateParseErrorKind::UnknownDirective(d) => format!("unknown directive `{d}`"),
        TemplateParseErrorKind::UnexpectedDirective(d) => format!("unexpected `{d}`"),
        TemplateParseErrorKind::Malformed(m) => m.clone(),
    }
}

/// How a nested sequence ended.
#[derive(Debug, PartialEq)]
enum End {
    Eof,
    Else,
    Close(&'static str),
}

struct Parser<'a> {
    name: &'a QName,
    src: &'a str,
    pos: usize,
    line: u32,
}

pub fn parse_template(name: impl Into<QName>, source: &str) -> Result<Template, TemplateParseError> {
    let name = name.into();
    let mut p = Parser { name: &name, src: source, pos: 0, line: 1 };
    let (nodes, end) = p.sequence()?;
    match end {
        End::Eof => Ok(Template { name: name.clone(), nodes }),
        End::Else => Err(p.err(TemplateParseErrorKind::UnexpectedDirective("<#else>".into()))),
        End::Close(b) => Err(p.err(TemplateParseErrorKind::UnexpectedDirective(format!("</#{b}>")))),
    }
}

fn is_path(s: &str) -> bool {
    !s.is_empty() && s.split('.').all(crate::lexer::is_ident)
}

impl Parser<'_> {
    fn err(&self, kind: TemplateParseErrorKind) -> TemplateParseError {
        TemplateParseError { template: self.name.clone(), line: self.line, kind }
    }

    fn rest(&self) -> &str {
        &self.src[self.pos..]
    }

    fn advance(&mut self, n: usize) -> &str {
        let s = &self.src[self.pos..self.pos + n];
        self.line += s.matches('\n').count() as u32;
        self.pos += n;
        s
    }

    /// Consumes up to and including `>` of a directive; returns the inner text.
    fn tag(&mut self, open_len: usize) -> Result<String, TemplateParseError> {
        let Some(end) = self.rest().find('>') else {
            return Err(self.err(TemplateParseErrorKind::Malformed("directive without closing `>`".into())));
        };
        let inner = self.rest()[open_len..end].to_string();
        self.advance(end + 1);
        Ok(inner)
    }

    fn sequence(&mut self) -> Result<(Vec<Node>, End), TemplateParseError> {
        let mut nodes = Vec::new();
        let mut text = String::new();
        let flush = |text: &mut String, nodes: &mut Vec<Node>| {
            if !text.is_empty() {
                nodes.push(Node::Text(std::mem::take(text)));
            }
        };
        loop {
            let rest = self.rest();
            if rest.is_empty() {
                flush(&mut text, &mut nodes);
                return Ok((nodes, End::Eof));
            }
            if rest.starts_with("$$") {
                self.advance(2);
                text.push('$');
            } else if rest.starts_with("${") {
                let line = self.line;
                let Some(end) = rest.find('}') else {
                    return Err(self.err(TemplateParseErrorKind::Malformed("`${` without closing `}`".into())));
                };
                let path = rest[2..end].to_string();
                if !is_path(&path) {
                    return Err(self.err(TemplateParseErrorKind::Malformed(format!("invalid path `{path}`"))));
                }
                self.advance(end + 1);
                flush(&mut text, &mut nodes);
                nodes.push(Node::Placeholder { path, line });
            } else if rest.starts_with("</#") {
                let inner = self.tag(3)?;
                flush(&mut text, &mut nodes);
                return match inner.as_str() {
                    "list" => Ok((nodes, End::Close("list"))),
                    "if" => Ok((nodes, End::Close("if"))),
                    other => Err(self.err(TemplateParseErrorKind::UnknownDirective(format!("</#{other}>")))),
                };
            } else if rest.starts_with("<#") {
                let line = self.line;
                let inner = self.tag(2)?;
                let mut words = inner.split_whitespace();
                let keyword = words.next().unwrap_or("");
                let args: Vec<&str> = words.collect();
                flush(&mut text, &mut nodes);
                match keyword {
                    "list" => {
                        let [path, "as", var] = args.as_slice() else {
                            return Err(self.err(TemplateParseErrorKind::Malformed("expected `<#list path as name>`".into())));
                        };
                        if !is_path(path) || !crate::lexer::is_ident(var) {
                            return Err(self.err(TemplateParseErrorKind::Malformed(format!("invalid list header `{inner}`"))));
                        }
                        let (path, var) = (path.to_string(), var.to_string());
                        let (body, end) = self.sequence()?;
                        match end {
                            End::Close("list") => nodes.push(Node::List { path, var, body, line }),
                            End::Eof => {
                                return Err(TemplateParseError {
                                    template: self.name.clone(),
                                    line,
                                    kind: TemplateParseErrorKind::UnclosedBlock("list".into()),
                                })
                            }
                            End::Else => return Err(self.err(TemplateParseErrorKind::UnexpectedDirective("<#else>".into()))),
                            End::Close(b) => return Err(self.err(TemplateParseErrorKind::UnexpectedDirective(format!("</#{b}>")))),
                        }
                    }
                    "if" => {
                        let [path] = args.as_slice() else {
                            return Err(self.err(TemplateParseErrorKind::Malformed("expected `<#if path>`".into())));
                        };
                        if !is_path(path) {
                            return Err(self.err(TemplateParseErrorKind::Malformed(format!("invalid path `{path}`"))));
                        }
                        let path = path.to_string();
                        let unclosed = |p: &Self| TemplateParseError {
                            template: p.name.clone(),
                            line,
                            kind: TemplateParseErrorKind::UnclosedBlock("if".into()),
                        };
                        let (then, end) = self.sequence()?;
                        let otherwise = match end {
                            End::Close("if") => None,
                            End::Else => {
                                let (other, end) = self.sequence()?;
                                match end {
                                    End::Close("if") => Some(other),
                                    End::Eof => return Err(unclosed(self)),
                                    End::Else => return Err(self.err(TemplateParseErrorKind::UnexpectedDirective("<#else>".into()))),
                                    End::Close(b) => return Err(self.err(TemplateParseErrorKind::UnexpectedDirective(format!("</#{b}>")))),
                                }
                            }
                            End::Eof => return Err(unclosed(self)),
                            End::Close(b) => return Err(self.err(TemplateParseErrorKind::UnexpectedDirective(format!("</#{b}>")))),
                        };
                        nodes.push(Node::If { path, then, otherwise, line });
                    }
                    "else" if args.is_empty() => return Ok((nodes, End::Else)),
                    "include" => {
                        let name = match args.as_slice() {
                            [quoted] if quoted.len() >= 2 && quoted.starts_with('"') && quoted.ends_with('"') => &quoted[1..quoted.len() - 1],
                            _ => return Err(self.err(TemplateParseErrorKind::Malformed("expected `<#include \"name\">`".into()))),
                        };
                        if !is_path(name) {
                            return Err(self.err(TemplateParseErrorKind::Malformed(format!("invalid template name `{name}`"))));
                        }
                        nodes.push(Node::Include { name: QName::new(name), line });
                    }
                    other => return Err(self.err(TemplateParseErrorKind::UnknownDirective(format!("<#{other}>")))),
                }
            } else {
                let c = rest.chars().next().expect("non-empty");
                self.advance(c.len_utf8());
                text.push(c);
            }
        }
    }
}

/// Canonical source text of a template.
pub fn print_template(t: &Template) -> String {
    let mut out = String::new();
    print_nodes(&t.nodes, &mut out);
    out
}

fn print_nodes(nodes: &[Node], out: &mut String) {
    for n in nodes {
        match n {
            Node::Text(s) => out.push_str(&s.replace('$', "$$")),
            Node::Placeholder { path, .. } => {
                out.push_str("${");
                out.push_str(path);
                out.push('}');
            }
            Node::List { path, var, body, .. } => {
                out.push_str(&format!("<#list {path} as {var}>"));
                print_nodes(body, out);
                out.push_str("</#list>");
            }
            Node::If { path, then, otherwise, .. } => {
                out.push_str(&format!("<#if {path}>"));
                print_nodes(then, out);
                if let Some(o) = otherwise {
                    out.push_str("<#else>");
                    print_nodes(o, out);
                }
                out.push_str("</#if>");
            }
            Node::Include { name, .. } => out.push_str(&format!("<#include \"{name}\">")),
        }
    }
}

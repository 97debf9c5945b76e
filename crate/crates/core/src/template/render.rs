use std::collections::BTreeMap;

use thiserror::Error;

use crate::template::parse::{Node, Template};
use crate::template::store::TemplateStore;
use crate::value::QName;

pub const MAX_INCLUDE_DEPTH: usize = 32;

/// A value visible to templates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RenderValue {
    Str(String),
    Bool(bool),
    List(Vec<RenderValue>),
    Record(BTreeMap<String, RenderValue>),
}

impl RenderValue {
    pub fn str(s: impl Into<String>) -> Self {
        RenderValue::Str(s.into())
    }

    pub fn record<K: Into<String>>(fields: impl IntoIterator<Item = (K, RenderValue)>) -> Self {
        RenderValue::Record(fields.into_iter().map(|(k, v)| (k.into(), v)).collect())
    }

    pub fn list(items: impl IntoIterator<Item = RenderValue>) -> Self {
        RenderValue::List(items.into_iter().collect())
    }
}

impl From<&str> for RenderValue {
    fn from(s: &str) -> Self {
        RenderValue::Str(s.to_string())
    }
}

impl From<String> for RenderValue {
    fn from(s: String) -> Self {
        RenderValue::Str(s)
    }
}

impl From<bool> for RenderValue {
    fn from(b: bool) -> Self {
        RenderValue::Bool(b)
    }
}

impl<T: Into<RenderValue>> From<Vec<T>> for RenderValue {
    fn from(v: Vec<T>) -> Self {
        RenderValue::List(v.into_iter().map(Into::into).collect())
    }
}

/// Top-level names available to a render.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RenderContext {
    root: BTreeMap<String, RenderValue>,
}

impl RenderContext {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, name: impl Into<String>, value: impl Into<RenderValue>) -> Self {
        self.insert(name, value);
        self
    }

    pub fn insert(&mut self, name: impl Into<String>, value: impl Into<RenderValue>) {
        self.root.insert(name.into(), value.into());
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RenderErrorKind {
    MissingPath(String),
    NotAString(String),
    NotAList(String),
    NotABoolean(String),
    IncludeDepthExceeded,
    UnknownInclude(QName),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("template `{template}` line {line}: {}", describe(kind))]
pub struct RenderError {
    pub template: QName,
    pub line: u32,
    pub kind: RenderErrorKind,
}

fn describe(kind: &RenderErrorKind) -> String {
    match kind {
        RenderErrorKind::MissingPath(p) => format!("no value at `{p}`"),
        RenderErrorKind::NotAString(p) => format!("`{p}` is not a string"),
        RenderErrorKind::NotAList(p) => format!("`{p}` is not a list"),
        RenderErrorKind::NotABoolean(p) => format!("`{p}` is not a boolean"),
        RenderErrorKind::IncludeDepthExceeded => format!("include depth exceeds {MAX_INCLUDE_DEPTH}"),
        RenderErrorKind::UnknownInclude(n) => format!("unknown template `{n}`"),
    }
}

struct Renderer<'a> {
    ctx: &'a RenderContext,
    store: &'a TemplateStore,
    /// Loop variables, innermost last.
    scopes: Vec<(&'a str, &'a RenderValue)>,
    out: String,
}

impl<'a> Renderer<'a> {
    fn lookup(&self, path: &str) -> Option<&'a RenderValue> {
        let mut segments = path.split('.');
        let head = segments.next()?;
        let mut v = self
            .scopes
            .iter()
            .rev()
            .find(|(n, _)| *n == head)
            .map(|(_, v)| *v)
            .or_else(|| self.ctx.root.get(head))?;
        for seg in segments {
            match v {
                RenderValue::Record(fields) => v = fields.get(seg)?,
                _ => return None,
            }
        }
        Some(v)
    }

    fn nodes(&mut self, t: &'a Template, nodes: &'a [Node], depth: usize) -> Result<(), RenderError> {
        let err = |line: u32, kind| RenderError { template: t.name.clone(), line, kind };
        for n in nodes {
            match n {
                Node::Text(s) => self.out.push_str(s),
                Node::Placeholder { path, line } => match self.lookup(path) {
                    Some(RenderValue::Str(s)) => self.out.push_str(s),
                    Some(RenderValue::Bool(b)) => self.out.push_str(if *b { "true" } else { "false" }),
                    Some(_) => return Err(err(*line, RenderErrorKind::NotAString(path.clone()))),
                    None => return Err(err(*line, RenderErrorKind::MissingPath(path.clone()))),
                },
                Node::List { path, var, body, line } => match self.lookup(path) {
                    Some(RenderValue::List(items)) => {
                        for item in items {
                            self.scopes.push((var.as_str(), item));
                            let r = self.nodes(t, body, depth);
                            self.scopes.pop();
                            r?;
                        }
                    }
                    Some(_) => return Err(err(*line, RenderErrorKind::NotAList(path.clone()))),
                    None => return Err(err(*line, RenderErrorKind::MissingPath(path.clone()))),
                },
                Node::If { path, then, otherwise, line } => match self.lookup(path) {
                    Some(RenderValue::Bool(true)) => self.nodes(t, then, depth)?,
                    Some(RenderValue::Bool(false)) => {
                        if let Some(o) = otherwise {
                            self.nodes(t, o, depth)?;
                        }
                    }
                    Some(_) => return Err(err(*line, RenderErrorKind::NotABoolean(path.clone()))),
                    None => return Err(err(*line, RenderErrorKind::MissingPath(path.clone()))),
                },
                Node::Include { name, line } => {
                    if depth >= MAX_INCLUDE_DEPTH {
                        return Err(err(*line, RenderErrorKind::IncludeDepthExceeded));
                    }
                    let Some(inner) = self.store.get(name) else {
                        return Err(err(*line, RenderErrorKind::UnknownInclude(name.clone())));
                    };
                    self.nodes(inner, &inner.nodes, depth + 1)?;
                }
            }
        }
        Ok(())
    }
}

/// Renders `t`; includes are looked up in `store`.
pub fn render(t: &Template, ctx: &RenderContext, store: &TemplateStore) -> Result<String, RenderError> {
    let mut r = Renderer { ctx, store, scopes: Vec::new(), out: String::new() };
    r.nodes(t, &t.nodes, 0)?;
    Ok(r.out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::template::parse_template;

    fn run(src: &str, ctx: &RenderContext) -> Result<String, RenderErrorKind> {
        let t = parse_template("t.T", src).unwrap();
        render(&t, ctx, &TemplateStore::new()).map_err(|e| e.kind)
    }

    #[test]
    fn substitution() {
        assert_eq!(run("${a}", &RenderContext::new().with("a", "x")).unwrap(), "x");
    }

    #[test]
    fn list_iteration() {
        let ctx = RenderContext::new().with("xs", vec!["p", "q"]);
        assert_eq!(run("<#list xs as x>${x},</#list>", &ctx).unwrap(), "p,q,");
    }

    #[test]
    fn escape() {
        assert_eq!(run("$${a}", &RenderContext::new()).unwrap(), "${a}");
    }

    #[test]
    fn conditionals_and_records() {
        let comp = RenderValue::record([("name", "C".into()), ("atomic", true.into())]);
        let ctx = RenderContext::new().with("comp", comp);
        assert_eq!(run("<#if comp.atomic>A ${comp.name}<#else>B</#if>", &ctx).unwrap(), "A C");
    }

    #[test]
    fn loop_variable_shadows_root() {
        let ctx = RenderContext::new().with("x", "root").with("xs", vec!["inner"]);
        assert_eq!(run("<#list xs as x>${x}</#list>${x}", &ctx).unwrap(), "innerroot");
    }

    #[test]
    fn errors() {
        let ctx = RenderContext::new().with("s", "v").with("xs", vec!["a"]);
        assert_eq!(run("${nope}", &ctx), Err(RenderErrorKind::MissingPath("nope".into())));
        assert_eq!(run("${s.deeper}", &ctx), Err(RenderErrorKind::MissingPath("s.deeper".into())));
        assert_eq!(run("<#list s as x></#list>", &ctx), Err(RenderErrorKind::NotAList("s".into())));
        assert_eq!(run("<#if s></#if>", &ctx), Err(RenderErrorKind::NotABoolean("s".into())));
        assert_eq!(run("${xs}", &ctx), Err(RenderErrorKind::NotAString("xs".into())));
        assert_eq!(run("<#include \"no.Such\">", &ctx), Err(RenderErrorKind::UnknownInclude("no.Such".into())));
    }

    #[test]
    fn includes_see_caller_scope_and_depth_is_capped() {
        let mut store = TemplateStore::new();
        store.insert_source("a.Item", "[${x}]").unwrap();
        store.insert_source("a.Loop", "<#include \"a.Loop\">").unwrap();
        let ctx = RenderContext::new().with("xs", vec!["1", "2"]);
        let t = parse_template("t.T", "<#list xs as x><#include \"a.Item\"></#list>").unwrap();
        assert_eq!(render(&t, &ctx, &store).unwrap(), "[1][2]");
        let err = store.render(&"a.Loop".into(), &ctx).unwrap_err();
        assert_eq!(err.kind, RenderErrorKind::IncludeDepthExceeded);
    }
}

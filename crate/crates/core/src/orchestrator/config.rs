use std::collections::BTreeMap;
use std::fmt::Write;

use thiserror::Error;

use crate::diag::Pos;
use crate::lexer::{quote, Lexer, ParseError, Sym, Tok};

/// Contents of an `.app` file.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ApplicationConfig {
    pub name: String,
    pub component_generator: Option<String>,
    pub factory_generator: Option<String>,
    pub behavior_generators: Vec<String>,
    pub context: BTreeMap<String, String>,
}

impl ApplicationConfig {
    /// Every generator name the configuration mentions, in clause order
    /// (component, factory, behaviors).
    pub fn selected(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        out.extend(self.component_generator.iter().cloned());
        out.extend(self.factory_generator.iter().cloned());
        out.extend(self.behavior_generators.iter().cloned());
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("{pos}: duplicate {what}")]
    DuplicateClause { what: String, pos: Pos },
}

pub fn parse_application_config(source: &str) -> Result<ApplicationConfig, ConfigError> {
    let mut lx = Lexer::new(source);
    lx.expect_keyword("application")?;
    let (name, _) = lx.expect_ident("application name")?;
    lx.expect_sym(Sym::LBrace)?;
    let mut cfg = ApplicationConfig { name, ..Default::default() };
    let mut seen_behaviors = false;
    let dup = |what: String, pos| Err(ConfigError::DuplicateClause { what, pos });

    loop {
        let t = lx.next_token()?;
        let clause = match t.tok {
            Tok::Sym(Sym::RBrace) => break,
            Tok::Ident(c) => c,
            other => return Err(ParseError::new(t.pos, "clause or `}`", other.to_string()).into()),
        };
        match clause.as_str() {
            "componentgenerator" | "factorygenerator" => {
                let (g, _) = lx.expect_ident("generator name")?;
                let slot = if clause == "componentgenerator" { &mut cfg.component_generator } else { &mut cfg.factory_generator };
                if slot.is_some() {
                    return dup(format!("`{clause}` clause"), t.pos);
                }
                *slot = Some(g);
            }
            "behaviorgenerators" => {
                if seen_behaviors {
                    return dup("`behaviorgenerators` clause".into(), t.pos);
                }
                seen_behaviors = true;
                loop {
                    let (g, pos) = lx.expect_ident("generator name")?;
                    if cfg.behavior_generators.contains(&g) {
                        return dup(format!("behavior generator `{g}`"), pos);
                    }
                    cfg.behavior_generators.push(g);
                    if !lx.eat_sym(Sym::Comma)? {
                        break;
                    }
                }
            }
            "context" => {
                let (key, pos) = lx.expect_qname("context key")?;
                lx.expect_sym(Sym::Eq)?;
                let (value, _) = lx.expect_string("context value")?;
                if cfg.context.insert(key.to_string(), value).is_some() {
                    return dup(format!("context key `{key}`"), pos);
                }
            }
            _ => {
                return Err(ParseError::new(
                    t.pos,
                    "`componentgenerator`, `factorygenerator`, `behaviorgenerators` or `context`",
                    format!("`{clause}`"),
                )
                .into())
            }
        }
        lx.expect_sym(Sym::Semi)?;
    }
    lx.expect_eof()?;
    Ok(cfg)
}

pub fn print_application_config(cfg: &ApplicationConfig) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "application {} {{", cfg.name);
    if let Some(c) = &cfg.component_generator {
        let _ = writeln!(s, "  componentgenerator {c};");
    }
    if let Some(f) = &cfg.factory_generator {
        let _ = writeln!(s, "  factorygenerator {f};");
    }
    if !cfg.behavior_generators.is_empty() {
        let _ = writeln!(s, "  behaviorgenerators {};", cfg.behavior_generators.join(", "));
    }
    for (k, v) in &cfg.context {
        let _ = writeln!(s, "  context {k} = {};", quote(v));
    }
    s.push_str("}\n");
    s
}

//! A small text-template engine.
//!
//! Directives:
//!
//! * `${a.b}` substitutes a string (booleans render as `true`/`false`)
//! * `<#list a.items as x>...</#list>` repeats its body per list element
//! * `<#if a.flag>...<#else>...</#if>` tests a boolean
//! * `<#include "q.Name">` renders another template with the current scope
//! * `$$` is a literal `$`
//!
//! There is no expression language; generators compute everything the
//! templates need while building the [`RenderContext`].

mod parse;
mod render;
mod store;

pub use parse::{parse_template, print_template, Node, Template, TemplateParseError, TemplateParseErrorKind};
pub use render::{render, RenderContext, RenderError, RenderErrorKind, RenderValue, MAX_INCLUDE_DEPTH};
pub use store::{StoreError, TemplateStore};

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use thiserror::Error;
use walkdir::WalkDir;

use crate::template::parse::{parse_template, Template, TemplateParseError};
use crate::template::render::{render, RenderContext, RenderError, RenderErrorKind};
use crate::value::QName;

#[derive(Debug, Error)]
pub enum StoreError {
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error(transparent)]
    Parse(#[from] TemplateParseError),
}

/// Templates by qualified name. On disk `a.b.Main` lives at `a/b/Main.tpl`
/// below the template root.
#[derive(Debug, Clone, Default)]
pub struct TemplateStore {
    templates: BTreeMap<QName, Template>,
}

impl TemplateStore {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert_source(&mut self, name: impl Into<QName>, source: &str) -> Result<(), TemplateParseError> {
        let t = parse_template(name, source)?;
        self.templates.insert(t.name.clone(), t);
        Ok(())
    }

    pub fn insert(&mut self, t: Template) {
        self.templates.insert(t.name.clone(), t);
    }

    /// Adds every `.tpl` file below `root`.
    pub fn load_dir(&mut self, root: &Path) -> Result<(), StoreError> {
        for entry in WalkDir::new(root).sort_by_file_name() {
            let entry = entry.map_err(|e| StoreError::Io { path: root.to_path_buf(), source: e.into() })?;
            let path = entry.path();
            if !entry.file_type().is_file() || path.extension().is_none_or(|e| e != "tpl") {
                continue;
            }
            let Some(name) = Self::name_for(root, path) else { continue };
            let src = std::fs::read_to_string(path).map_err(|source| StoreError::Io { path: path.to_path_buf(), source })?;
            self.insert_source(name, &src)?;
        }
        Ok(())
    }

    fn name_for(root: &Path, path: &Path) -> Option<QName> {
        let rel = path.strip_prefix(root).ok()?.with_extension("");
        let parts: Option<Vec<&str>> = rel.components().map(|c| c.as_os_str().to_str()).collect();
        Some(QName::from_segments(parts?))
    }

    /// Relative path of a template name: `a.b.Main` → `a/b/Main.tpl`.
    pub fn path_for(name: &QName) -> PathBuf {
        let mut p: PathBuf = name.segments().collect();
        p.set_extension("tpl");
        p
    }

    pub fn get(&self, name: &QName) -> Option<&Template> {
        self.templates.get(name)
    }

    pub fn contains(&self, name: &QName) -> bool {
        self.templates.contains_key(name)
    }

    pub fn names(&self) -> impl Iterator<Item = &QName> {
        self.templates.keys()
    }

    pub fn render(&self, name: &QName, ctx: &RenderContext) -> Result<String, RenderError> {
        let t = self.get(name).ok_or_else(|| RenderError {
            template: name.clone(),
            line: 0,
            kind: RenderErrorKind::UnknownInclude(name.clone()),
        })?;
        render(t, ctx, self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn directory_layout_maps_to_names() {
        let dir = tempfile::tempdir().unwrap();
        std::fs::create_dir_all(dir.path().join("a/b")).unwrap();
        std::fs::write(dir.path().join("a/b/Main.tpl"), "hi ${who}").unwrap();
        std::fs::write(dir.path().join("a/readme.md"), "skip").unwrap();
        let mut store = TemplateStore::new();
        store.load_dir(dir.path()).unwrap();
        let name = QName::from("a.b.Main");
        assert!(store.contains(&name));
        assert_eq!(store.names().count(), 1);
        assert_eq!(TemplateStore::path_for(&name), PathBuf::from("a/b/Main.tpl"));
        assert_eq!(store.render(&name, &RenderContext::new().with("who", "there")).unwrap(), "hi there");
    }
}

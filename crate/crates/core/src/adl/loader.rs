use std::path::{Path, PathBuf};

use thiserror::Error;
use walkdir::WalkDir;

use crate::adl::ast::CompilationUnit;
use crate::adl::parser::parse_architecture;
use crate::lexer::ParseError;

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("{}: model directory does not exist", .0.display())]
    MissingDir(PathBuf),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{}:{error}", path.display())]
    Parse { path: PathBuf, error: ParseError },
    #[error("{}: file name does not match component `{component}`", path.display())]
    FileName { path: PathBuf, component: String },
}

/// Parses every `.arc` file below the given directories, in sorted path order.
pub fn load_model_dirs(dirs: &[PathBuf]) -> Result<Vec<CompilationUnit>, Vec<LoadError>> {
    let mut units = Vec::new();
    let mut errors = Vec::new();
    for dir in dirs {
        if !dir.is_dir() {
            errors.push(LoadError::MissingDir(dir.clone()));
            continue;
        }
        for entry in WalkDir::new(dir).sort_by_file_name() {
            let entry = match entry {
                Ok(e) => e,
                Err(e) => {
                    let path = e.path().map(Path::to_path_buf).unwrap_or_else(|| dir.clone());
                    errors.push(LoadError::Io { path, source: e.into() });
                    continue;
                }
            };
            let path = entry.path();
            if !entry.file_type().is_file() || path.extension().is_none_or(|e| e != "arc") {
                continue;
            }
            match load_file(path) {
                Ok(u) => units.push(u),
                Err(e) => errors.push(e),
            }
        }
    }
    if errors.is_empty() {
        Ok(units)
    } else {
        Err(errors)
    }
}

fn load_file(path: &Path) -> Result<CompilationUnit, LoadError> {
    let src = std::fs::read_to_string(path).map_err(|source| LoadError::Io { path: path.to_path_buf(), source })?;
    let unit = parse_architecture(&src, path).map_err(|error| LoadError::Parse { path: path.to_path_buf(), error })?;
    if path.file_stem().and_then(|s| s.to_str()) != Some(unit.component.name.as_str()) {
        return Err(LoadError::FileName { path: path.to_path_buf(), component: unit.component.name.clone() });
    }
    Ok(unit)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn loads_and_checks_file_names() {
        let dir = tempfile::tempdir().unwrap();
        std::fs::create_dir(dir.path().join("sub")).unwrap();
        std::fs::write(dir.path().join("sub/A.arc"), "package p; component A { }").unwrap();
        std::fs::write(dir.path().join("notes.txt"), "ignored").unwrap();
        let units = load_model_dirs(&[dir.path().to_path_buf()]).unwrap();
        assert_eq!(units.len(), 1);

        std::fs::write(dir.path().join("B.arc"), "package p; component C { }").unwrap();
        let errs = load_model_dirs(&[dir.path().to_path_buf()]).unwrap_err();
        assert!(matches!(errs[0], LoadError::FileName { .. }));
    }

    #[test]
    fn missing_dir() {
        let errs = load_model_dirs(&[PathBuf::from("/definitely/not/here")]).unwrap_err();
        assert!(matches!(errs[0], LoadError::MissingDir(_)));
    }
}

#![allow(dead_code)]

use std::path::{Path, PathBuf};

use arcgen_cli::{run, Cli, Toolchain};
use clap::Parser;

pub fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

pub fn toaster() -> PathBuf {
    fixtures().join("toaster")
}

pub fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

pub struct Outcome {
    pub code: i32,
    pub out: String,
    pub err: String,
}

pub fn arcgen_with(toolchain: &Toolchain, args: &[&str]) -> Outcome {
    let cli = Cli::try_parse_from(std::iter::once("arcgen").chain(args.iter().copied())).unwrap();
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(&cli, toolchain, &mut out, &mut err);
    Outcome { code, out: String::from_utf8(out).unwrap(), err: String::from_utf8(err).unwrap() }
}

pub fn arcgen(args: &[&str]) -> Outcome {
    arcgen_with(&Toolchain::new(), args)
}

/// Copy of a directory tree, for editing generator descriptors in tests.
pub fn copy_tree(from: &Path, to: &Path) {
    std::fs::create_dir_all(to).unwrap();
    for entry in std::fs::read_dir(from).unwrap() {
        let entry = entry.unwrap();
        let target = to.join(entry.file_name());
        if entry.file_type().unwrap().is_dir() {
            copy_tree(&entry.path(), &target);
        } else {
            std::fs::copy(entry.path(), target).unwrap();
        }
    }
}

/// Bundled generators copied into `dir` with `edit` applied to each
/// descriptor source.
pub fn edited_generators(dir: &Path, edit: impl Fn(&str, String) -> String) -> PathBuf {
    let gens = dir.join("generators");
    copy_tree(&arcgen_pygen::generators_dir(), &gens);
    for entry in std::fs::read_dir(&gens).unwrap() {
        let p = entry.unwrap().path();
        if p.extension().is_some_and(|e| e == "gen") {
            let name = p.file_stem().unwrap().to_str().unwrap().to_string();
            let src = std::fs::read_to_string(&p).unwrap();
            std::fs::write(&p, edit(&name, src)).unwrap();
        }
    }
    gens
}

/// Relative path and content of every file below `dir`.
pub fn tree(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut out = Vec::new();
    fn walk(root: &Path, dir: &Path, out: &mut Vec<(String, Vec<u8>)>) {
        for entry in std::fs::read_dir(dir).unwrap() {
            let p = entry.unwrap().path();
            if p.is_dir() {
                walk(root, &p, out);
            } else {
                let rel = p.strip_prefix(root).unwrap().to_str().unwrap().replace('\\', "/");
                out.push((rel, std::fs::read(&p).unwrap()));
            }
        }
    }
    walk(dir, dir, &mut out);
    out.sort();
    out
}

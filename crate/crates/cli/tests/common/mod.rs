#![allow(dead_code)]

use std::path::{Path, PathBuf};

use tempfile::TempDir;

pub const NOW: &str = "2024-06-30T12:00:00Z";

pub fn fixtures_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

/// Fixture copy in a scratch directory, so the store file lands there.
pub fn scratch() -> (TempDir, PathBuf) {
    let dir = tempfile::tempdir().unwrap();
    for entry in std::fs::read_dir(fixtures_dir()).unwrap() {
        let entry = entry.unwrap();
        if entry.file_type().unwrap().is_file() && entry.file_name() != "store.json" {
            std::fs::copy(entry.path(), dir.path().join(entry.file_name())).unwrap();
        }
    }
    let cfg = dir.path().join("dpw.json");
    (dir, cfg)
}

pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Runs `dpw --config <cfg> --now <NOW> <args>` in-process.
pub fn dpw(cfg: &Path, args: &[&str]) -> Output {
    let mut argv: Vec<String> = vec!["dpw".into(), "--config".into(), cfg.display().to_string(), "--now".into(), NOW.into()];
    argv.extend(args.iter().map(|a| a.to_string()));
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = dpw_cli::run(&argv, &mut out, &mut err);
    Output {
        code,
        stdout: String::from_utf8(out).unwrap(),
        stderr: String::from_utf8(err).unwrap(),
    }
}

/// Like [`dpw`] but panics unless the exit code is 0.
pub fn ok(cfg: &Path, args: &[&str]) -> String {
    let o = dpw(cfg, args);
    assert_eq!(o.code, 0, "dpw {args:?} failed: {}", o.stderr);
    o.stdout
}

pub fn store_hash(cfg: &Path) -> String {
    let ws = dpw_core::Workspace::open(dpw_core::Config::load(cfg).unwrap()).unwrap();
    ws.store.hash()
}

/// Seeded and fully imported scratch workspace.
pub fn loaded() -> (TempDir, PathBuf) {
    let (dir, cfg) = scratch();
    ok(&cfg, &["seed", "--fixtures", dir.path().to_str().unwrap()]);
    ok(&cfg, &["import", "--all"]);
    (dir, cfg)
}

#![allow(dead_code)]

pub mod gen;

use std::path::{Path, PathBuf};

use chrono::{DateTime, TimeZone, Utc};
use dpw_core::{Config, Workspace};
use tempfile::TempDir;

pub fn fixtures_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

/// Fixed clock that all fixture dates are written against.
pub fn now() -> DateTime<Utc> {
    Utc.with_ymd_and_hms(2024, 6, 30, 12, 0, 0).unwrap()
}

/// Copies the shipped fixtures into a scratch directory so the store file
/// lands there too.
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

pub fn open(cfg: &Path) -> Workspace {
    Workspace::open(Config::load(cfg).unwrap()).unwrap()
}

/// Seeded and fully imported workspace in a scratch directory.
pub fn loaded() -> (TempDir, Workspace) {
    let (dir, cfg) = scratch();
    let ws = open(&cfg);
    ws.seed(dir.path()).unwrap();
    import_all(&ws);
    (dir, ws)
}

pub fn import_all(ws: &Workspace) -> Vec<dpw_core::ingest::ImportReport> {
    let sources: Vec<_> = ws.import_order().into_iter().cloned().collect();
    sources.iter().map(|s| ws.import_source(s, now).unwrap()).collect()
}

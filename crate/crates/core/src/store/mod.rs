//! The single workspace database: an in-memory snapshot persisted as JSON.
//!
//! Readers take an `Arc` of the last committed snapshot and never block on
//! writers. Writers are serialized; each one works on a private copy that is
//! swapped in only when the closure succeeds, so a failed transaction leaves
//! nothing behind.

mod data;
mod export;
mod prefs;
mod scope;

use std::fs::{self, File};
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex, RwLock};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub use data::{Link, StoreData, Suggestion};
pub use export::{cell_text, export_table, write_csv, Tabular};
pub use prefs::{get_layout, save_layout, set_favorite};
pub use scope::{query_scoped, FilterExpr, Focus, Scope, ScopeFilter, ScopedRecord, ViewMode};

use crate::error::{DpwError, Result};
use crate::ingest::ImportReport;

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Snapshot {
    /// Bumped by every commit that changes `data`.
    pub revision: u64,
    pub data: StoreData,
    #[serde(default)]
    pub import_history: Vec<ImportReport>,
}

impl Snapshot {
    /// SHA-256 over the canonical JSON of `data`. Revision and import
    /// history are bookkeeping and do not contribute.
    pub fn hash(&self) -> String {
        data_hash(&self.data)
    }
}

pub fn data_hash(data: &StoreData) -> String {
    let bytes = serde_json::to_vec(data).expect("store data is always serializable");
    hex::encode(Sha256::digest(bytes))
}

#[derive(Debug)]
pub struct Store {
    path: Option<PathBuf>,
    current: RwLock<Arc<Snapshot>>,
    writer: Mutex<()>,
}

impl Store {
    pub fn in_memory(data: StoreData) -> Self {
        Store {
            path: None,
            current: RwLock::new(Arc::new(Snapshot {
                revision: 0,
                data,
                import_history: Vec::new(),
            })),
            writer: Mutex::new(()),
        }
    }

    /// Opens the store file at `path`; a missing file is an empty store.
    pub fn open(path: impl Into<PathBuf>) -> Result<Self> {
        let path = path.into();
        let snapshot = match fs::read(&path) {
            Ok(bytes) => serde_json::from_slice(&bytes).map_err(|e| {
                DpwError::Parse(format!("store file {}: {e}", path.display()))
            })?,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Snapshot::default(),
            Err(e) => return Err(DpwError::Io(format!("cannot read {}: {e}", path.display()))),
        };
        Ok(Store {
            path: Some(path),
            current: RwLock::new(Arc::new(snapshot)),
            writer: Mutex::new(()),
        })
    }

    pub fn path(&self) -> Option<&Path> {
        self.path.as_deref()
    }

    pub fn snapshot(&self) -> Arc<Snapshot> {
        self.current.read().expect("store lock poisoned").clone()
    }

    pub fn revision(&self) -> u64 {
        self.snapshot().revision
    }

    pub fn hash(&self) -> String {
        self.snapshot().hash()
    }

    /// Runs `f` against a private copy of the data and commits it if `f`
    /// succeeds. The revision only moves when the data actually changed.
    pub fn write<R>(&self, f: impl FnOnce(&mut StoreData) -> Result<R>) -> Result<R> {
        self.transact(|snap| f(&mut snap.data))
    }

    /// Appends an import report to the admin history.
    pub fn record_import(&self, report: ImportReport) -> Result<()> {
        self.transact(|snap| {
            snap.import_history.push(report);
            Ok(())
        })
    }

    fn transact<R>(&self, f: impl FnOnce(&mut Snapshot) -> Result<R>) -> Result<R> {
        let _guard = self.writer.lock().expect("store writer poisoned");
        let base = self.snapshot();
        let mut next = (*base).clone();
        let out = f(&mut next)?;
        if next == *base {
            return Ok(out);
        }
        if next.data != base.data {
            next.revision = base.revision + 1;
        }
        if let Some(path) = &self.path {
            persist(path, &next)?;
        }
        *self.current.write().expect("store lock poisoned") = Arc::new(next);
        Ok(out)
    }
}

/// Writes via a temporary file and rename so readers of the file never see
/// a partial store. An advisory lock on a sidecar file keeps concurrent
/// processes from interleaving saves.
fn persist(path: &Path, snapshot: &Snapshot) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    let lock_path = path.with_extension("lock");
    let lock = File::create(&lock_path)?;
    lock.lock()?;
    let tmp = path.with_extension("tmp");
    let bytes = serde_json::to_vec_pretty(snapshot)?;
    fs::write(&tmp, bytes)?;
    fs::rename(&tmp, path)?;
    lock.unlock()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::User;

    #[test]
    fn failed_write_leaves_store_untouched() {
        let store = Store::in_memory(StoreData::default());
        let before = store.hash();
        let err = store.write(|d| {
            d.users.insert("u1".into(), User::new("u1", "U", "t"));
            Err::<(), _>(DpwError::validation("boom"))
        });
        assert!(err.is_err());
        assert_eq!(store.hash(), before);
        assert_eq!(store.revision(), 0);
    }

    #[test]
    fn revision_moves_only_on_change() {
        let store = Store::in_memory(StoreData::default());
        store.write(|_| Ok(())).unwrap();
        assert_eq!(store.revision(), 0);
        store
            .write(|d| {
                d.users.insert("u1".into(), User::new("u1", "U", "t"));
                Ok(())
            })
            .unwrap();
        assert_eq!(store.revision(), 1);
    }

    #[test]
    fn persists_and_reopens() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("store.json");
        let store = Store::open(&path).unwrap();
        store
            .write(|d| {
                d.users.insert("u1".into(), User::new("u1", "U", "t"));
                Ok(())
            })
            .unwrap();
        let reopened = Store::open(&path).unwrap();
        assert_eq!(reopened.hash(), store.hash());
        assert_eq!(reopened.revision(), 1);
    }

    #[test]
    fn snapshots_are_isolated_from_later_writes() {
        let store = Store::in_memory(StoreData::default());
        let snap = store.snapshot();
        store
            .write(|d| {
                d.users.insert("u1".into(), User::new("u1", "U", "t"));
                Ok(())
            })
            .unwrap();
        assert!(snap.data.users.is_empty());
        assert_eq!(store.snapshot().data.users.len(), 1);
    }
}

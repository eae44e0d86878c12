//! Content-addressed memo for Λ values, optionally persisted as JSON lines.
//!
//! One record per line: `{key, kind, payload, engine, version}`. Readers
//! load the whole file at open; writes go through a single appending
//! handle behind a mutex. Lines that fail to parse are skipped with a
//! warning and recomputed on demand.

use std::collections::HashMap;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::sync::{Mutex, RwLock};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::funcspace::PiecewisePoly;
use crate::partitions::SetPartition;
use crate::rational::{fmt_rational, Rational};

pub const CACHE_VERSION: u32 = 1;

/// Environment variable naming the default cache file.
pub const CACHE_PATH_ENV: &str = "VDM_CACHE_PATH";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheRecord {
    pub key: String,
    /// `"point"`, `"function"` or `"tau"`.
    pub kind: String,
    pub payload: serde_json::Value,
    pub engine: String,
    pub version: u32,
}

/// Hash of the canonical JSON form of a list of functions.
pub fn hash_functions(gs: &[&PiecewisePoly]) -> String {
    let json: Vec<_> = gs.iter().map(|g| g.to_json()).collect();
    let bytes = serde_json::to_vec(&json).expect("serializable");
    let digest = Sha256::digest(&bytes);
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

/// `{partition}#{hash}#fn`, `#t=<rational>` or `#tau`.
pub fn cache_key(p: &SetPartition, gs: &[&PiecewisePoly], at: KeyPoint<'_>) -> String {
    let suffix = match at {
        KeyPoint::Function => "fn".to_string(),
        KeyPoint::Point(t) => format!("t={}", fmt_rational(t)),
        KeyPoint::Tau => "tau".to_string(),
    };
    format!("{p}#{}#{suffix}", hash_functions(gs))
}

#[derive(Clone, Copy, Debug)]
pub enum KeyPoint<'a> {
    Function,
    Point(&'a Rational),
    Tau,
}

#[derive(Debug, Default)]
pub struct LambdaCache {
    path: Option<PathBuf>,
    entries: RwLock<HashMap<String, CacheRecord>>,
    writer: Mutex<Option<File>>,
    discarded: usize,
}

impl LambdaCache {
    pub fn in_memory() -> Self {
        LambdaCache::default()
    }

    /// Opens (creating if needed) a cache file and loads its records.
    pub fn open(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref().to_path_buf();
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            std::fs::create_dir_all(dir)?;
        }
        let mut entries = HashMap::new();
        let mut discarded = 0;
        if path.exists() {
            let reader = BufReader::new(File::open(&path)?);
            for (i, line) in reader.lines().enumerate() {
                let line = line?;
                if line.trim().is_empty() {
                    continue;
                }
                match serde_json::from_str::<CacheRecord>(&line) {
                    Ok(r) if r.version == CACHE_VERSION => {
                        entries.insert(r.key.clone(), r);
                    }
                    Ok(r) => {
                        log::warn!("cache line {}: version {} ignored", i + 1, r.version);
                        discarded += 1;
                    }
                    Err(e) => {
                        log::warn!("cache line {}: discarded corrupt entry ({e})", i + 1);
                        discarded += 1;
                    }
                }
            }
        }
        let file = OpenOptions::new().create(true).append(true).open(&path)?;
        Ok(LambdaCache {
            path: Some(path),
            entries: RwLock::new(entries),
            writer: Mutex::new(Some(file)),
            discarded,
        })
    }

    pub fn path(&self) -> Option<&Path> {
        self.path.as_deref()
    }

    pub fn len(&self) -> usize {
        self.entries.read().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Number of unreadable lines skipped at open.
    pub fn discarded(&self) -> usize {
        self.discarded
    }

    pub fn lookup(&self, key: &str) -> Option<CacheRecord> {
        self.entries.read().unwrap().get(key).cloned()
    }

    /// Stores a record; storing an identical record again is a no-op.
    pub fn store(&self, record: CacheRecord) -> Result<()> {
        {
            let entries = self.entries.read().unwrap();
            if entries.get(&record.key) == Some(&record) {
                return Ok(());
            }
        }
        let mut writer = self.writer.lock().unwrap();
        if let Some(f) = writer.as_mut() {
            let line = serde_json::to_string(&record).map_err(|e| Error::Cache(e.to_string()))?;
            writeln!(f, "{line}")?;
        }
        self.entries.write().unwrap().insert(record.key.clone(), record);
        Ok(())
    }

    pub fn records(&self) -> Vec<CacheRecord> {
        let mut v: Vec<_> = self.entries.read().unwrap().values().cloned().collect();
        v.sort_by(|a, b| a.key.cmp(&b.key));
        v
    }

    /// Drops all records, truncating the backing file.
    pub fn clear(&self) -> Result<()> {
        let mut writer = self.writer.lock().unwrap();
        if let Some(path) = &self.path {
            let f = OpenOptions::new().write(true).truncate(true).open(path)?;
            drop(f);
            *writer = Some(OpenOptions::new().append(true).open(path)?);
        }
        self.entries.write().unwrap().clear();
        Ok(())
    }
}

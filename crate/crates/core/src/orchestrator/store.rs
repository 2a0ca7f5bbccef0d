//! Write-once blob storage keyed by `/`-separated paths.

use std::collections::BTreeMap;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::sync::Mutex;
use std::time::SystemTime;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum StoreError {
    #[error("no blob at {0:?}")]
    NotFound(String),
    #[error("blob {0:?} already exists")]
    AlreadyExists(String),
    #[error("invalid key {0:?}")]
    InvalidKey(String),
    #[error("i/o error on {key:?}: {source}")]
    Io {
        key: String,
        #[source]
        source: io::Error,
    },
}

/// Blob storage where a key, once written, never changes.
///
/// `put_atomic` makes the whole blob visible at once: a concurrent `list`
/// either omits the key or returns it with its complete contents.
pub trait ObjectStore: Send + Sync {
    fn put_atomic(&self, key: &str, bytes: &[u8]) -> Result<(), StoreError>;
    fn get(&self, key: &str) -> Result<Vec<u8>, StoreError>;
    /// Keys starting with `prefix`, sorted.
    fn list(&self, prefix: &str) -> Result<Vec<String>, StoreError>;
    fn modified(&self, key: &str) -> Result<SystemTime, StoreError>;

    fn exists(&self, key: &str) -> bool {
        self.modified(key).is_ok()
    }
}

/// Keys are relative, `/`-separated, and every segment is a plain name.
pub fn validate_key(key: &str) -> Result<(), StoreError> {
    let ok = !key.is_empty()
        && !key.contains('\\')
        && key
            .split('/')
            .all(|seg| !seg.is_empty() && seg != "." && seg != ".." && !seg.starts_with('.'));
    if ok {
        Ok(())
    } else {
        Err(StoreError::InvalidKey(key.to_string()))
    }
}

/// Store backed by a directory tree. Writes go to a hidden temp file in the
/// target directory and are renamed into place without clobbering.
#[derive(Clone, Debug)]
pub struct DirStore {
    root: PathBuf,
}

impl DirStore {
    pub fn open(root: impl Into<PathBuf>) -> Result<Self, StoreError> {
        let root = root.into();
        std::fs::create_dir_all(&root).map_err(|source| StoreError::Io {
            key: root.display().to_string(),
            source,
        })?;
        Ok(Self { root })
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    fn path(&self, key: &str) -> Result<PathBuf, StoreError> {
        validate_key(key)?;
        Ok(key.split('/').fold(self.root.clone(), |p, s| p.join(s)))
    }
}

fn io_err(key: &str) -> impl FnOnce(io::Error) -> StoreError + '_ {
    move |source| {
        if source.kind() == io::ErrorKind::NotFound {
            StoreError::NotFound(key.to_string())
        } else {
            StoreError::Io {
                key: key.to_string(),
                source,
            }
        }
    }
}

impl ObjectStore for DirStore {
    fn put_atomic(&self, key: &str, bytes: &[u8]) -> Result<(), StoreError> {
        let path = self.path(key)?;
        if path.exists() {
            return Err(StoreError::AlreadyExists(key.to_string()));
        }
        let dir = path.parent().expect("key has a parent");
        let wrap = |source| StoreError::Io {
            key: key.to_string(),
            source,
        };
        std::fs::create_dir_all(dir).map_err(wrap)?;
        let mut tmp = tempfile::Builder::new()
            .prefix(".tmp-")
            .tempfile_in(dir)
            .map_err(wrap)?;
        tmp.write_all(bytes).map_err(wrap)?;
        tmp.as_file().sync_all().map_err(wrap)?;
        tmp.persist_noclobber(&path).map_err(|e| {
            if e.error.kind() == io::ErrorKind::AlreadyExists {
                StoreError::AlreadyExists(key.to_string())
            } else {
                wrap(e.error)
            }
        })?;
        Ok(())
    }

    fn get(&self, key: &str) -> Result<Vec<u8>, StoreError> {
        let path = self.path(key)?;
        std::fs::read(path).map_err(io_err(key))
    }

    fn list(&self, prefix: &str) -> Result<Vec<String>, StoreError> {
        let mut keys = Vec::new();
        let walker = walkdir::WalkDir::new(&self.root)
            .min_depth(1)
            .into_iter()
            // temp files and other hidden entries are never keys
            .filter_entry(|e| !e.file_name().to_string_lossy().starts_with('.'));
        for entry in walker {
            let entry = match entry {
                Ok(e) => e,
                // a temp file renamed away mid-walk
                Err(e) if e.io_error().is_some_and(|io| io.kind() == io::ErrorKind::NotFound) => continue,
                Err(e) => {
                    return Err(StoreError::Io {
                        key: prefix.to_string(),
                        source: e.into(),
                    })
                }
            };
            if !entry.file_type().is_file() {
                continue;
            }
            let rel = entry.path().strip_prefix(&self.root).expect("under root");
            let key = rel
                .components()
                .map(|c| c.as_os_str().to_string_lossy())
                .collect::<Vec<_>>()
                .join("/");
            if key.starts_with(prefix) {
                keys.push(key);
            }
        }
        keys.sort();
        Ok(keys)
    }

    fn modified(&self, key: &str) -> Result<SystemTime, StoreError> {
        let path = self.path(key)?;
        std::fs::metadata(path)
            .and_then(|m| m.modified())
            .map_err(io_err(key))
    }
}

/// In-process store, mainly for tests.
#[derive(Debug, Default)]
pub struct MemoryStore {
    blobs: Mutex<BTreeMap<String, (Vec<u8>, SystemTime)>>,
}

impl MemoryStore {
    pub fn new() -> Self {
        Self::default()
    }
}

impl ObjectStore for MemoryStore {
    fn put_atomic(&self, key: &str, bytes: &[u8]) -> Result<(), StoreError> {
        validate_key(key)?;
        let mut blobs = self.blobs.lock().expect("store lock");
        if blobs.contains_key(key) {
            return Err(StoreError::AlreadyExists(key.to_string()));
        }
        blobs.insert(key.to_string(), (bytes.to_vec(), SystemTime::now()));
        Ok(())
    }

    fn get(&self, key: &str) -> Result<Vec<u8>, StoreError> {
        validate_key(key)?;
        let blobs = self.blobs.lock().expect("store lock");
        blobs
            .get(key)
            .map(|(b, _)| b.clone())
            .ok_or_else(|| StoreError::NotFound(key.to_string()))
    }

    fn list(&self, prefix: &str) -> Result<Vec<String>, StoreError> {
        let blobs = self.blobs.lock().expect("store lock");
        Ok(blobs.keys().filter(|k| k.starts_with(prefix)).cloned().collect())
    }

    fn modified(&self, key: &str) -> Result<SystemTime, StoreError> {
        let blobs = self.blobs.lock().expect("store lock");
        blobs
            .get(key)
            .map(|(_, t)| *t)
            .ok_or_else(|| StoreError::NotFound(key.to_string()))
    }
}

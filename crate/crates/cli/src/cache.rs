//! Content-addressed result cache. One process holds the directory at a time through an
//! exclusive advisory lock on `<root>/lock`; every cached run also leaves a manifest.

use std::collections::BTreeMap;
use std::fs::{self, File, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{Duration, SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::error::{CliError, CliResult};

pub const CACHE_DIR_ENV: &str = "FOURIER_CACHE_DIR";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub parameters: Value,
    pub versions: BTreeMap<String, String>,
    pub wall_time_ms: u64,
    /// Seconds since the Unix epoch at completion.
    pub finished_at: u64,
    /// Whether the result came from the cache.
    pub cached: bool,
    /// SHA-256 of the canonical JSON encoding of the result.
    pub result_digest: String,
}

pub struct Cache {
    root: PathBuf,
    // held for the lifetime of the cache; the lock is released when the file closes
    _lock: File,
}

pub fn versions() -> BTreeMap<String, String> {
    BTreeMap::from([
        ("fourier-core".to_string(), fourier_core::VERSION.to_string()),
        ("fourier-cli".to_string(), env!("CARGO_PKG_VERSION").to_string()),
    ])
}

/// `FOURIER_CACHE_DIR`, else `$XDG_CACHE_HOME/fourier`, else `~/.cache/fourier`.
pub fn default_root() -> PathBuf {
    if let Some(dir) = std::env::var_os(CACHE_DIR_ENV).filter(|d| !d.is_empty()) {
        return PathBuf::from(dir);
    }
    if let Some(dir) = std::env::var_os("XDG_CACHE_HOME").filter(|d| !d.is_empty()) {
        return PathBuf::from(dir).join("fourier");
    }
    match std::env::var_os("HOME") {
        Some(home) => PathBuf::from(home).join(".cache").join("fourier"),
        None => PathBuf::from(".fourier-cache"),
    }
}

/// Hex SHA-256 of the JSON encoding; `serde_json` maps are key-sorted, so equal values hash equally.
pub fn digest(value: &Value) -> String {
    let bytes = serde_json::to_vec(value).expect("json values serialize");
    hex::encode(Sha256::digest(&bytes))
}

pub fn cache_key(command: &str, parameters: &Value) -> String {
    digest(&json!({
        "command": command,
        "parameters": parameters,
        "versions": versions(),
    }))
}

fn write_atomic(path: &Path, bytes: &[u8]) -> CliResult<()> {
    let tmp = path.with_extension("tmp");
    let mut f = File::create(&tmp).map_err(|e| CliError::io(&tmp, e))?;
    f.write_all(bytes).map_err(|e| CliError::io(&tmp, e))?;
    f.sync_all().map_err(|e| CliError::io(&tmp, e))?;
    fs::rename(&tmp, path).map_err(|e| CliError::io(path, e))
}

impl Cache {
    /// Creates the directory layout and blocks until the advisory lock is ours.
    pub fn open(root: &Path) -> CliResult<Self> {
        for sub in ["objects", "manifests"] {
            let d = root.join(sub);
            fs::create_dir_all(&d).map_err(|e| CliError::io(&d, e))?;
        }
        let lock_path = root.join("lock");
        let lock = OpenOptions::new()
            .create(true)
            .truncate(false)
            .write(true)
            .open(&lock_path)
            .map_err(|e| CliError::io(&lock_path, e))?;
        if lock.try_lock().is_err() {
            eprintln!("waiting for the cache lock at {}", lock_path.display());
            lock.lock().map_err(|e| CliError::io(&lock_path, e))?;
        }
        Ok(Cache {
            root: root.to_path_buf(),
            _lock: lock,
        })
    }

    fn object_path(&self, key: &str) -> PathBuf {
        self.root.join("objects").join(&key[..2]).join(format!("{key}.json"))
    }

    pub fn manifest_path(&self, key: &str) -> PathBuf {
        self.root.join("manifests").join(format!("{key}.json"))
    }

    /// A cached result; unreadable or corrupt objects count as misses.
    pub fn load(&self, key: &str) -> Option<Value> {
        let text = fs::read_to_string(self.object_path(key)).ok()?;
        serde_json::from_str(&text).ok()
    }

    pub fn store(&self, key: &str, value: &Value) -> CliResult<()> {
        let path = self.object_path(key);
        let dir = path.parent().expect("object paths have a parent");
        fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
        write_atomic(&path, &serde_json::to_vec(value).expect("json values serialize"))
    }

    pub fn write_manifest(&self, key: &str, manifest: &RunManifest) -> CliResult<()> {
        let bytes = serde_json::to_vec_pretty(manifest).expect("manifests serialize");
        write_atomic(&self.manifest_path(key), &bytes)
    }
}

/// Runs `compute` through the cache (when given) and records a manifest.
pub fn cached_run(
    cache: Option<&Cache>,
    command: &str,
    parameters: Value,
    compute: impl FnOnce() -> CliResult<Value>,
) -> CliResult<Value> {
    let start = std::time::Instant::now();
    let key = cache_key(command, &parameters);
    let hit = cache.and_then(|c| c.load(&key));
    let cached = hit.is_some();
    let value = match hit {
        Some(v) => v,
        None => compute()?,
    };
    if let Some(c) = cache {
        if !cached {
            c.store(&key, &value)?;
        }
        let manifest = RunManifest {
            command: command.to_string(),
            parameters,
            versions: versions(),
            wall_time_ms: start.elapsed().as_millis() as u64,
            finished_at: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .unwrap_or(Duration::ZERO)
                .as_secs(),
            cached,
            result_digest: digest(&value),
        };
        c.write_manifest(&key, &manifest)?;
    }
    Ok(value)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn store_and_load() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::open(dir.path()).unwrap();
        let params = json!({"n": 4});
        let mut calls = 0;
        let a = cached_run(Some(&cache), "norms", params.clone(), || {
            calls += 1;
            Ok(json!([[4, 4, 4, 4]]))
        })
        .unwrap();
        let b = cached_run(Some(&cache), "norms", params.clone(), || unreachable!()).unwrap();
        assert_eq!(a, b);
        assert_eq!(calls, 1);
        let key = cache_key("norms", &params);
        let m: RunManifest =
            serde_json::from_str(&fs::read_to_string(cache.manifest_path(&key)).unwrap()).unwrap();
        assert!(m.cached);
        assert_eq!(m.result_digest, digest(&a));
    }

    #[test]
    fn keys_depend_on_parameters() {
        assert_ne!(cache_key("norms", &json!({"n": 4})), cache_key("norms", &json!({"n": 6})));
        assert_ne!(cache_key("norms", &json!({"n": 4})), cache_key("enumerate", &json!({"n": 4})));
        assert_eq!(cache_key("norms", &json!({"n": 4})), cache_key("norms", &json!({"n": 4})));
    }
}

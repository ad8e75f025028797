//! Content-addressed JSON cache: `<root>/<kind>/<sha256 of key>.json`.
//!
//! Each entry stores its key (which includes the engine version) and a
//! checksum of the payload. A key or checksum mismatch is a miss.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use slopecert_core::slopes::{canonical_json, sha256_hex};
use slopecert_core::ENGINE_VERSION;

#[derive(Debug, Serialize, Deserialize)]
struct Entry {
    key: Value,
    payload: Value,
    checksum: String,
}

#[derive(Debug, Clone)]
pub struct Cache {
    root: Option<PathBuf>,
}

static TEMP_COUNTER: AtomicU64 = AtomicU64::new(0);

impl Cache {
    pub fn disabled() -> Self {
        Cache { root: None }
    }

    pub fn at(root: impl Into<PathBuf>) -> Self {
        Cache { root: Some(root.into()) }
    }

    pub fn is_enabled(&self) -> bool {
        self.root.is_some()
    }

    fn full_key(kind: &str, key: &Value) -> Value {
        json!({ "engine_version": ENGINE_VERSION, "kind": kind, "params": key })
    }

    fn path(&self, kind: &str, full_key: &Value) -> Option<PathBuf> {
        let root = self.root.as_ref()?;
        let name = sha256_hex(canonical_json(full_key).ok()?.as_bytes());
        Some(root.join(kind).join(format!("{name}.json")))
    }

    pub fn get<T: DeserializeOwned>(&self, kind: &str, key: &Value) -> Option<T> {
        let full = Self::full_key(kind, key);
        let path = self.path(kind, &full)?;
        let text = fs::read_to_string(&path).ok()?;
        let entry: Entry = serde_json::from_str(&text).ok()?;
        if entry.key != full || sha256_hex(canonical_json(&entry.payload).ok()?.as_bytes()) != entry.checksum {
            return None;
        }
        serde_json::from_value(entry.payload).ok()
    }

    /// Stores a payload. Failures are ignored: the cache is an optimisation.
    pub fn put<T: Serialize>(&self, kind: &str, key: &Value, payload: &T) {
        let full = Self::full_key(kind, key);
        let Some(path) = self.path(kind, &full) else { return };
        let Ok(payload) = serde_json::to_value(payload) else { return };
        let Ok(body) = canonical_json(&payload) else { return };
        let entry = Entry { key: full, checksum: sha256_hex(body.as_bytes()), payload };
        let Ok(text) = canonical_json(&entry) else { return };
        let _ = write_atomic(&path, text.as_bytes());
    }
}

/// Writes a sibling temporary file and renames it over `path`.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    let dir = path.parent().unwrap_or(Path::new("."));
    fs::create_dir_all(dir)?;
    let tmp = dir.join(format!(
        ".{}.{}.{}.tmp",
        path.file_name().and_then(|n| n.to_str()).unwrap_or("entry"),
        std::process::id(),
        TEMP_COUNTER.fetch_add(1, Ordering::Relaxed)
    ));
    fs::write(&tmp, bytes)?;
    fs::rename(&tmp, path).inspect_err(|_| {
        let _ = fs::remove_file(&tmp);
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_and_corruption() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::at(dir.path());
        let key = json!({"N": 14, "k": 6});
        assert_eq!(cache.get::<Vec<String>>("demo", &key), None);
        cache.put("demo", &key, &vec!["1", "-2"]);
        assert_eq!(cache.get::<Vec<String>>("demo", &key), Some(vec!["1".into(), "-2".into()]));
        assert_eq!(cache.get::<Vec<String>>("demo", &json!({"N": 14, "k": 8})), None);
        // corrupt the payload: checksum mismatch is a miss
        let file = fs::read_dir(dir.path().join("demo")).unwrap().next().unwrap().unwrap().path();
        let text = fs::read_to_string(&file).unwrap().replace("-2", "-3");
        fs::write(&file, text).unwrap();
        assert_eq!(cache.get::<Vec<String>>("demo", &key), None);
        assert!(!Cache::disabled().is_enabled());
    }
}

//! On-disk cache of exact coefficient tables.
//!
//! Only the rationals are stored; decimals are re-rendered on every run, so
//! output does not depend on whether the cache was hit.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use ballint_core::Rat;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub const CACHE_ENV: &str = "BALLINT_CACHE_DIR";
const VERSION_TAG: &str = concat!("ballint-", env!("CARGO_PKG_VERSION"));

/// `$BALLINT_CACHE_DIR`, else `$XDG_CACHE_HOME/ballint`, else
/// `$HOME/.cache/ballint`.
pub fn default_dir() -> Option<PathBuf> {
    if let Some(dir) = std::env::var_os(CACHE_ENV).filter(|v| !v.is_empty()) {
        return Some(PathBuf::from(dir));
    }
    if let Some(xdg) = std::env::var_os("XDG_CACHE_HOME").filter(|v| !v.is_empty()) {
        return Some(PathBuf::from(xdg).join("ballint"));
    }
    std::env::var_os("HOME").map(|home| PathBuf::from(home).join(".cache").join("ballint"))
}

/// Identifies one coefficient table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheKey {
    pub pipeline: String,
    pub nu: Option<String>,
    pub m: u32,
    pub k: u32,
}

impl CacheKey {
    /// Hex SHA-256 of the key fields and the code version.
    pub fn digest(&self) -> String {
        let mut h = Sha256::new();
        let nu = self.nu.as_deref().unwrap_or("-");
        h.update(format!("pipeline={};nu={};m={};k={};version={}", self.pipeline, nu, self.m, self.k, VERSION_TAG));
        hex::encode(h.finalize())
    }
}

#[derive(Serialize, Deserialize)]
struct Entry {
    version: String,
    key: CacheKey,
    coefficients: Vec<Rat>,
}

pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn new(dir: PathBuf) -> Self {
        Cache { dir }
    }

    fn path(&self, key: &CacheKey) -> PathBuf {
        self.dir.join(format!("{}.json", key.digest()))
    }

    /// The stored table, or `None` on a miss or an unreadable entry.
    pub fn load(&self, key: &CacheKey) -> Option<Vec<Rat>> {
        let text = fs::read_to_string(self.path(key)).ok()?;
        let entry: Entry = serde_json::from_str(&text).ok()?;
        (entry.version == VERSION_TAG && entry.key == *key).then_some(entry.coefficients)
    }

    pub fn store(&self, key: &CacheKey, coefficients: &[Rat]) -> std::io::Result<()> {
        fs::create_dir_all(&self.dir)?;
        let entry = Entry {
            version: VERSION_TAG.to_string(),
            key: key.clone(),
            coefficients: coefficients.to_vec(),
        };
        let target = self.path(key);
        let tmp = target.with_extension(format!("tmp{}", std::process::id()));
        write_file(&tmp, serde_json::to_string(&entry)?.as_bytes())?;
        fs::rename(&tmp, &target)
    }
}

fn write_file(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    let mut f = fs::File::create(path)?;
    f.write_all(bytes)?;
    f.sync_all()
}

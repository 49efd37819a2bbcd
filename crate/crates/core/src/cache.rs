//! On-disk result cache. Each entry `key` is stored beside `key.sha256`, which
//! holds the hex SHA-256 of the contents; entries whose hash does not match
//! are treated as missing.

use std::fs;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use crate::enumeration::{enumerate_records, EnumerationRecord};
use crate::error::{Error, Result};

pub const CACHE_ENV: &str = "SPECTRAL_LAB_CACHE";

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

#[derive(Debug, Clone)]
pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> Result<Self> {
        let dir = dir.into();
        fs::create_dir_all(&dir)?;
        Ok(Self { dir })
    }

    /// The cache named by `SPECTRAL_LAB_CACHE`, if set and non-empty.
    pub fn from_env() -> Result<Option<Self>> {
        match std::env::var_os(CACHE_ENV) {
            Some(d) if !d.is_empty() => Cache::new(PathBuf::from(d)).map(Some),
            _ => Ok(None),
        }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn paths(&self, key: &str) -> Result<(PathBuf, PathBuf)> {
        if key.is_empty() || key.contains(['/', '\\']) || key.starts_with('.') {
            return Err(Error::InvalidParameter(format!("bad cache key {key:?}")));
        }
        Ok((self.dir.join(key), self.dir.join(format!("{key}.sha256"))))
    }

    /// Writes the entry and its hash; returns the hash.
    pub fn store(&self, key: &str, bytes: &[u8]) -> Result<String> {
        let (data, sum) = self.paths(key)?;
        let hash = sha256_hex(bytes);
        fs::write(&data, bytes)?;
        fs::write(&sum, format!("{hash}  {key}\n"))?;
        Ok(hash)
    }

    /// Contents of a present entry whose hash verifies.
    pub fn load(&self, key: &str) -> Result<Option<Vec<u8>>> {
        let (data, sum) = self.paths(key)?;
        let (Ok(bytes), Ok(recorded)) = (fs::read(&data), fs::read_to_string(&sum)) else {
            return Ok(None);
        };
        let recorded = recorded.split_whitespace().next().unwrap_or("");
        Ok((recorded == sha256_hex(&bytes)).then_some(bytes))
    }
}

/// Enumeration records for order `n`, read from or written to `cache`.
pub fn cached_records(n: usize, cache: Option<&Cache>) -> Result<Vec<EnumerationRecord>> {
    let key = format!("cubic_bipartite_n{n}.json");
    if let Some(c) = cache {
        if let Some(bytes) = c.load(&key)? {
            if let Ok(records) = serde_json::from_slice(&bytes) {
                return Ok(records);
            }
        }
    }
    let records = enumerate_records(n)?;
    if let Some(c) = cache {
        c.store(&key, serde_json::to_string_pretty(&records)?.as_bytes())?;
    }
    Ok(records)
}

//! On-disk cache of finished certificates.
//!
//! Entries are keyed by the SHA-256 of the crate version, row, parameters and the
//! contents of any imported generator files. Unreadable entries are rebuilt.

use std::fs;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use crate::error::Result;
use crate::verify::{FactorizationCertificate, RowParams};

pub const CACHE_DIR_ENV: &str = "UNIFACT_CACHE_DIR";

#[derive(Debug)]
pub enum Lookup {
    Hit(Vec<FactorizationCertificate>),
    Miss,
    Corrupt(String),
}

#[derive(Clone, Debug)]
pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    /// `dir`, else `$UNIFACT_CACHE_DIR`, else a directory under the system temp dir.
    pub fn new(dir: Option<&Path>) -> Self {
        let dir = match dir {
            Some(d) => d.to_path_buf(),
            None => std::env::var_os(CACHE_DIR_ENV)
                .map(PathBuf::from)
                .unwrap_or_else(|| std::env::temp_dir().join("unifact-cache")),
        };
        Cache { dir }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn key(row: usize, params: &RowParams) -> Result<String> {
        let mut h = Sha256::new();
        h.update(env!("CARGO_PKG_VERSION").as_bytes());
        h.update(row.to_le_bytes());
        h.update(serde_json::to_vec(params).expect("params serialize"));
        for path in params.import_h.iter().chain(&params.import_k) {
            h.update(fs::read(path)?);
        }
        Ok(h.finalize().iter().map(|b| format!("{b:02x}")).collect())
    }

    fn path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.json"))
    }

    pub fn load(&self, key: &str) -> Lookup {
        let path = self.path(key);
        let text = match fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Lookup::Miss,
            Err(e) => return Lookup::Corrupt(format!("{}: {e}", path.display())),
        };
        match serde_json::from_str(&text) {
            Ok(certs) => Lookup::Hit(certs),
            Err(e) => Lookup::Corrupt(format!("{}: {e}", path.display())),
        }
    }

    pub fn store(&self, key: &str, certs: &[FactorizationCertificate]) -> Result<()> {
        fs::create_dir_all(&self.dir)?;
        let tmp = self.dir.join(format!("{key}.tmp{}", std::process::id()));
        fs::write(
            &tmp,
            serde_json::to_vec(certs).expect("certificates serialize"),
        )?;
        fs::rename(tmp, self.path(key))?;
        Ok(())
    }

    /// Removes every cached entry; returns how many were removed.
    pub fn purge(&self) -> Result<usize> {
        let entries = match fs::read_dir(&self.dir) {
            Ok(e) => e,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(0),
            Err(e) => return Err(e.into()),
        };
        let mut removed = 0;
        for entry in entries {
            let path = entry?.path();
            if path.extension().is_some_and(|x| x == "json") {
                fs::remove_file(path)?;
                removed += 1;
            }
        }
        Ok(removed)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::Params;

    #[test]
    fn store_load_purge() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(Some(dir.path()));
        let params = RowParams::new(2, Some(2));
        let key = Cache::key(1, &params).unwrap();
        assert!(matches!(cache.load(&key), Lookup::Miss));
        let cert = FactorizationCertificate::inconclusive("x", Params::default(), "reason");
        cache.store(&key, &[cert]).unwrap();
        match cache.load(&key) {
            Lookup::Hit(c) => assert_eq!(c[0].label, "x"),
            other => panic!("{other:?}"),
        }
        fs::write(cache.path(&key), "{not json").unwrap();
        assert!(matches!(cache.load(&key), Lookup::Corrupt(_)));
        assert_eq!(cache.purge().unwrap(), 1);
        assert!(matches!(cache.load(&key), Lookup::Miss));
    }

    #[test]
    fn key_depends_on_seed() {
        let a = RowParams::new(2, Some(2));
        let mut b = a.clone();
        b.seed += 1;
        assert_ne!(Cache::key(1, &a).unwrap(), Cache::key(1, &b).unwrap());
    }
}

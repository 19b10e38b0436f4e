//! Persistent store of completed factorizations.
//!
//! The file is append-only text, one entry per line:
//!
//! ```text
//! 58250 = 2^1 * 5^3 * 233^1
//! ```
//!
//! Lines that fail to parse, or whose primes do not multiply back to the
//! left-hand side, are skipped on load and counted in [`FactorCache::skipped`].

use std::collections::HashMap;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::sync::{Mutex, RwLock};

use num_bigint::BigUint;

use super::factor::{factorize, Budget, FactorMap};
use crate::error::{Error, Result};

/// Environment variable naming the default cache file.
pub const CACHE_ENV: &str = "SUPERSPLIT_FACTOR_CACHE";

#[derive(Debug, Default)]
pub struct FactorCache {
    path: Option<PathBuf>,
    entries: RwLock<HashMap<BigUint, FactorMap>>,
    writer: Mutex<Option<File>>,
    skipped: usize,
}

impl FactorCache {
    /// Cache that never touches the filesystem.
    pub fn in_memory() -> Self {
        Self::default()
    }

    /// Loads `path` if it exists. The file is created on the first write.
    pub fn open(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref().to_path_buf();
        let io_err = |source| Error::Cache { path: path.clone(), source };
        let mut entries = HashMap::new();
        let mut skipped = 0;
        match File::open(&path) {
            Ok(file) => {
                for line in BufReader::new(file).lines() {
                    let line = line.map_err(io_err)?;
                    if line.trim().is_empty() {
                        continue;
                    }
                    match parse_line(&line) {
                        Ok(f) => {
                            entries.insert(f.n().clone(), f);
                        }
                        Err(_) => skipped += 1,
                    }
                }
            }
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => {}
            Err(e) => return Err(io_err(e)),
        }
        Ok(FactorCache {
            path: Some(path),
            entries: RwLock::new(entries),
            writer: Mutex::new(None),
            skipped,
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

    /// Lines rejected while loading.
    pub fn skipped(&self) -> usize {
        self.skipped
    }

    pub fn get(&self, n: &BigUint) -> Option<FactorMap> {
        self.entries.read().unwrap().get(n).cloned()
    }

    /// Records a complete factorization; incomplete ones and repeats are ignored.
    pub fn insert(&self, f: &FactorMap) -> Result<()> {
        if !f.is_complete() || f.factors().is_empty() {
            return Ok(());
        }
        {
            let mut entries = self.entries.write().unwrap();
            if entries.contains_key(f.n()) {
                return Ok(());
            }
            entries.insert(f.n().clone(), f.clone());
        }
        let Some(path) = &self.path else {
            return Ok(());
        };
        let io_err = |source| Error::Cache { path: path.clone(), source };
        let mut writer = self.writer.lock().unwrap();
        if writer.is_none() {
            if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                std::fs::create_dir_all(dir).map_err(io_err)?;
            }
            let file = OpenOptions::new().create(true).append(true).open(path).map_err(io_err)?;
            *writer = Some(file);
        }
        let file = writer.as_mut().expect("opened above");
        writeln!(file, "{f}").map_err(io_err)?;
        file.flush().map_err(io_err)
    }

    /// Cached lookup, falling back to [`factorize`] and recording the result.
    pub fn factorize(&self, n: &BigUint, budget: &Budget) -> Result<FactorMap> {
        if let Some(f) = self.get(n) {
            return Ok(f);
        }
        let f = factorize(n, budget)?;
        self.insert(&f)?;
        Ok(f)
    }
}

/// Parses one cache line. Exponents may be omitted (`p` means `p^1`).
pub fn parse_line(line: &str) -> Result<FactorMap> {
    let bad = || Error::Parse(format!("malformed cache line: {line:?}"));
    let (lhs, rhs) = line.split_once('=').ok_or_else(bad)?;
    let n: BigUint = lhs.trim().parse().map_err(|_| bad())?;
    let mut factors = Vec::new();
    for term in rhs.split('*').map(str::trim).filter(|t| !t.is_empty()) {
        let (p, e) = match term.split_once('^') {
            Some((p, e)) => (p.trim(), e.trim().parse::<u32>().map_err(|_| bad())?),
            None => (term, 1),
        };
        factors.push((p.parse::<BigUint>().map_err(|_| bad())?, e));
    }
    FactorMap::new(n, factors, None)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_accepts_bare_primes() {
        let f = parse_line("58250 = 2 * 5^3 * 233").unwrap();
        assert_eq!(f.to_string(), "58250 = 2^1 * 5^3 * 233^1");
        assert!(parse_line("1 = ").is_ok());
    }

    #[test]
    fn parse_rejects_wrong_product() {
        assert!(parse_line("58251 = 2 * 5^3 * 233").is_err());
        assert!(parse_line("12 = 4 * 3").is_err());
        assert!(parse_line("garbage").is_err());
    }

    #[test]
    fn persists_and_reloads() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("sub").join("factors.txt");
        let cache = FactorCache::open(&path).unwrap();
        assert!(cache.is_empty());
        let n = BigUint::from(262_125u32);
        let f = cache.factorize(&n, &Budget::default()).unwrap();
        cache.factorize(&n, &Budget::default()).unwrap();
        drop(cache);

        let text = std::fs::read_to_string(&path).unwrap();
        assert_eq!(text, "262125 = 3^2 * 5^3 * 233^1\n");

        std::fs::write(&path, format!("{text}not a line\n7 = 3\n")).unwrap();
        let reloaded = FactorCache::open(&path).unwrap();
        assert_eq!(reloaded.len(), 1);
        assert_eq!(reloaded.skipped(), 2);
        assert_eq!(reloaded.get(&n), Some(f));
    }

    #[test]
    fn incomplete_results_not_recorded() {
        let cache = FactorCache::in_memory();
        let n: BigUint = "13043817825332782212349".parse::<BigUint>().unwrap() * 1000000007u32;
        let f = cache.factorize(&n, &Budget::iterations(1)).unwrap();
        if !f.is_complete() {
            assert!(cache.get(&n).is_none());
        }
    }
}

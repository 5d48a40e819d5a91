//! Persistent store for solver output.
//!
//! One text file per key: a `solver-version <int>` header followed by the
//! solution in the ordinary certificate format (the layer as host, the
//! solved factors as blocks). Entries re-verify on load and anything stale,
//! tampered with or unparsable is treated as a miss, so a cache can never
//! smuggle an unchecked solution into an assembly.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use crate::certificate;
use crate::factor::{verify_decomposition, Decomposition};

/// Bumped whenever solver output changes shape or meaning; older entries
/// are ignored rather than migrated.
pub const SOLVER_VERSION: u32 = 1;

/// Identifies one solver invocation's output.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CacheKey {
    pub kind: &'static str,
    pub m: u32,
    pub n: u32,
    pub values: Vec<u32>,
    pub version: u32,
}

impl CacheKey {
    pub fn file_name(&self) -> String {
        let vals: Vec<String> = self.values.iter().map(|v| v.to_string()).collect();
        format!(
            "{}-m{}-n{}-d{}-v{}.cert",
            self.kind,
            self.m,
            self.n,
            vals.join("_"),
            self.version
        )
    }
}

#[derive(Clone, Debug)]
pub struct SolutionCache {
    dir: PathBuf,
}

impl SolutionCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        SolutionCache { dir: dir.into() }
    }

    /// Resolution order for the cache directory: explicit flag, the
    /// `HWP_CACHE_DIR` environment variable, then a per-user cache path.
    pub fn resolve(flag: Option<PathBuf>) -> Self {
        if let Some(dir) = flag {
            return SolutionCache::new(dir);
        }
        if let Some(dir) = std::env::var_os("HWP_CACHE_DIR") {
            return SolutionCache::new(PathBuf::from(dir));
        }
        let base = std::env::var_os("XDG_CACHE_HOME")
            .map(PathBuf::from)
            .or_else(|| std::env::var_os("HOME").map(|h| PathBuf::from(h).join(".cache")))
            .unwrap_or_else(|| PathBuf::from(".hwp-cache"));
        SolutionCache::new(base.join("hwp16"))
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    /// Load and revalidate an entry. Any failure (missing, version skew,
    /// parse error, verification failure, key mismatch) is a miss; only
    /// tampering is worth a warning.
    pub fn lookup(&self, key: &CacheKey) -> Option<Decomposition> {
        let path = self.dir.join(key.file_name());
        let text = fs::read_to_string(&path).ok()?;
        let (header, body) = text.split_once('\n')?;
        let version: u32 = header.strip_prefix("solver-version ")?.trim().parse().ok()?;
        if version != key.version {
            return None;
        }
        let d = match certificate::parse(body) {
            Ok(d) => d,
            Err(e) => {
                eprintln!("warning: cache entry {} unreadable ({e}); ignoring", path.display());
                return None;
            }
        };
        if d.host.m() != key.m || d.host.n() != key.n {
            eprintln!("warning: cache entry {} keyed wrongly; ignoring", path.display());
            return None;
        }
        match verify_decomposition(&d) {
            Ok(_) => Some(d),
            Err(v) => {
                eprintln!(
                    "warning: cache entry {} fails verification ({v}); ignoring",
                    path.display()
                );
                None
            }
        }
    }

    /// Atomically persist an entry (temp file + rename). Concurrent writers
    /// may race; last writer wins, which is fine because every stored value
    /// is a verified solution for the same key.
    pub fn store(&self, key: &CacheKey, d: &Decomposition) -> std::io::Result<()> {
        fs::create_dir_all(&self.dir)?;
        let body = certificate::serialize(d)
            .map_err(|e| std::io::Error::new(std::io::ErrorKind::InvalidData, e.to_string()))?;
        let final_path = self.dir.join(key.file_name());
        let tmp_path = self.dir.join(format!(".{}.tmp-{}", key.file_name(), std::process::id()));
        {
            let mut f = fs::File::create(&tmp_path)?;
            writeln!(f, "solver-version {}", key.version)?;
            f.write_all(body.as_bytes())?;
            f.sync_all()?;
        }
        fs::rename(&tmp_path, &final_path)
    }

    /// Cache entries present on disk, sorted by file name.
    pub fn entries(&self) -> Vec<String> {
        let mut names: Vec<String> = fs::read_dir(&self.dir)
            .map(|rd| {
                rd.filter_map(|e| e.ok())
                    .filter_map(|e| e.file_name().into_string().ok())
                    .filter(|n| n.ends_with(".cert"))
                    .collect()
            })
            .unwrap_or_default();
        names.sort();
        names
    }

    /// Remove all cache entries; returns how many were deleted.
    pub fn clear(&self) -> std::io::Result<usize> {
        let mut removed = 0;
        if let Ok(rd) = fs::read_dir(&self.dir) {
            for entry in rd.filter_map(|e| e.ok()) {
                if entry.file_name().to_string_lossy().ends_with(".cert") {
                    fs::remove_file(entry.path())?;
                    removed += 1;
                }
            }
        }
        Ok(removed)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pattern::{
        pattern_row_from_factor, pattern_to_factors, solve_row_monotone, DifferenceMultiset,
    };

    fn pattern_entry(m: u32, cols: &[i64]) -> (CacheKey, Decomposition) {
        let ds = DifferenceMultiset::new(16, cols).unwrap();
        let p = solve_row_monotone(m, 16, &ds, 0).unwrap();
        let factors = pattern_to_factors(&p, &format!("pattern{}", ds.token())).unwrap();
        let mut d = Decomposition::new(ds.layer(m));
        d.cycle_factors = factors;
        let key = CacheKey {
            kind: "row-monotone",
            m,
            n: 16,
            values: ds.values().to_vec(),
            version: SOLVER_VERSION,
        };
        (key, d)
    }

    #[test]
    fn store_then_lookup_round_trips_the_pattern() {
        let tmp = tempfile::tempdir().unwrap();
        let cache = SolutionCache::new(tmp.path());
        let (key, d) = pattern_entry(9, &[0, 2, -2]);
        cache.store(&key, &d).unwrap();
        let loaded = cache.lookup(&key).unwrap();
        assert_eq!(loaded, d);
        // Identical pattern, factor by factor.
        for (a, b) in loaded.cycle_factors.iter().zip(&d.cycle_factors) {
            assert_eq!(
                pattern_row_from_factor(a, 9, 16),
                pattern_row_from_factor(b, 9, 16)
            );
        }
        assert_eq!(cache.entries().len(), 1);
    }

    #[test]
    fn version_bump_is_a_miss() {
        let tmp = tempfile::tempdir().unwrap();
        let cache = SolutionCache::new(tmp.path());
        let (key, d) = pattern_entry(9, &[0, 3, -3]);
        cache.store(&key, &d).unwrap();
        let newer = CacheKey { version: key.version + 1, ..key.clone() };
        assert!(cache.lookup(&newer).is_none());
        assert!(cache.lookup(&key).is_some());
    }

    #[test]
    fn tampered_entry_is_a_miss() {
        let tmp = tempfile::tempdir().unwrap();
        let cache = SolutionCache::new(tmp.path());
        let (key, d) = pattern_entry(9, &[0, 6, -6]);
        cache.store(&key, &d).unwrap();
        let path = tmp.path().join(key.file_name());
        // Swap two column labels inside one cycle line: still parses, no
        // longer verifies.
        let text = fs::read_to_string(&path).unwrap();
        let tampered = text.replacen("cycle 0:0", "cycle 0:1", 1);
        fs::write(&path, tampered).unwrap();
        assert!(cache.lookup(&key).is_none());
    }

    #[test]
    fn clear_removes_entries() {
        let tmp = tempfile::tempdir().unwrap();
        let cache = SolutionCache::new(tmp.path());
        let (key, d) = pattern_entry(11, &[0, 2, -2]);
        cache.store(&key, &d).unwrap();
        assert_eq!(cache.clear().unwrap(), 1);
        assert!(cache.entries().is_empty());
    }
}

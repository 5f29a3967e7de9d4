//! Append-only NDJSON store of finished searches, keyed by `(lambda, n)`.

use std::collections::HashMap;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::sync::{Mutex, RwLock};

use serde::{Deserialize, Serialize};

use super::BestUnderResult;
use crate::egyptian::UnitSeq;
use crate::error::{Error, Result};
use crate::numeric::Rational;

/// One line of the cache file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheRecord {
    pub lambda: Rational,
    pub n: usize,
    pub sum: Rational,
    pub witness: UnitSeq,
    #[serde(default)]
    pub ties: Vec<UnitSeq>,
    #[serde(default)]
    pub ties_truncated: bool,
    #[serde(default)]
    pub nodes: u64,
    pub complete: bool,
}

impl CacheRecord {
    pub fn from_result(r: &BestUnderResult) -> Self {
        CacheRecord {
            lambda: r.lambda.clone(),
            n: r.n,
            sum: r.optimum_sum.clone(),
            witness: r.canonical_witness.clone(),
            ties: r.ties.clone(),
            ties_truncated: r.ties_truncated,
            nodes: r.nodes_explored,
            complete: r.complete,
        }
    }

    pub fn to_result(&self) -> BestUnderResult {
        BestUnderResult {
            n: self.n,
            lambda: self.lambda.clone(),
            optimum_sum: self.sum.clone(),
            canonical_witness: self.witness.clone(),
            ties: self.ties.clone(),
            ties_truncated: self.ties_truncated,
            nodes_explored: self.nodes,
            complete: self.complete,
        }
    }
}

/// Later lines win. Only complete results are stored.
pub struct ResultCache {
    path: PathBuf,
    records: RwLock<HashMap<(Rational, usize), CacheRecord>>,
    writer: Mutex<File>,
}

impl ResultCache {
    /// Load `path`, creating it if missing. A malformed line is an error.
    pub fn open(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref().to_path_buf();
        let writer = OpenOptions::new()
            .create(true)
            .append(true)
            .read(true)
            .open(&path)
            .map_err(Error::io)?;
        let mut records = HashMap::new();
        for (i, line) in BufReader::new(File::open(&path).map_err(Error::io)?)
            .lines()
            .enumerate()
        {
            let line = line.map_err(Error::io)?;
            if line.trim().is_empty() {
                continue;
            }
            let rec: CacheRecord = serde_json::from_str(&line)
                .map_err(|e| Error::invalid(format!("{}:{}: {e}", path.display(), i + 1)))?;
            if rec.complete {
                records.insert((rec.lambda.clone(), rec.n), rec);
            }
        }
        Ok(ResultCache {
            path,
            records: RwLock::new(records),
            writer: Mutex::new(writer),
        })
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn len(&self) -> usize {
        self.records.read().expect("cache lock").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn get(&self, lambda: &Rational, n: usize) -> Option<CacheRecord> {
        self.records
            .read()
            .expect("cache lock")
            .get(&(lambda.clone(), n))
            .cloned()
    }

    /// Append `result` unless it is incomplete. Returns whether it was written.
    pub fn insert(&self, result: &BestUnderResult) -> Result<bool> {
        if !result.complete {
            return Ok(false);
        }
        let rec = CacheRecord::from_result(result);
        let mut line = serde_json::to_string(&rec).map_err(|e| Error::invalid(e.to_string()))?;
        line.push('\n');
        {
            let mut w = self.writer.lock().expect("cache writer");
            w.write_all(line.as_bytes()).map_err(Error::io)?;
            w.flush().map_err(Error::io)?;
        }
        self.records
            .write()
            .expect("cache lock")
            .insert((rec.lambda.clone(), rec.n), rec);
        Ok(true)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::best_under::{best_under, SearchConfig};
    use crate::numeric::rational::q;

    #[test]
    fn round_trip_through_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cache.ndjson");
        let r = best_under(&q("10/61"), 2, &SearchConfig::default()).unwrap();
        {
            let cache = ResultCache::open(&path).unwrap();
            assert!(cache.is_empty());
            assert!(cache.insert(&r).unwrap());
        }
        let text = std::fs::read_to_string(&path).unwrap();
        assert!(text.starts_with(r#"{"lambda":"10/61","n":2,"sum":"28/171","witness":["9","19"]"#));
        let cache = ResultCache::open(&path).unwrap();
        assert_eq!(cache.get(&q("10/61"), 2).unwrap().to_result(), r);
        assert!(cache.get(&q("10/61"), 3).is_none());
        let incomplete = BestUnderResult {
            complete: false,
            ..r
        };
        assert!(!cache.insert(&incomplete).unwrap());
    }

    #[test]
    fn cached_search_and_probe_resume() {
        let dir = tempfile::tempdir().unwrap();
        let cache = ResultCache::open(dir.path().join("c.ndjson")).unwrap();
        let cfg = SearchConfig::default();
        let first = crate::best_under::eventually_greedy_probe_cached(&q("10/61"), 3, &cfg, &cache)
            .unwrap();
        assert_eq!(cache.len(), 3);
        let again = crate::best_under::eventually_greedy_probe_cached(&q("10/61"), 3, &cfg, &cache)
            .unwrap();
        assert_eq!(first, again);
        let plain = crate::best_under::best_under_cached(&q("10/61"), 2, &cfg, &cache).unwrap();
        assert!(plain.ties.is_empty());
        let tied =
            crate::best_under::best_under_cached(&q("10/61"), 2, &cfg.with_ties(), &cache).unwrap();
        assert_eq!(tied.ties.len(), 1);
        assert_eq!(cache.get(&q("10/61"), 2).unwrap().ties.len(), 1);
    }

    #[test]
    fn malformed_line_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.ndjson");
        std::fs::write(&path, "{not json}\n").unwrap();
        assert!(matches!(
            ResultCache::open(&path),
            Err(Error::InvalidInput(_))
        ));
    }
}

//! Component management relation: how many times each component was reused,
//! persisted as a small JSON file.
//!
//! The ledger has a single-writer contract. Saves replace the file
//! atomically (temp file, fsync, rename), so readers see either the old or
//! the new ledger, but concurrent writers are not coordinated and the last
//! rename wins.

use std::collections::BTreeMap;
use std::fs::{self, File};
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const DEFAULT_LEDGER_PATH: &str = "./compmetrics-ledger";

#[derive(Debug, Error)]
pub enum LedgerError {
    #[error("reuse delta must be at least 1")]
    InvalidDelta,
    #[error("ledger has no entries")]
    EmptyLedger,
    #[error("ledger `{path}` is corrupt: {message}")]
    Corrupt { path: PathBuf, message: String },
    #[error("ledger `{path}`: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
}

impl LedgerError {
    pub fn code(&self) -> &'static str {
        match self {
            LedgerError::InvalidDelta => "invalid_delta",
            LedgerError::EmptyLedger => "empty_ledger",
            LedgerError::Corrupt { .. } => "ledger_corrupt",
            LedgerError::Io { .. } => "io_error",
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReuseLedger {
    pub entries: BTreeMap<String, u64>,
    #[serde(default)]
    pub updated_at: String,
}

impl ReuseLedger {
    pub fn from_counts<'a>(counts: impl IntoIterator<Item = (&'a str, u64)>) -> Self {
        Self {
            entries: counts
                .into_iter()
                .map(|(name, count)| (name.to_string(), count))
                .collect(),
            updated_at: String::new(),
        }
    }

    pub fn count(&self, component: &str) -> u64 {
        self.entries.get(component).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.entries.values().sum()
    }
}

/// Add `delta` reuses of `component`; unseen components start at `delta`.
pub fn record_reuse(
    ledger: &ReuseLedger,
    component: &str,
    delta: u64,
) -> Result<ReuseLedger, LedgerError> {
    if delta == 0 {
        return Err(LedgerError::InvalidDelta);
    }
    let mut next = ledger.clone();
    let entry = next.entries.entry(component.to_string()).or_insert(0);
    *entry = entry.saturating_add(delta);
    Ok(next)
}

/// How low a reuse count must be for a component to count as a victim.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum VictimRule {
    /// Strictly below the median of all counts.
    #[default]
    BelowMedian,
    /// Strictly below the given count.
    BelowThreshold(u64),
}

/// Rarely reused components, ascending by count then name.
pub fn victims(ledger: &ReuseLedger, rule: VictimRule) -> Result<Vec<(String, u64)>, LedgerError> {
    if ledger.entries.is_empty() {
        return Err(LedgerError::EmptyLedger);
    }
    let is_victim: Box<dyn Fn(u64) -> bool> = match rule {
        VictimRule::BelowThreshold(t) => Box::new(move |count| count < t),
        VictimRule::BelowMedian => {
            let mut counts: Vec<u64> = ledger.entries.values().copied().collect();
            counts.sort_unstable();
            let n = counts.len();
            // Twice the median, to stay in integers for even-sized ledgers.
            let doubled = if n % 2 == 1 {
                2 * counts[n / 2] as u128
            } else {
                counts[n / 2 - 1] as u128 + counts[n / 2] as u128
            };
            Box::new(move |count| 2 * (count as u128) < doubled)
        }
    };
    let mut out: Vec<(String, u64)> = ledger
        .entries
        .iter()
        .filter(|(_, count)| is_victim(**count))
        .map(|(name, count)| (name.clone(), *count))
        .collect();
    out.sort_by(|a, b| a.1.cmp(&b.1).then_with(|| a.0.cmp(&b.0)));
    Ok(out)
}

/// Read a ledger. A missing file is an empty ledger.
pub fn load_ledger(path: &Path) -> Result<ReuseLedger, LedgerError> {
    let bytes = match fs::read(path) {
        Ok(bytes) => bytes,
        Err(e) if e.kind() == io::ErrorKind::NotFound => return Ok(ReuseLedger::default()),
        Err(source) => {
            return Err(LedgerError::Io {
                path: path.to_path_buf(),
                source,
            })
        }
    };
    serde_json::from_slice(&bytes).map_err(|e| LedgerError::Corrupt {
        path: path.to_path_buf(),
        message: e.to_string(),
    })
}

pub fn save_ledger(ledger: &ReuseLedger, path: &Path) -> Result<(), LedgerError> {
    let io_err = |source| LedgerError::Io {
        path: path.to_path_buf(),
        source,
    };
    let mut data = serde_json::to_vec_pretty(ledger).expect("in-memory JSON serialization");
    data.push(b'\n');

    let mut tmp_name = path.file_name().unwrap_or_default().to_os_string();
    tmp_name.push(".tmp");
    let tmp = path.with_file_name(tmp_name);

    let mut file = File::create(&tmp).map_err(io_err)?;
    file.write_all(&data).map_err(io_err)?;
    file.sync_all().map_err(io_err)?;
    drop(file);
    fs::rename(&tmp, path).map_err(io_err)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table_one() -> ReuseLedger {
        ReuseLedger::from_counts([("Webtier", 12), ("Businesstier", 5), ("DAO", 18)])
    }

    #[test]
    fn record_initializes_and_increments() {
        let ledger = record_reuse(&ReuseLedger::default(), "DAO", 1).unwrap();
        assert_eq!(ledger.entries, BTreeMap::from([("DAO".to_string(), 1)]));
        let ledger =
            record_reuse(&ReuseLedger::from_counts([("Webtier", 11)]), "Webtier", 1).unwrap();
        assert_eq!(ledger.count("Webtier"), 12);
    }

    #[test]
    fn eighteen_unit_reuses() {
        let mut ledger = ReuseLedger::default();
        for _ in 0..18 {
            ledger = record_reuse(&ledger, "DAO", 1).unwrap();
        }
        assert_eq!(ledger.count("DAO"), 18);
    }

    #[test]
    fn zero_delta_rejected() {
        assert_eq!(
            record_reuse(&ReuseLedger::default(), "DAO", 0)
                .unwrap_err()
                .code(),
            "invalid_delta"
        );
    }

    #[test]
    fn below_median_victim() {
        assert_eq!(
            victims(&table_one(), VictimRule::BelowMedian).unwrap(),
            vec![("Businesstier".to_string(), 5)]
        );
    }

    #[test]
    fn even_sized_median_uses_midpoint() {
        let ledger = ReuseLedger::from_counts([("A", 1), ("B", 2), ("C", 4), ("D", 100)]);
        // median 3
        let names: Vec<String> = victims(&ledger, VictimRule::BelowMedian)
            .unwrap()
            .into_iter()
            .map(|(n, _)| n)
            .collect();
        assert_eq!(names, ["A", "B"]);
    }

    #[test]
    fn equal_counts_have_no_victims() {
        let ledger = ReuseLedger::from_counts([("A", 4), ("B", 4), ("C", 4)]);
        assert!(victims(&ledger, VictimRule::BelowMedian)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn threshold_rule() {
        let ledger = ReuseLedger::from_counts([("A", 1), ("B", 2), ("C", 3), ("D", 100)]);
        assert_eq!(
            victims(&ledger, VictimRule::BelowThreshold(3)).unwrap(),
            vec![("A".to_string(), 1), ("B".to_string(), 2)]
        );
    }

    #[test]
    fn empty_ledger_has_no_median() {
        assert_eq!(
            victims(&ReuseLedger::default(), VictimRule::BelowMedian)
                .unwrap_err()
                .code(),
            "empty_ledger"
        );
    }

    #[test]
    fn persistence() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("ledger");
        assert_eq!(load_ledger(&path).unwrap(), ReuseLedger::default());

        let mut ledger = table_one();
        ledger.updated_at = "2026-01-01T00:00:00Z".into();
        save_ledger(&ledger, &path).unwrap();
        assert_eq!(load_ledger(&path).unwrap(), ledger);
        assert!(!dir.path().join("ledger.tmp").exists());

        fs::write(&path, r#"{"entries": {"DAO": -3}, "updated_at": ""}"#).unwrap();
        assert_eq!(load_ledger(&path).unwrap_err().code(), "ledger_corrupt");
    }
}

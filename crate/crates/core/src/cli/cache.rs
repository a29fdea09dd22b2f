//! Append-only JSONL cache of sequence records.

use std::collections::BTreeMap;
use std::fs::OpenOptions;
use std::io::Write;
use std::path::{Path, PathBuf};

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::{parse_bigint, Rational};
use crate::linearforms::{jj_form, lcm_range, LinearFormZ3};

#[derive(Serialize, Deserialize)]
struct CacheLine {
    n: String,
    #[serde(rename = "A")]
    a: String,
    #[serde(rename = "B")]
    b: String,
    d: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CachedRecord {
    pub a: BigInt,
    pub b: BigInt,
    pub d: BigInt,
}

impl CachedRecord {
    fn from_form(n: u64, form: &LinearFormZ3) -> Self {
        Self {
            a: form.scaled_alpha(),
            b: form.beta().clone(),
            d: lcm_range(n),
        }
    }

    fn form(&self) -> Result<LinearFormZ3> {
        let dcube = num_traits::pow(self.d.clone(), 3);
        LinearFormZ3::new(self.b.clone(), Rational::new(self.a.clone(), dcube.clone()), dcube)
    }
}

/// File-backed map n → (A_n, B_n, d_n).
#[derive(Debug)]
pub struct SequenceCache {
    path: PathBuf,
    entries: BTreeMap<u64, CachedRecord>,
    /// Lines skipped on load because they did not parse.
    pub skipped_lines: usize,
}

impl SequenceCache {
    /// Reads the cache, creating nothing if the file is absent. Malformed
    /// lines (for instance a torn final write) are skipped. With `verify`,
    /// every entry is recomputed and a mismatch is an [`Error::Invariant`].
    pub fn load(path: &Path, verify: bool) -> Result<Self> {
        let text = match std::fs::read_to_string(path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => String::new(),
            Err(e) => return Err(Error::Parse(format!("{}: {e}", path.display()))),
        };
        let mut entries = BTreeMap::new();
        let mut skipped_lines = 0;
        for line in text.lines().filter(|l| !l.trim().is_empty()) {
            match parse_line(line) {
                Some((n, rec)) => {
                    entries.insert(n, rec);
                }
                None => skipped_lines += 1,
            }
        }
        if verify {
            for (&n, rec) in &entries {
                let fresh = CachedRecord::from_form(n, &jj_form(n)?);
                if &fresh != rec {
                    return Err(Error::Invariant(format!("cache entry n={n} does not match a fresh computation")));
                }
            }
        }
        Ok(Self {
            path: path.to_owned(),
            entries,
            skipped_lines,
        })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, n: u64) -> Option<&CachedRecord> {
        self.entries.get(&n)
    }

    /// The n-th linear form, from the cache or freshly computed and appended.
    pub fn form(&mut self, n: u64) -> Result<LinearFormZ3> {
        if let Some(rec) = self.entries.get(&n) {
            return rec.form();
        }
        let form = jj_form(n)?;
        let rec = CachedRecord::from_form(n, &form);
        self.append(n, &rec)?;
        self.entries.insert(n, rec);
        Ok(form)
    }

    fn append(&self, n: u64, rec: &CachedRecord) -> Result<()> {
        let line = CacheLine {
            n: n.to_string(),
            a: rec.a.to_string(),
            b: rec.b.to_string(),
            d: rec.d.to_string(),
        };
        let mut text = serde_json::to_string(&line).expect("cache line serializes");
        text.push('\n');
        let io = |e: std::io::Error| Error::Parse(format!("{}: {e}", self.path.display()));
        let mut f = OpenOptions::new().create(true).append(true).open(&self.path).map_err(io)?;
        // one write per line so an interruption never splits two records
        f.write_all(text.as_bytes()).map_err(io)
    }
}

fn parse_line(line: &str) -> Option<(u64, CachedRecord)> {
    let l: CacheLine = serde_json::from_str(line).ok()?;
    Some((
        l.n.parse().ok()?,
        CachedRecord {
            a: parse_bigint(&l.a).ok()?,
            b: parse_bigint(&l.b).ok()?,
            d: parse_bigint(&l.d).ok()?,
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn populate_reload_verify() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("seq.jsonl");
        let mut c = SequenceCache::load(&path, false).unwrap();
        assert!(c.is_empty());
        let f2 = c.form(2).unwrap();
        c.form(5).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert_eq!(text.lines().next().unwrap(), r#"{"n":"2","A":"-1404","B":"146","d":"2"}"#);

        let mut again = SequenceCache::load(&path, true).unwrap();
        assert_eq!(again.len(), 2);
        assert_eq!(again.form(2).unwrap(), f2);
        assert_eq!(std::fs::read_to_string(&path).unwrap(), text);
    }

    #[test]
    fn torn_line_is_skipped_and_tampering_caught() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("seq.jsonl");
        std::fs::write(&path, "{\"n\":\"1\",\"A\":\"-12\",\"B\":\"10\",\"d\":\"1\"}\n{\"n\":\"2\",\"A").unwrap();
        let c = SequenceCache::load(&path, true).unwrap();
        assert_eq!((c.len(), c.skipped_lines), (1, 1));

        std::fs::write(&path, "{\"n\":\"1\",\"A\":\"-11\",\"B\":\"10\",\"d\":\"1\"}\n").unwrap();
        assert!(SequenceCache::load(&path, false).is_ok());
        assert!(matches!(SequenceCache::load(&path, true), Err(Error::Invariant(_))));
    }
}

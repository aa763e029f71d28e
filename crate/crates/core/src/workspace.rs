//! On-disk layout: generated modules under `vuln_modules/` and the counter
//! in `vuln_counter.txt`, both beneath one root directory.

use std::collections::BTreeSet;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use num_bigint::BigUint;
use thiserror::Error;

use crate::census::CensusReport;
use crate::counter::{CounterStore, COUNTER_FILE};
use crate::factory::{parse_canonical_decimal, render_module};
use crate::{Error, Result};

pub const MODULES_DIR: &str = "vuln_modules";

#[derive(Clone, Debug)]
pub struct Workspace {
    root: PathBuf,
}

/// Generation stopped part way; `written` lists modules already on disk.
#[derive(Debug, Error)]
#[error("generation stopped after {} module(s): {source}", written.len())]
pub struct GenerateError {
    pub written: Vec<PathBuf>,
    #[source]
    pub source: Error,
}

#[derive(Clone, Debug)]
pub struct WorkspaceCensus {
    pub report: CensusReport,
    /// Module files found on disk.
    pub module_files: usize,
    /// Set when the counter and the module directory disagree.
    pub warning: Option<String>,
}

impl Workspace {
    pub fn new(root: impl Into<PathBuf>) -> Self {
        Workspace { root: root.into() }
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn modules_dir(&self) -> PathBuf {
        self.root.join(MODULES_DIR)
    }

    pub fn counter_file(&self) -> PathBuf {
        self.root.join(COUNTER_FILE)
    }

    pub fn counter(&self) -> CounterStore {
        CounterStore::new(self.counter_file())
    }

    /// Runs `count` generate cycles: read `n`, write module `n`, increment.
    pub fn generate(&self, count: u64) -> Result<Vec<PathBuf>, GenerateError> {
        let mut written = Vec::new();
        if count == 0 {
            return Err(GenerateError {
                written,
                source: Error::Domain("count must be positive".into()),
            });
        }
        let store = self.counter();
        for _ in 0..count {
            match store.advance(|n| self.write_module(n)) {
                Ok((path, _)) => written.push(path),
                Err(source) => return Err(GenerateError { written, source }),
            }
        }
        Ok(written)
    }

    fn write_module(&self, n: &BigUint) -> Result<PathBuf> {
        let dir = self.modules_dir();
        fs::create_dir_all(&dir).map_err(|e| Error::persistence(&dir, e))?;
        let module = render_module(n.clone());
        let path = dir.join(&module.file_name);
        match fs::read(&path) {
            // left behind by a run that stopped before incrementing
            Ok(existing) if existing == module.source.as_bytes() => return Ok(path),
            Ok(_) => {
                return Err(Error::Integrity(format!(
                    "{} exists with different content; refusing to overwrite",
                    path.display()
                )))
            }
            Err(e) if e.kind() == io::ErrorKind::NotFound => {}
            Err(e) => return Err(Error::persistence(&path, e)),
        }
        let tmp = dir.join(format!("{}.tmp", module.file_name));
        fs::write(&tmp, module.source.as_bytes())
            .and_then(|()| fs::rename(&tmp, &path))
            .map_err(|e| Error::persistence(&path, e))?;
        Ok(path)
    }

    /// Indices of `vuln_module_<n>.c` files present on disk.
    pub fn module_indices(&self) -> Result<BTreeSet<BigUint>> {
        let dir = self.modules_dir();
        let entries = match fs::read_dir(&dir) {
            Ok(entries) => entries,
            Err(e) if e.kind() == io::ErrorKind::NotFound => return Ok(BTreeSet::new()),
            Err(e) => return Err(Error::persistence(&dir, e)),
        };
        let mut found = BTreeSet::new();
        for entry in entries {
            let entry = entry.map_err(|e| Error::persistence(&dir, e))?;
            let name = entry.file_name();
            let index = name
                .to_str()
                .and_then(|s| s.strip_prefix("vuln_module_"))
                .and_then(|s| s.strip_suffix(".c"))
                .and_then(parse_canonical_decimal);
            if let Some(n) = index {
                found.insert(n);
            }
        }
        Ok(found)
    }

    /// Census from the counter, cross-checked against the module directory.
    pub fn census(&self) -> Result<WorkspaceCensus> {
        let k = self.counter().read()?;
        let present = self.module_indices()?;
        let contiguous = BigUint::from(present.len()) == k
            && present.iter().enumerate().all(|(i, n)| *n == BigUint::from(i));
        let warning = (!contiguous).then(|| {
            format!(
                "counter reads {k} but {} holds {} module file(s)",
                self.modules_dir().display(),
                present.len()
            )
        });
        Ok(WorkspaceCensus {
            report: CensusReport::after(k),
            module_files: present.len(),
            warning,
        })
    }

    /// Removes the module directory and the counter file.
    pub fn reset(&self) -> Result<()> {
        let dir = self.modules_dir();
        match fs::remove_dir_all(&dir) {
            Ok(()) => {}
            Err(e) if e.kind() == io::ErrorKind::NotFound => {}
            Err(e) => return Err(Error::persistence(&dir, e)),
        }
        self.counter().reset()
    }
}

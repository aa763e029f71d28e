//! Persistent iteration counter.
//!
//! The counter file holds ASCII decimal digits and a trailing LF. Writers
//! serialise on an advisory lock taken on a sibling `.lock` file, and every
//! update is written to a temporary file and renamed over the original, so a
//! crash leaves either the old value or the new one.

use std::fs::{self, File, OpenOptions};
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use num_bigint::BigUint;

use crate::{Error, Result};

pub const COUNTER_FILE: &str = "vuln_counter.txt";

#[derive(Clone, Debug)]
pub struct CounterStore {
    path: PathBuf,
    lock_path: PathBuf,
}

/// Exclusive hold on the lock file; released on drop.
struct LockGuard {
    _file: File,
}

impl CounterStore {
    pub fn new(path: impl Into<PathBuf>) -> Self {
        let path = path.into();
        let lock_path = path.with_extension("lock");
        CounterStore { path, lock_path }
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn lock_path(&self) -> &Path {
        &self.lock_path
    }

    /// Stored value, or zero when the file does not exist.
    pub fn read(&self) -> Result<BigUint> {
        let content = match fs::read(&self.path) {
            Ok(bytes) => bytes,
            Err(e) if e.kind() == io::ErrorKind::NotFound => return Ok(BigUint::ZERO),
            Err(e) => return Err(Error::persistence(&self.path, e)),
        };
        parse_counter(&self.path, &content)
    }

    /// Adds one and returns the new value.
    pub fn increment(&self) -> Result<BigUint> {
        self.advance(|_| Ok(())).map(|(_, next)| next)
    }

    /// Runs `step` with the current value while holding the writer lock, then
    /// stores `current + 1`. When `step` fails the counter is left untouched.
    pub fn advance<T>(&self, step: impl FnOnce(&BigUint) -> Result<T>) -> Result<(T, BigUint)> {
        let _guard = self.lock()?;
        let current = self.read()?;
        let out = step(&current)?;
        let next = current + 1u32;
        self.store(&next)?;
        Ok((out, next))
    }

    /// Removes the counter file. Absent files are fine.
    pub fn reset(&self) -> Result<()> {
        let _guard = self.lock()?;
        match fs::remove_file(&self.path) {
            Ok(()) => Ok(()),
            Err(e) if e.kind() == io::ErrorKind::NotFound => Ok(()),
            Err(e) => Err(Error::persistence(&self.path, e)),
        }
    }

    fn lock(&self) -> Result<LockGuard> {
        if let Some(dir) = self.lock_path.parent().filter(|d| !d.as_os_str().is_empty()) {
            fs::create_dir_all(dir).map_err(|e| Error::persistence(dir, e))?;
        }
        let file = OpenOptions::new()
            .create(true)
            .truncate(false)
            .write(true)
            .open(&self.lock_path)
            .map_err(|e| Error::persistence(&self.lock_path, e))?;
        file.lock().map_err(|e| Error::persistence(&self.lock_path, e))?;
        Ok(LockGuard { _file: file })
    }

    fn store(&self, value: &BigUint) -> Result<()> {
        let mut tmp_name = self.path.file_name().unwrap_or_default().to_os_string();
        tmp_name.push(".tmp");
        let tmp = self.path.with_file_name(tmp_name);
        let write = || -> io::Result<()> {
            let mut f = File::create(&tmp)?;
            f.write_all(format!("{value}\n").as_bytes())?;
            f.sync_all()?;
            fs::rename(&tmp, &self.path)
        };
        write().map_err(|e| Error::persistence(&self.path, e))
    }
}

fn parse_counter(path: &Path, content: &[u8]) -> Result<BigUint> {
    let corrupt = || Error::Corrupt {
        path: path.to_owned(),
        content: String::from_utf8_lossy(content).into_owned(),
    };
    let digits = content.strip_suffix(b"\n").unwrap_or(content);
    if digits.is_empty() || !digits.iter().all(u8::is_ascii_digit) {
        return Err(corrupt());
    }
    BigUint::parse_bytes(digits, 10).ok_or_else(corrupt)
}

pub fn read_counter(path: impl AsRef<Path>) -> Result<BigUint> {
    CounterStore::new(path.as_ref()).read()
}

pub fn increment_counter(path: impl AsRef<Path>) -> Result<BigUint> {
    CounterStore::new(path.as_ref()).increment()
}

pub fn reset_counter(path: impl AsRef<Path>) -> Result<()> {
    CounterStore::new(path.as_ref()).reset()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;
    use tempfile::TempDir;

    fn store() -> (TempDir, CounterStore) {
        let dir = tempfile::tempdir().unwrap();
        let s = CounterStore::new(dir.path().join(COUNTER_FILE));
        (dir, s)
    }

    #[test]
    fn absent_reads_zero() {
        let (_d, s) = store();
        assert_eq!(s.read().unwrap(), BigUint::ZERO);
    }

    #[test]
    fn parses_decimal_with_newline() {
        let (_d, s) = store();
        fs::write(s.path(), "17\n").unwrap();
        assert_eq!(s.read().unwrap(), BigUint::from(17u32));
    }

    #[test]
    fn garbage_is_corruption() {
        let (_d, s) = store();
        for bad in ["abc", "", "\n", "-3\n", "12 \n", "1e5"] {
            fs::write(s.path(), bad).unwrap();
            assert!(matches!(s.read(), Err(Error::Corrupt { .. })), "{bad:?}");
        }
        // no silent repair on increment either
        fs::write(s.path(), "abc").unwrap();
        assert!(matches!(s.increment(), Err(Error::Corrupt { .. })));
        assert_eq!(fs::read_to_string(s.path()).unwrap(), "abc");
    }

    #[test]
    fn increment_from_zero_writes_one() {
        let (_d, s) = store();
        assert_eq!(s.increment().unwrap(), BigUint::one());
        assert_eq!(fs::read_to_string(s.path()).unwrap(), "1\n");
    }

    #[test]
    fn increment_past_u64() {
        let (_d, s) = store();
        let two_64 = BigUint::one() << 64;
        fs::write(s.path(), format!("{two_64}\n")).unwrap();
        assert_eq!(s.increment().unwrap(), &two_64 + 1u32);
        assert_eq!(s.read().unwrap(), two_64 + 1u32);
    }

    #[test]
    fn sequential_increments() {
        let (_d, s) = store();
        fs::write(s.path(), "5\n").unwrap();
        s.increment().unwrap();
        assert_eq!(s.increment().unwrap(), BigUint::from(7u32));
    }

    #[test]
    fn reset_behaviour() {
        let (_d, s) = store();
        s.reset().unwrap();
        assert_eq!(s.read().unwrap(), BigUint::ZERO);
        for _ in 0..100 {
            s.increment().unwrap();
        }
        assert_eq!(s.read().unwrap(), BigUint::from(100u32));
        s.reset().unwrap();
        assert!(!s.path().exists());
        assert_eq!(s.read().unwrap(), BigUint::ZERO);
    }

    #[test]
    fn failed_step_leaves_counter() {
        let (_d, s) = store();
        s.increment().unwrap();
        let r: Result<((), BigUint)> = s.advance(|_| Err(Error::Domain("boom".into())));
        assert!(r.is_err());
        assert_eq!(s.read().unwrap(), BigUint::one());
    }

    #[test]
    fn concurrent_increments_are_serialised() {
        let (_d, s) = store();
        fs::write(s.path(), "3\n").unwrap();
        std::thread::scope(|scope| {
            for _ in 0..8 {
                let s = s.clone();
                scope.spawn(move || {
                    for _ in 0..25 {
                        s.increment().unwrap();
                    }
                });
            }
        });
        assert_eq!(s.read().unwrap(), BigUint::from(203u32));
    }

    #[test]
    fn missing_directory_is_created() {
        let d = tempfile::tempdir().unwrap();
        let s = CounterStore::new(d.path().join("a/b").join(COUNTER_FILE));
        assert_eq!(s.increment().unwrap(), BigUint::from(1u32));
        assert_eq!(fs::read_to_string(s.path()).unwrap(), "1\n");
    }

    #[test]
    fn lock_file_sits_next_to_counter() {
        let (d, s) = store();
        s.increment().unwrap();
        assert_eq!(s.lock_path(), d.path().join("vuln_counter.lock"));
        assert!(s.lock_path().exists());
    }
}

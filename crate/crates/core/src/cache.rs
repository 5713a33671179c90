//! Binary cache files for prime tables, tau tables and a_p tables.
//!
//! Formats (all little-endian, FNV-1a checksum over everything after the
//! magic):
//!
//! ```text
//! DRHP | ver u8 | limit u64 | count u64 | prime deltas u64 * count | fnv u64
//! DRHT | ver u8 | n u64     | tau values i128 * n                  | fnv u64
//! DRHE | ver u8 | a i64 | b i64 | limit u64 | count u64 | a_p i32 * count | fnv u64
//! ```
//!
//! Corruption (bad magic, truncation, checksum mismatch) is always an
//! error, never a silent reuse.

use std::path::{Path, PathBuf};

use crate::elliptic::{ApTable, EllipticCurve};
use crate::error::{DrhError, Result};
use crate::primes::PrimeTable;
use crate::tau::TauTable;
use crate::util::fnv1a;

pub const ENV_CACHE_DIR: &str = "DRH_CACHE_DIR";
const VERSION: u8 = 1;

/// Cache directory from the environment, if configured.
pub fn cache_dir_from_env() -> Option<PathBuf> {
    std::env::var_os(ENV_CACHE_DIR).map(PathBuf::from)
}

fn finish(magic: &[u8; 4], payload: Vec<u8>) -> Vec<u8> {
    let mut out = Vec::with_capacity(payload.len() + 12);
    out.extend_from_slice(magic);
    out.extend_from_slice(&payload);
    out.extend_from_slice(&fnv1a(&payload).to_le_bytes());
    out
}

fn open_checked<'a>(bytes: &'a [u8], magic: &[u8; 4]) -> Result<&'a [u8]> {
    if bytes.len() < 12 {
        return Err(DrhError::Cache("file truncated below header size".into()));
    }
    if &bytes[..4] != magic {
        return Err(DrhError::Cache(format!(
            "magic mismatch: expected {:?}, found {:?}",
            std::str::from_utf8(magic).unwrap_or("?"),
            String::from_utf8_lossy(&bytes[..4])
        )));
    }
    let payload = &bytes[4..bytes.len() - 8];
    let stored = u64::from_le_bytes(bytes[bytes.len() - 8..].try_into().unwrap());
    if fnv1a(payload) != stored {
        return Err(DrhError::Cache("checksum mismatch: file corrupt".into()));
    }
    Ok(payload)
}

struct Reader<'a> {
    data: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn new(data: &'a [u8]) -> Self {
        Self { data, pos: 0 }
    }

    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        if self.pos + n > self.data.len() {
            return Err(DrhError::Cache("file truncated".into()));
        }
        let s = &self.data[self.pos..self.pos + n];
        self.pos += n;
        Ok(s)
    }

    fn u8(&mut self) -> Result<u8> {
        Ok(self.take(1)?[0])
    }

    fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }

    fn i64(&mut self) -> Result<i64> {
        Ok(i64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }

    fn i32(&mut self) -> Result<i32> {
        Ok(i32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    fn i128(&mut self) -> Result<i128> {
        Ok(i128::from_le_bytes(self.take(16)?.try_into().unwrap()))
    }

    fn done(&self) -> Result<()> {
        if self.pos != self.data.len() {
            return Err(DrhError::Cache(format!(
                "{} trailing bytes after payload",
                self.data.len() - self.pos
            )));
        }
        Ok(())
    }
}

pub fn prime_cache_bytes(table: &PrimeTable) -> Vec<u8> {
    let primes = table.primes();
    let mut payload = Vec::with_capacity(17 + 8 * primes.len());
    payload.push(VERSION);
    payload.extend_from_slice(&table.limit().to_le_bytes());
    payload.extend_from_slice(&(primes.len() as u64).to_le_bytes());
    let mut prev = 0u64;
    for &p in primes {
        payload.extend_from_slice(&(p - prev).to_le_bytes());
        prev = p;
    }
    finish(b"DRHP", payload)
}

pub fn prime_cache_decode(bytes: &[u8]) -> Result<PrimeTable> {
    let payload = open_checked(bytes, b"DRHP")?;
    let mut r = Reader::new(payload);
    let ver = r.u8()?;
    if ver != VERSION {
        return Err(DrhError::Cache(format!("unsupported cache version {ver}")));
    }
    let limit = r.u64()?;
    let count = r.u64()? as usize;
    let mut primes = Vec::with_capacity(count);
    let mut prev = 0u64;
    for _ in 0..count {
        prev += r.u64()?;
        primes.push(prev);
    }
    r.done()?;
    Ok(PrimeTable::from_parts(limit, primes))
}

pub fn tau_cache_bytes(table: &TauTable) -> Vec<u8> {
    let mut payload = Vec::with_capacity(9 + 16 * table.values().len());
    payload.push(VERSION);
    payload.extend_from_slice(&table.n().to_le_bytes());
    for &v in table.values() {
        payload.extend_from_slice(&v.to_le_bytes());
    }
    finish(b"DRHT", payload)
}

pub fn tau_cache_decode(bytes: &[u8]) -> Result<TauTable> {
    let payload = open_checked(bytes, b"DRHT")?;
    let mut r = Reader::new(payload);
    let ver = r.u8()?;
    if ver != VERSION {
        return Err(DrhError::Cache(format!("unsupported cache version {ver}")));
    }
    let n = r.u64()?;
    let mut values = Vec::with_capacity(n as usize);
    for _ in 0..n {
        values.push(r.i128()?);
    }
    r.done()?;
    Ok(TauTable::from_parts(n, values))
}

pub fn ap_cache_bytes(table: &ApTable) -> Vec<u8> {
    let mut payload = Vec::with_capacity(33 + 4 * table.values.len());
    payload.push(VERSION);
    payload.extend_from_slice(&table.curve.a.to_le_bytes());
    payload.extend_from_slice(&table.curve.b.to_le_bytes());
    payload.extend_from_slice(&table.limit.to_le_bytes());
    payload.extend_from_slice(&(table.values.len() as u64).to_le_bytes());
    for &v in &table.values {
        payload.extend_from_slice(&v.to_le_bytes());
    }
    finish(b"DRHE", payload)
}

pub fn ap_cache_decode(bytes: &[u8]) -> Result<ApTable> {
    let payload = open_checked(bytes, b"DRHE")?;
    let mut r = Reader::new(payload);
    let ver = r.u8()?;
    if ver != VERSION {
        return Err(DrhError::Cache(format!("unsupported cache version {ver}")));
    }
    let a = r.i64()?;
    let b = r.i64()?;
    let limit = r.u64()?;
    let count = r.u64()? as usize;
    let mut values = Vec::with_capacity(count);
    for _ in 0..count {
        values.push(r.i32()?);
    }
    r.done()?;
    let curve = EllipticCurve::new(a, b)
        .map_err(|e| DrhError::Cache(format!("cached curve invalid: {e}")))?;
    Ok(ApTable { curve, limit, values })
}

pub fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    if let Some(parent) = path.parent() {
        std::fs::create_dir_all(parent)?;
    }
    std::fs::write(path, bytes)?;
    Ok(())
}

pub fn read_file(path: &Path) -> Result<Vec<u8>> {
    Ok(std::fs::read(path)?)
}

//! Raw tensor interchange format.
//!
//! ```text
//! offset  size  content
//! 0       8     magic  b"VTCTF3T\0"
//! 8       4     version, u32 little-endian (currently 1)
//! 12      8     m, u64 little-endian
//! 20      8     n, u64 little-endian
//! 28      8     p, u64 little-endian
//! 36      8·mnp f64 little-endian values: slice k = 0..p, then row i = 0..m,
//!               then column j = 0..n (each frontal slice row-major)
//! ```
//!
//! Nothing follows the values.

use std::io::{Read, Write};
use std::path::Path;

use vtctf::Tensor3;

use crate::error::{CliError, Result};

pub const MAGIC: &[u8; 8] = b"VTCTF3T\0";
pub const VERSION: u32 = 1;
const HEADER_LEN: usize = 36;

pub fn encode(t: &Tensor3) -> Vec<u8> {
    let (m, n, p) = t.dims();
    let mut out = Vec::with_capacity(HEADER_LEN + 8 * t.len());
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&VERSION.to_le_bytes());
    for d in [m, n, p] {
        out.extend_from_slice(&(d as u64).to_le_bytes());
    }
    for k in 0..p {
        for i in 0..m {
            for j in 0..n {
                out.extend_from_slice(&t.get(i, j, k).to_le_bytes());
            }
        }
    }
    out
}

pub fn decode(bytes: &[u8], path: &Path) -> Result<Tensor3> {
    let bad = |detail: String| CliError::format(path, detail);
    if bytes.len() < HEADER_LEN {
        return Err(bad(format!("{} bytes is shorter than the header", bytes.len())));
    }
    if &bytes[..8] != MAGIC {
        return Err(bad("not a raw tensor file (bad magic)".into()));
    }
    let version = u32::from_le_bytes(bytes[8..12].try_into().unwrap());
    if version != VERSION {
        return Err(bad(format!("unsupported raw tensor version {version}")));
    }
    let dim = |at: usize| u64::from_le_bytes(bytes[at..at + 8].try_into().unwrap());
    let (m, n, p) = (dim(12), dim(20), dim(28));
    let count = m
        .checked_mul(n)
        .and_then(|x| x.checked_mul(p))
        .filter(|&c| c > 0)
        .ok_or_else(|| bad(format!("invalid dims {m}x{n}x{p}")))?;
    let expected = (count as usize).checked_mul(8).and_then(|x| x.checked_add(HEADER_LEN));
    if expected != Some(bytes.len()) {
        return Err(bad(format!(
            "dims {m}x{n}x{p} need {} value bytes, file has {}",
            count.saturating_mul(8),
            bytes.len() - HEADER_LEN
        )));
    }
    let (m, n, p) = (m as usize, n as usize, p as usize);
    let values = &bytes[HEADER_LEN..];
    let mut t = Tensor3::zeros(m, n, p);
    let mut at = 0;
    for k in 0..p {
        for i in 0..m {
            for j in 0..n {
                let x = f64::from_le_bytes(values[at..at + 8].try_into().unwrap());
                if !x.is_finite() {
                    return Err(bad(format!("non-finite value at ({i}, {j}, {k})")));
                }
                t.set(i, j, k, x);
                at += 8;
            }
        }
    }
    Ok(t)
}

pub fn read_tensor(path: &Path) -> Result<Tensor3> {
    let mut bytes = Vec::new();
    std::fs::File::open(path)
        .and_then(|mut f| f.read_to_end(&mut bytes))
        .map_err(|source| CliError::Read {
            path: path.to_path_buf(),
            source,
        })?;
    decode(&bytes, path)
}

pub fn write_tensor(path: &Path, t: &Tensor3) -> Result<()> {
    std::fs::File::create(path)
        .and_then(|mut f| f.write_all(&encode(t)))
        .map_err(|e| CliError::write(path, e))
}

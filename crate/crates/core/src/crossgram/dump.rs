//! Binary dump of section entries.
//!
//! Layout, little-endian: `b"SGRM"`, `u32 rows`, `u32 cols`, `u32 row_start`, `u32 col_start`,
//! then `rows * cols` row-major pairs `(re: f64, im: f64)`.

use crate::error::{Error, Result};
use crate::{CMat, C64};
use std::io::{Read, Write};

pub const MAGIC: &[u8; 4] = b"SGRM";

/// Entries and 1-based starting indices read from a dump.
#[derive(Clone, Debug, PartialEq)]
pub struct RawSection {
    pub entries: CMat,
    pub row_start: usize,
    pub col_start: usize,
}

fn to_u32(v: usize, what: &str) -> Result<u32> {
    u32::try_from(v).map_err(|_| Error::Format(format!("{what} {v} does not fit in u32")))
}

pub fn write_raw<W: Write>(w: &mut W, entries: &CMat, row_start: usize, col_start: usize) -> Result<()> {
    w.write_all(MAGIC)?;
    for v in [entries.nrows(), entries.ncols(), row_start, col_start] {
        w.write_all(&to_u32(v, "header field")?.to_le_bytes())?;
    }
    for i in 0..entries.nrows() {
        for j in 0..entries.ncols() {
            let z = entries[(i, j)];
            w.write_all(&z.re.to_le_bytes())?;
            w.write_all(&z.im.to_le_bytes())?;
        }
    }
    Ok(())
}

pub fn read_raw<R: Read>(r: &mut R) -> Result<RawSection> {
    let mut magic = [0u8; 4];
    r.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(Error::Format("bad magic".into()));
    }
    let mut header = [0u32; 4];
    for h in header.iter_mut() {
        let mut b = [0u8; 4];
        r.read_exact(&mut b)?;
        *h = u32::from_le_bytes(b);
    }
    let [rows, cols, row_start, col_start] = header.map(|v| v as usize);
    if row_start == 0 || col_start == 0 {
        return Err(Error::Format("ranges are 1-based".into()));
    }
    let mut entries = CMat::zeros(rows, cols);
    let mut b = [0u8; 8];
    for i in 0..rows {
        for j in 0..cols {
            r.read_exact(&mut b)?;
            let re = f64::from_le_bytes(b);
            r.read_exact(&mut b)?;
            let im = f64::from_le_bytes(b);
            entries[(i, j)] = C64::new(re, im);
        }
    }
    Ok(RawSection {
        entries,
        row_start,
        col_start,
    })
}

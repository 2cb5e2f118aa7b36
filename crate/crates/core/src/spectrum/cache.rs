//! Binary persistence for [`DimensionTable`].
//!
//! Layout, all integers little-endian:
//!
//! ```text
//! 0   8  magic "G0DIMTBL"
//! 8   4  format version (u32)
//! 12  1  space code (0 full, 1 new, 2 min)
//! 13  3  zero padding
//! 16  8  weight k (u64)
//! 24  8  limit (u64)
//! 32  .. limit dimensions, u64 each, N = 1..=limit
//! ```

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use super::table::DimensionTable;
use crate::formulas::{SpaceKind, Weight};
use crate::{Error, Result};

pub const CACHE_MAGIC: &[u8; 8] = b"G0DIMTBL";
pub const CACHE_VERSION: u32 = 1;

/// Environment variable that overrides the cache directory.
pub const CACHE_DIR_ENV: &str = "GAMMA0_DIMS_CACHE_DIR";

pub fn cache_file_name(space: SpaceKind, k: Weight, limit: u64) -> String {
    format!("{space}-k{k}-n{limit}.v{CACHE_VERSION}.g0d")
}

pub fn write_table<W: Write>(table: &DimensionTable, out: W) -> Result<()> {
    let mut w = BufWriter::new(out);
    w.write_all(CACHE_MAGIC)?;
    w.write_all(&CACHE_VERSION.to_le_bytes())?;
    w.write_all(&[table.space.code(), 0, 0, 0])?;
    w.write_all(&table.k.get().to_le_bytes())?;
    w.write_all(&table.limit.to_le_bytes())?;
    for d in table.dims() {
        w.write_all(&d.to_le_bytes())?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_table<R: Read>(input: R) -> Result<DimensionTable> {
    let mut r = BufReader::new(input);
    let mut header = [0u8; 32];
    r.read_exact(&mut header)
        .map_err(|_| Error::Cache("truncated header".into()))?;
    if &header[..8] != CACHE_MAGIC {
        return Err(Error::Cache("bad magic".into()));
    }
    let version = u32::from_le_bytes(header[8..12].try_into().unwrap());
    if version != CACHE_VERSION {
        return Err(Error::Cache(format!(
            "format version {version}, expected {CACHE_VERSION}"
        )));
    }
    let space = SpaceKind::from_code(header[12])
        .ok_or_else(|| Error::Cache(format!("unknown space code {}", header[12])))?;
    let k = Weight::new(u64::from_le_bytes(header[16..24].try_into().unwrap()))
        .map_err(|e| Error::Cache(e.to_string()))?;
    let limit = u64::from_le_bytes(header[24..32].try_into().unwrap());
    let mut bytes = Vec::new();
    r.read_to_end(&mut bytes)?;
    if bytes.len() as u64 != limit * 8 {
        return Err(Error::Cache(format!(
            "payload has {} bytes, expected {}",
            bytes.len(),
            limit * 8
        )));
    }
    let dims = bytes
        .chunks_exact(8)
        .map(|c| u64::from_le_bytes(c.try_into().unwrap()))
        .collect();
    Ok(DimensionTable::from_parts(space, k, dims))
}

pub fn save_table(table: &DimensionTable, path: &Path) -> Result<()> {
    write_table(table, File::create(path)?)
}

pub fn load_table(path: &Path) -> Result<DimensionTable> {
    read_table(File::open(path)?)
}

/// Loads a cached table covering at least `limit` levels from `dir`, if one
/// exists with matching space, weight and format version.
pub fn load_cached(dir: &Path, space: SpaceKind, k: Weight, limit: u64) -> Option<DimensionTable> {
    let path = dir.join(cache_file_name(space, k, limit));
    let t = load_table(&path).ok()?;
    (t.space == space && t.k == k && t.limit == limit).then_some(t)
}

pub fn store_cached(dir: &Path, table: &DimensionTable) -> Result<PathBuf> {
    std::fs::create_dir_all(dir)?;
    let path = dir.join(cache_file_name(table.space, table.k, table.limit));
    save_table(table, &path)?;
    Ok(path)
}

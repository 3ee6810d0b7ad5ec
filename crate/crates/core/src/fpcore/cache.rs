//! On-disk cache of discrete-log tables.
//!
//! One file per modulus, `field-<p>.bin`:
//!
//! ```text
//! offset 0      version tag (1 byte)
//! offset 1      p  (u64, little-endian)
//! offset 9      g  (u64, little-endian)
//! offset 17     dlog[1], …, dlog[p-1]  (u32 each, little-endian)
//! ```
//!
//! A file with a different version tag, a mismatched `p`, or a table that
//! fails validation is ignored and rewritten.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use super::PrimeField;
use crate::error::{Error, Result};

pub const CACHE_VERSION: u8 = 1;
const HEADER_LEN: usize = 17;

#[derive(Debug, Clone)]
pub struct FieldCache {
    dir: PathBuf,
}

impl FieldCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        FieldCache { dir: dir.into() }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path_for(&self, p: u64) -> PathBuf {
        self.dir.join(format!("field-{p}.bin"))
    }

    /// Load the field for `p`, building and storing it on a miss.
    pub fn load_or_build(&self, p: u64) -> Result<PrimeField> {
        PrimeField::check_modulus(p)?;
        if let Some(f) = self.load(p) {
            return Ok(f);
        }
        let field = PrimeField::new(p)?;
        self.store(&field)?;
        Ok(field)
    }

    pub fn load(&self, p: u64) -> Option<PrimeField> {
        let bytes = fs::read(self.path_for(p)).ok()?;
        decode(&bytes, p)
    }

    pub fn store(&self, field: &PrimeField) -> Result<()> {
        let io_err = |path: &Path| {
            let path = path.to_path_buf();
            move |source| Error::CacheIo { path, source }
        };
        fs::create_dir_all(&self.dir).map_err(io_err(&self.dir))?;
        let path = self.path_for(field.p() as u64);
        // write-then-rename so concurrent readers never see a torn file
        let tmp = self
            .dir
            .join(format!(".field-{}.{}.tmp", field.p(), std::process::id()));
        let mut file = fs::File::create(&tmp).map_err(io_err(&tmp))?;
        file.write_all(&encode(field)).map_err(io_err(&tmp))?;
        drop(file);
        fs::rename(&tmp, &path).map_err(io_err(&path))
    }
}

fn encode(field: &PrimeField) -> Vec<u8> {
    let p = field.p() as usize;
    let mut out = Vec::with_capacity(HEADER_LEN + 4 * (p - 1));
    out.push(CACHE_VERSION);
    out.extend_from_slice(&(field.p() as u64).to_le_bytes());
    out.extend_from_slice(&(field.generator() as u64).to_le_bytes());
    for &k in &field.dlog_table()[1..] {
        out.extend_from_slice(&k.to_le_bytes());
    }
    out
}

fn decode(bytes: &[u8], p: u64) -> Option<PrimeField> {
    if bytes.len() < HEADER_LEN || bytes[0] != CACHE_VERSION {
        return None;
    }
    let stored_p = u64::from_le_bytes(bytes[1..9].try_into().ok()?);
    let g = u64::from_le_bytes(bytes[9..17].try_into().ok()?);
    if stored_p != p || p >= super::MAX_MODULUS || g >= p {
        return None;
    }
    let body = &bytes[HEADER_LEN..];
    if body.len() != 4 * (p as usize - 1) {
        return None;
    }
    let mut dlog = Vec::with_capacity(p as usize);
    dlog.push(0);
    dlog.extend(
        body.chunks_exact(4)
            .map(|c| u32::from_le_bytes(c.try_into().unwrap())),
    );
    PrimeField::from_dlog_table(p as u32, g as u32, dlog)
}

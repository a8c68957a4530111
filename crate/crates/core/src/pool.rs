//! Pool of classless replacement images with cached phase spectra.
//!
//! # Cache file
//!
//! ```text
//! "VIPF"                      4 bytes magic
//! version                     u16 LE (currently 1)
//! H, W, C                     u32 LE each
//! repeated until EOF:
//!   path length               u32 LE, byte count of the UTF-8 path
//!   path                      UTF-8 bytes
//!   phase                     H*W*C f64 LE, row-major (x, y, z)
//! ```

use std::fs;
use std::io::{self, Read, Write};
use std::path::Path;

use log::warn;

use crate::error::{Error, Result};
use crate::grid::{Grid, ImageTensor, RealGrid, Shape};
use crate::io as image_io;
use crate::rng::RngStream;
use crate::spectrum::{check_phase_range, forward, to_polar, DftMode};

pub const CACHE_MAGIC: &[u8; 4] = b"VIPF";
pub const CACHE_VERSION: u16 = 1;

#[derive(Debug, Clone, PartialEq)]
pub struct PoolEntry {
    pub path: String,
    pub phase: RealGrid,
}

/// Immutable once built; share it across workers by reference.
#[derive(Debug, Clone, PartialEq)]
pub struct FractalPool {
    shape: Shape,
    entries: Vec<PoolEntry>,
}

/// Phase spectrum of `image` under `mode`.
pub fn phase_of(image: &ImageTensor, mode: DftMode) -> RealGrid {
    to_polar(&forward(mode, image)).into_parts().1
}

/// Decodes every file in `dir` (lexicographic order), center-crops and
/// resizes it to `shape`, and caches its phase. Undecodable files are skipped
/// with a warning; it is an error if none decode.
pub fn build_pool(dir: &Path, shape: Shape, mode: DftMode) -> Result<FractalPool> {
    let files = image_io::list_files(dir)?;
    if files.is_empty() {
        return Err(Error::InvalidInput(format!("{} contains no files", dir.display())));
    }
    let mut entries = Vec::with_capacity(files.len());
    for path in &files {
        let image = match image_io::decode(path).and_then(|img| image_io::canonicalize(&img, shape)) {
            Ok(image) => image,
            Err(e) => {
                warn!("skipping {}: {e}", path.display());
                continue;
            }
        };
        entries.push(PoolEntry {
            path: path.to_string_lossy().into_owned(),
            phase: phase_of(&image, mode),
        });
    }
    if entries.is_empty() {
        return Err(Error::InvalidInput(format!(
            "none of the {} files in {} could be decoded",
            files.len(),
            dir.display()
        )));
    }
    FractalPool::from_entries(shape, entries)
}

/// Uniformly picks one entry; returns its index and phase.
pub fn sample_phase<'a>(pool: &'a FractalPool, rng: &mut RngStream) -> Result<(usize, &'a RealGrid)> {
    if pool.entries.is_empty() {
        return Err(Error::EmptyPool);
    }
    let i = rng.index(pool.entries.len());
    Ok((i, &pool.entries[i].phase))
}

fn read_u32(r: &mut impl Read) -> io::Result<u32> {
    let mut b = [0u8; 4];
    r.read_exact(&mut b)?;
    Ok(u32::from_le_bytes(b))
}

fn cache_err(e: io::Error) -> Error {
    Error::CacheFormat(e.to_string())
}

impl FractalPool {
    pub fn from_entries(shape: Shape, entries: Vec<PoolEntry>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::EmptyPool);
        }
        for entry in &entries {
            entry.phase.ensure_shape(shape)?;
            check_phase_range(&entry.phase)?;
        }
        Ok(Self { shape, entries })
    }

    pub fn shape(&self) -> Shape {
        self.shape
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[PoolEntry] {
        &self.entries
    }

    pub fn write_cache(&self, mut w: impl Write) -> io::Result<()> {
        w.write_all(CACHE_MAGIC)?;
        w.write_all(&CACHE_VERSION.to_le_bytes())?;
        for dim in [self.shape.height(), self.shape.width(), self.shape.channels()] {
            w.write_all(&(dim as u32).to_le_bytes())?;
        }
        for entry in &self.entries {
            let path = entry.path.as_bytes();
            w.write_all(&(path.len() as u32).to_le_bytes())?;
            w.write_all(path)?;
            for v in entry.phase.as_slice() {
                w.write_all(&v.to_le_bytes())?;
            }
        }
        w.flush()
    }

    pub fn to_cache_bytes(&self) -> Vec<u8> {
        let mut out = Vec::new();
        self.write_cache(&mut out).expect("writing to a Vec cannot fail");
        out
    }

    pub fn read_cache(mut r: impl Read) -> Result<Self> {
        let mut magic = [0u8; 4];
        r.read_exact(&mut magic).map_err(cache_err)?;
        if &magic != CACHE_MAGIC {
            return Err(Error::CacheFormat(format!("bad magic {magic:?}")));
        }
        let mut version = [0u8; 2];
        r.read_exact(&mut version).map_err(cache_err)?;
        let version = u16::from_le_bytes(version);
        if version != CACHE_VERSION {
            return Err(Error::CacheFormat(format!("unsupported version {version}")));
        }
        let mut dims = [0usize; 3];
        for d in &mut dims {
            *d = read_u32(&mut r).map_err(cache_err)? as usize;
        }
        let shape = Shape::new(dims[0], dims[1], dims[2])?;

        let mut entries = Vec::new();
        loop {
            let mut len = [0u8; 4];
            match r.read(&mut len[..1]).map_err(cache_err)? {
                0 => break,
                _ => r.read_exact(&mut len[1..]).map_err(cache_err)?,
            }
            let mut path = vec![0u8; u32::from_le_bytes(len) as usize];
            r.read_exact(&mut path).map_err(cache_err)?;
            let path = String::from_utf8(path).map_err(|e| Error::CacheFormat(e.to_string()))?;
            let mut raw = vec![0u8; shape.len() * 8];
            r.read_exact(&mut raw).map_err(cache_err)?;
            let phase = raw
                .chunks_exact(8)
                .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
                .collect();
            entries.push(PoolEntry {
                path,
                phase: Grid::from_vec(shape, phase)?,
            });
        }
        Self::from_entries(shape, entries)
    }

    pub fn load_cache(path: &Path) -> Result<Self> {
        let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
        Self::read_cache(bytes.as_slice())
    }

    pub fn save_cache(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_cache_bytes()).map_err(|e| Error::io(path, e))
    }
}

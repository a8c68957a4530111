//! Vital-phase detection.
//!
//! The `(u, v)` plane of every channel is tiled with non-overlapping `S x S`
//! windows; the coordinate holding the largest amplitude in each window is
//! vital. When `S` does not divide `H` or `W` the trailing windows are simply
//! smaller. Ties go to the first coordinate in row-major order.

use std::cmp::Ordering;
use std::ops::Range;

use crate::error::{Error, Result};
use crate::grid::{Grid, RealGrid, Shape};

/// Boolean grid marking vital (or otherwise selected) coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VitalMask {
    bits: Grid<bool>,
    filter_size: usize,
}

impl VitalMask {
    pub fn from_bits(bits: Grid<bool>, filter_size: usize) -> Self {
        Self { bits, filter_size }
    }

    pub fn empty(shape: Shape, filter_size: usize) -> Self {
        Self::from_bits(Grid::filled(shape, false), filter_size)
    }

    pub fn shape(&self) -> Shape {
        self.bits.shape()
    }

    pub fn filter_size(&self) -> usize {
        self.filter_size
    }

    pub fn bits(&self) -> &Grid<bool> {
        &self.bits
    }

    #[inline]
    pub fn contains(&self, index: usize) -> bool {
        self.bits.as_slice()[index]
    }

    pub fn count(&self) -> usize {
        self.bits.as_slice().iter().filter(|b| **b).count()
    }

    /// Marked coordinates in row-major order.
    pub fn coordinates(&self) -> Vec<(usize, usize, usize)> {
        let shape = self.shape();
        self.bits
            .as_slice()
            .iter()
            .enumerate()
            .filter(|(_, b)| **b)
            .map(|(i, _)| shape.coords(i))
            .collect()
    }

    pub fn intersect(&self, other: &VitalMask) -> Result<VitalMask> {
        other.bits.ensure_shape(self.shape())?;
        let data = self
            .bits
            .as_slice()
            .iter()
            .zip(other.bits.as_slice())
            .map(|(a, b)| *a && *b)
            .collect();
        Ok(Self::from_bits(Grid::from_vec(self.shape(), data)?, self.filter_size))
    }
}

/// A per-window mask selecting the `rank`-th largest amplitude.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankMask {
    mask: VitalMask,
    rank: usize,
}

impl RankMask {
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn mask(&self) -> &VitalMask {
        &self.mask
    }

    pub fn into_mask(self) -> VitalMask {
        self.mask
    }

    pub(crate) fn with_mask(mask: VitalMask, rank: usize) -> Self {
        Self { mask, rank }
    }
}

/// Row and column ranges of each window, row-major over the window grid.
pub fn windows(shape: Shape, filter_size: usize) -> Vec<(Range<usize>, Range<usize>)> {
    let (h, w) = (shape.height(), shape.width());
    let mut out = Vec::with_capacity(h.div_ceil(filter_size) * w.div_ceil(filter_size));
    for r0 in (0..h).step_by(filter_size) {
        for c0 in (0..w).step_by(filter_size) {
            out.push((r0..(r0 + filter_size).min(h), c0..(c0 + filter_size).min(w)));
        }
    }
    out
}

pub(crate) fn check_filter(shape: Shape, filter_size: usize) -> Result<()> {
    if filter_size == 0 || filter_size > shape.height() || filter_size > shape.width() {
        return Err(Error::InvalidFilter {
            size: filter_size,
            height: shape.height(),
            width: shape.width(),
        });
    }
    Ok(())
}

/// Descending amplitude; earlier row-major position first on ties.
fn by_amplitude_desc(a: &(f64, usize), b: &(f64, usize)) -> Ordering {
    b.0.total_cmp(&a.0).then(a.1.cmp(&b.1))
}

/// Marks the largest amplitude in each `S x S x 1` window.
pub fn detect_vital(amplitude: &RealGrid, filter_size: usize) -> Result<VitalMask> {
    let shape = amplitude.shape();
    check_filter(shape, filter_size)?;
    let values = amplitude.as_slice();
    let mut bits = Grid::filled(shape, false);
    for z in 0..shape.channels() {
        for (rows, cols) in windows(shape, filter_size) {
            let mut best = shape.index(rows.start, cols.start, z);
            for x in rows.clone() {
                for y in cols.clone() {
                    let i = shape.index(x, y, z);
                    if values[i] > values[best] {
                        best = i;
                    }
                }
            }
            bits.as_mut_slice()[best] = true;
        }
    }
    Ok(VitalMask::from_bits(bits, filter_size))
}

/// Marks the `rank`-th largest amplitude (1-based) in each window.
///
/// Windows with fewer than `rank` members (trailing partial windows) carry no
/// mark. `rank == 1` reproduces [`detect_vital`].
pub fn rank_mask(amplitude: &RealGrid, filter_size: usize, rank: usize) -> Result<RankMask> {
    let shape = amplitude.shape();
    check_filter(shape, filter_size)?;
    if rank == 0 || rank > filter_size * filter_size {
        return Err(Error::InvalidRank {
            rank,
            size: filter_size,
        });
    }
    let values = amplitude.as_slice();
    let mut bits = Grid::filled(shape, false);
    let mut members: Vec<(f64, usize)> = Vec::with_capacity(filter_size * filter_size);
    for z in 0..shape.channels() {
        for (rows, cols) in windows(shape, filter_size) {
            members.clear();
            for x in rows.clone() {
                for y in cols.clone() {
                    let i = shape.index(x, y, z);
                    members.push((values[i], i));
                }
            }
            if members.len() < rank {
                continue;
            }
            members.select_nth_unstable_by(rank - 1, by_amplitude_desc);
            bits.as_mut_slice()[members[rank - 1].1] = true;
        }
    }
    Ok(RankMask::with_mask(VitalMask::from_bits(bits, filter_size), rank))
}

/// Coordinate-wise complement.
pub fn invert_mask(mask: &VitalMask) -> VitalMask {
    VitalMask::from_bits(mask.bits.map(|b| !b), mask.filter_size)
}

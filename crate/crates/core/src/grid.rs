//! Row-major `H x W x C` grids.

use std::fmt;

use crate::error::{Error, Result};

/// Extent of a rank-3 grid. All dimensions are non-zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Shape {
    height: usize,
    width: usize,
    channels: usize,
}

impl Shape {
    pub fn new(height: usize, width: usize, channels: usize) -> Result<Self> {
        if height == 0 || width == 0 || channels == 0 {
            return Err(Error::InvalidShape(format!(
                "{height}x{width}x{channels} has a zero dimension"
            )));
        }
        Ok(Self {
            height,
            width,
            channels,
        })
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.height * self.width * self.channels
    }

    /// Flat offset of `(x, y, z)`.
    #[inline]
    pub fn index(&self, x: usize, y: usize, z: usize) -> usize {
        debug_assert!(x < self.height && y < self.width && z < self.channels);
        (x * self.width + y) * self.channels + z
    }

    /// Inverse of [`Shape::index`].
    #[inline]
    pub fn coords(&self, index: usize) -> (usize, usize, usize) {
        let z = index % self.channels;
        let rest = index / self.channels;
        (rest / self.width, rest % self.width, z)
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}x{}", self.height, self.width, self.channels)
    }
}

/// Dense grid of `T` laid out as `(x * W + y) * C + z`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Grid<T> {
    shape: Shape,
    data: Vec<T>,
}

pub type RealGrid = Grid<f64>;

impl<T> Grid<T> {
    pub fn from_vec(shape: Shape, data: Vec<T>) -> Result<Self> {
        if data.len() != shape.len() {
            return Err(Error::InvalidShape(format!(
                "{shape} needs {} values, got {}",
                shape.len(),
                data.len()
            )));
        }
        Ok(Self { shape, data })
    }

    pub fn from_fn(shape: Shape, mut f: impl FnMut(usize, usize, usize) -> T) -> Self {
        let data = (0..shape.len())
            .map(|i| {
                let (x, y, z) = shape.coords(i);
                f(x, y, z)
            })
            .collect();
        Self { shape, data }
    }

    pub fn shape(&self) -> Shape {
        self.shape
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [T] {
        &mut self.data
    }

    pub fn into_vec(self) -> Vec<T> {
        self.data
    }

    pub fn get(&self, x: usize, y: usize, z: usize) -> &T {
        &self.data[self.shape.index(x, y, z)]
    }

    pub fn map<U>(&self, f: impl FnMut(&T) -> U) -> Grid<U> {
        Grid {
            shape: self.shape,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub(crate) fn ensure_shape(&self, expected: Shape) -> Result<()> {
        if self.shape != expected {
            return Err(Error::mismatch(expected, self.shape));
        }
        Ok(())
    }
}

impl<T: Clone> Grid<T> {
    pub fn filled(shape: Shape, value: T) -> Self {
        Self {
            shape,
            data: vec![value; shape.len()],
        }
    }
}

/// Spatial-domain image with finite samples.
///
/// Ingested pixels are scaled to `[0, 1]`; intermediate reconstructions may
/// leave that range until [`ImageTensor::clamp_unit`] is applied.
#[derive(Debug, Clone, PartialEq)]
pub struct ImageTensor {
    grid: RealGrid,
}

impl ImageTensor {
    pub fn new(shape: Shape, data: Vec<f64>) -> Result<Self> {
        Self::from_grid(Grid::from_vec(shape, data)?)
    }

    pub fn from_grid(grid: RealGrid) -> Result<Self> {
        if let Some(i) = grid.as_slice().iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "non-finite pixel at {:?}",
                grid.shape().coords(i)
            )));
        }
        Ok(Self { grid })
    }

    pub fn zeros(shape: Shape) -> Self {
        Self {
            grid: Grid::filled(shape, 0.0),
        }
    }

    pub fn shape(&self) -> Shape {
        self.grid.shape()
    }

    pub fn data(&self) -> &[f64] {
        self.grid.as_slice()
    }

    pub fn grid(&self) -> &RealGrid {
        &self.grid
    }

    pub fn get(&self, x: usize, y: usize, z: usize) -> f64 {
        *self.grid.get(x, y, z)
    }

    pub fn clamp_unit(mut self) -> Self {
        for v in self.grid.as_mut_slice() {
            *v = v.clamp(0.0, 1.0);
        }
        self
    }

    /// Largest absolute per-sample difference.
    pub fn max_abs_diff(&self, other: &ImageTensor) -> f64 {
        self.data()
            .iter()
            .zip(other.data())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_dimension_rejected() {
        assert!(matches!(Shape::new(0, 4, 3), Err(Error::InvalidShape(_))));
        assert!(matches!(Shape::new(4, 4, 0), Err(Error::InvalidShape(_))));
    }

    #[test]
    fn index_coords_round_trip() {
        let shape = Shape::new(5, 4, 3).unwrap();
        for i in 0..shape.len() {
            let (x, y, z) = shape.coords(i);
            assert_eq!(shape.index(x, y, z), i);
        }
    }

    #[test]
    fn wrong_length_rejected() {
        let shape = Shape::new(2, 2, 1).unwrap();
        assert!(Grid::from_vec(shape, vec![0.0; 3]).is_err());
    }

    #[test]
    fn non_finite_pixel_rejected() {
        let shape = Shape::new(1, 2, 1).unwrap();
        assert!(ImageTensor::new(shape, vec![0.0, f64::NAN]).is_err());
    }
}

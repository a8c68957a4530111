//! Forward/inverse DFTs and the Cartesian/polar spectral representations.
//!
//! The 3D transform runs over all three axes, channel axis included; the 2D
//! variant transforms each channel slice on its own. Both use the unscaled
//! forward sum and a `1/N` inverse. Spectra are indexed like images:
//! `(u, v, w)` at offset `(u * W + v) * C + w`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::{FftDirection, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{Grid, ImageTensor, RealGrid, Shape};

/// Where the zero-frequency term sits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Layout {
    /// DC at `(0, 0, w)`.
    Natural,
    /// DC at `(⌊H/2⌋, ⌊W/2⌋, w)`.
    DcCentered,
}

/// Which transform lifts images into the frequency domain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum DftMode {
    #[default]
    #[serde(rename = "3d")]
    ThreeD,
    #[serde(rename = "2d")]
    TwoD,
}

impl std::str::FromStr for DftMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "3d" => Ok(DftMode::ThreeD),
            "2d" => Ok(DftMode::TwoD),
            other => Err(Error::InvalidConfig(format!(
                "dft mode must be `3d` or `2d`, got `{other}`"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComplexSpectrum {
    grid: Grid<Complex64>,
    layout: Layout,
}

impl ComplexSpectrum {
    pub fn new(grid: Grid<Complex64>, layout: Layout) -> Self {
        Self { grid, layout }
    }

    pub fn shape(&self) -> Shape {
        self.grid.shape()
    }

    pub fn layout(&self) -> Layout {
        self.layout
    }

    pub fn grid(&self) -> &Grid<Complex64> {
        &self.grid
    }

    pub fn as_slice(&self) -> &[Complex64] {
        self.grid.as_slice()
    }

    pub fn as_mut_slice(&mut self) -> &mut [Complex64] {
        self.grid.as_mut_slice()
    }

    /// `Σ|F|²`.
    pub fn energy(&self) -> f64 {
        self.as_slice().iter().map(|z| z.norm_sqr()).sum()
    }
}

/// Amplitude and phase grids of one spectrum.
///
/// Amplitudes are finite and non-negative; phases are principal values in
/// `(−π, π]`. Both are checked on construction.
#[derive(Debug, Clone, PartialEq)]
pub struct PolarSpectrum {
    amplitude: RealGrid,
    phase: RealGrid,
    layout: Layout,
}

impl PolarSpectrum {
    pub fn new(amplitude: RealGrid, phase: RealGrid, layout: Layout) -> Result<Self> {
        phase.ensure_shape(amplitude.shape())?;
        let shape = amplitude.shape();
        if let Some(i) = amplitude.as_slice().iter().position(|a| !(a.is_finite() && *a >= 0.0)) {
            return Err(Error::InvalidInput(format!(
                "amplitude {} at {:?} is not a finite non-negative value",
                amplitude.as_slice()[i],
                shape.coords(i)
            )));
        }
        check_phase_range(&phase)?;
        Ok(Self {
            amplitude,
            phase,
            layout,
        })
    }

    pub fn shape(&self) -> Shape {
        self.amplitude.shape()
    }

    pub fn layout(&self) -> Layout {
        self.layout
    }

    pub fn amplitude(&self) -> &RealGrid {
        &self.amplitude
    }

    pub fn phase(&self) -> &RealGrid {
        &self.phase
    }

    pub fn into_parts(self) -> (RealGrid, RealGrid) {
        (self.amplitude, self.phase)
    }
}

pub(crate) fn check_phase_range(phase: &RealGrid) -> Result<()> {
    if let Some(i) = phase.as_slice().iter().position(|p| !(*p > -PI && *p <= PI)) {
        return Err(Error::InvalidInput(format!(
            "phase {} at {:?} is outside (-pi, pi]",
            phase.as_slice()[i],
            phase.shape().coords(i)
        )));
    }
    Ok(())
}

/// Principal value in `(−π, π]`. Values already in range come back untouched.
pub fn wrap_phase(angle: f64) -> f64 {
    if angle > -PI && angle <= PI {
        return angle;
    }
    let wrapped = (angle + PI).rem_euclid(2.0 * PI) - PI;
    if wrapped <= -PI {
        PI
    } else {
        wrapped
    }
}

const ALL_AXES: [usize; 3] = [0, 1, 2];
const SPATIAL_AXES: [usize; 2] = [0, 1];

/// Runs a 1D FFT along every line of each listed axis, in place.
fn transform_axes(data: &mut [Complex64], shape: Shape, axes: &[usize], direction: FftDirection) {
    let dims = [shape.height(), shape.width(), shape.channels()];
    let strides = [shape.width() * shape.channels(), shape.channels(), 1];
    let mut planner = FftPlanner::<f64>::new();
    for &axis in axes {
        let n = dims[axis];
        if n == 1 {
            continue;
        }
        let fft = planner.plan_fft(n, direction);
        let mut line = vec![Complex64::new(0.0, 0.0); n];
        let mut scratch = vec![Complex64::new(0.0, 0.0); fft.get_inplace_scratch_len()];
        let (a, b) = match axis {
            0 => (1, 2),
            1 => (0, 2),
            _ => (0, 1),
        };
        for i in 0..dims[a] {
            for j in 0..dims[b] {
                let base = i * strides[a] + j * strides[b];
                for (k, slot) in line.iter_mut().enumerate() {
                    *slot = data[base + k * strides[axis]];
                }
                fft.process_with_scratch(&mut line, &mut scratch);
                for (k, value) in line.iter().enumerate() {
                    data[base + k * strides[axis]] = *value;
                }
            }
        }
    }
}

fn forward_over(image: &ImageTensor, axes: &[usize]) -> ComplexSpectrum {
    let shape = image.shape();
    let mut data: Vec<Complex64> = image.data().iter().map(|&v| Complex64::new(v, 0.0)).collect();
    transform_axes(&mut data, shape, axes, FftDirection::Forward);
    ComplexSpectrum::new(Grid::from_vec(shape, data).expect("length preserved"), Layout::Natural)
}

fn inverse_over(spec: &ComplexSpectrum, axes: &[usize]) -> Result<Grid<Complex64>> {
    if spec.layout != Layout::Natural {
        return Err(Error::LayoutMismatch {
            expected: Layout::Natural,
            actual: spec.layout,
        });
    }
    let shape = spec.shape();
    let mut data = spec.as_slice().to_vec();
    transform_axes(&mut data, shape, axes, FftDirection::Inverse);
    let n: usize = axes
        .iter()
        .map(|&a| [shape.height(), shape.width(), shape.channels()][a])
        .product();
    let scale = 1.0 / n as f64;
    for v in &mut data {
        *v *= scale;
    }
    Grid::from_vec(shape, data)
}

fn realify(grid: Grid<Complex64>) -> ImageTensor {
    ImageTensor::from_grid(grid.map(|z| z.re)).expect("finite spectrum gives finite image")
}

/// Triple-sum DFT over height, width and channel axes.
pub fn dft3(image: &ImageTensor) -> ComplexSpectrum {
    forward_over(image, &ALL_AXES)
}

/// Independent 2D DFT of every channel slice; `w` is the channel index.
pub fn dft2_per_channel(image: &ImageTensor) -> ComplexSpectrum {
    forward_over(image, &SPATIAL_AXES)
}

/// Normalized inverse of [`dft3`], full complex result.
pub fn idft3_complex(spec: &ComplexSpectrum) -> Result<Grid<Complex64>> {
    inverse_over(spec, &ALL_AXES)
}

/// Normalized inverse of [`dft3`], keeping the real part.
///
/// Phase edits break conjugate symmetry, so the complex inverse generally has
/// an imaginary residue. It is dropped.
pub fn idft3(spec: &ComplexSpectrum) -> Result<ImageTensor> {
    idft3_complex(spec).map(realify)
}

pub fn idft2_per_channel_complex(spec: &ComplexSpectrum) -> Result<Grid<Complex64>> {
    inverse_over(spec, &SPATIAL_AXES)
}

/// Normalized inverse of [`dft2_per_channel`], keeping the real part.
pub fn idft2_per_channel(spec: &ComplexSpectrum) -> Result<ImageTensor> {
    idft2_per_channel_complex(spec).map(realify)
}

pub fn forward(mode: DftMode, image: &ImageTensor) -> ComplexSpectrum {
    match mode {
        DftMode::ThreeD => dft3(image),
        DftMode::TwoD => dft2_per_channel(image),
    }
}

pub fn inverse(mode: DftMode, spec: &ComplexSpectrum) -> Result<ImageTensor> {
    match mode {
        DftMode::ThreeD => idft3(spec),
        DftMode::TwoD => idft2_per_channel(spec),
    }
}

/// `A = |F|`, `P = atan2(I, R)` in `(−π, π]`. Zero coefficients get phase 0.
pub fn to_polar(spec: &ComplexSpectrum) -> PolarSpectrum {
    let amplitude = spec.grid.map(|z| z.norm());
    let phase = spec.grid.map(|z| {
        if z.re == 0.0 && z.im == 0.0 {
            0.0
        } else {
            let p = z.im.atan2(z.re);
            // atan2 returns -π for (-x, -0.0)
            if p <= -PI {
                PI
            } else {
                p
            }
        }
    });
    PolarSpectrum {
        amplitude,
        phase,
        layout: spec.layout,
    }
}

/// `F = A·e^{jP}`.
pub fn from_polar(polar: &PolarSpectrum) -> ComplexSpectrum {
    let shape = polar.shape();
    let data = polar
        .amplitude
        .as_slice()
        .iter()
        .zip(polar.phase.as_slice())
        .map(|(&a, &p)| {
            if a == 0.0 {
                Complex64::new(0.0, 0.0)
            } else {
                Complex64::from_polar(a, p)
            }
        })
        .collect();
    ComplexSpectrum {
        grid: Grid::from_vec(shape, data).expect("shape checked at construction"),
        layout: polar.layout,
    }
}

/// Cyclic roll of the `(u, v)` plane by `(⌊H/2⌋, ⌊W/2⌋)`; `inverse` undoes it.
pub fn roll_uv<T: Copy>(grid: &Grid<T>, inverse: bool) -> Grid<T> {
    let shape = grid.shape();
    let (h, w) = (shape.height(), shape.width());
    let (dh, dw) = (h / 2, w / 2);
    Grid::from_fn(shape, |x, y, z| {
        // out[(i + d) % n] = in[i]  <=>  out[j] = in[(j - d) mod n]
        let (sx, sy) = if inverse {
            ((x + dh) % h, (y + dw) % w)
        } else {
            ((x + h - dh) % h, (y + w - dw) % w)
        };
        *grid.get(sx, sy, z)
    })
}

/// Moves the zero-frequency term to or from the grid center.
pub trait DcShift: Sized {
    /// Natural → centered. Fails on an already centered spectrum.
    fn shift_dc_center(&self) -> Result<Self>;
    /// Centered → natural. Fails on a natural-layout spectrum.
    fn unshift_dc_center(&self) -> Result<Self>;
}

fn expect_layout(actual: Layout, expected: Layout) -> Result<()> {
    if actual != expected {
        return Err(Error::LayoutMismatch { expected, actual });
    }
    Ok(())
}

impl DcShift for ComplexSpectrum {
    fn shift_dc_center(&self) -> Result<Self> {
        expect_layout(self.layout, Layout::Natural)?;
        Ok(Self::new(roll_uv(&self.grid, false), Layout::DcCentered))
    }

    fn unshift_dc_center(&self) -> Result<Self> {
        expect_layout(self.layout, Layout::DcCentered)?;
        Ok(Self::new(roll_uv(&self.grid, true), Layout::Natural))
    }
}

impl DcShift for PolarSpectrum {
    fn shift_dc_center(&self) -> Result<Self> {
        expect_layout(self.layout, Layout::Natural)?;
        Ok(Self {
            amplitude: roll_uv(&self.amplitude, false),
            phase: roll_uv(&self.phase, false),
            layout: Layout::DcCentered,
        })
    }

    fn unshift_dc_center(&self) -> Result<Self> {
        expect_layout(self.layout, Layout::DcCentered)?;
        Ok(Self {
            amplitude: roll_uv(&self.amplitude, true),
            phase: roll_uv(&self.phase, true),
            layout: Layout::Natural,
        })
    }
}

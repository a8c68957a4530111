//! Pixel-space ops used by the `t` stage.
//!
//! Geometric ops resample with bilinear interpolation about the image center;
//! samples that land outside the image take [`FILL`]. Tonal ops quantize to
//! 8 bits the way PIL does.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::grid::{ImageTensor, Shape};
use crate::rng::RngStream;

/// Out-of-bounds fill for geometric ops (mid gray).
pub const FILL: f64 = 0.5;

/// Slack, in pixels, for sample points that fall just outside the grid
/// because of rounding (e.g. a 360° rotation).
const EDGE_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PixelOp {
    Identity,
    /// Degrees, counter-clockwise.
    Rotate,
    /// Fraction of the width.
    TranslateX,
    /// Fraction of the height.
    TranslateY,
    ShearX,
    ShearY,
    /// Threshold in `[0, 1]`; samples at or above it are inverted.
    Solarize,
    /// Bits kept per channel, rounded and clamped to `1..=8`.
    Posterize,
    /// Per-channel histogram equalization; magnitude unused.
    Equalize,
}

const NAMES: [(PixelOp, &str); 9] = [
    (PixelOp::Identity, "identity"),
    (PixelOp::Rotate, "rotate"),
    (PixelOp::TranslateX, "translate_x"),
    (PixelOp::TranslateY, "translate_y"),
    (PixelOp::ShearX, "shear_x"),
    (PixelOp::ShearY, "shear_y"),
    (PixelOp::Solarize, "solarize"),
    (PixelOp::Posterize, "posterize"),
    (PixelOp::Equalize, "equalize"),
];

impl PixelOp {
    pub fn name(self) -> &'static str {
        NAMES.iter().find(|(op, _)| *op == self).map(|(_, n)| *n).unwrap()
    }

    pub fn apply(self, image: &ImageTensor, magnitude: f64) -> ImageTensor {
        match self {
            PixelOp::Identity => image.clone(),
            PixelOp::Rotate => {
                let (s, c) = magnitude.to_radians().sin_cos();
                warp(image, |dx, dy| (c * dx + s * dy, -s * dx + c * dy))
            }
            PixelOp::TranslateX => {
                let shift = magnitude * image.shape().width() as f64;
                warp(image, |dx, dy| (dx, dy - shift))
            }
            PixelOp::TranslateY => {
                let shift = magnitude * image.shape().height() as f64;
                warp(image, |dx, dy| (dx - shift, dy))
            }
            PixelOp::ShearX => warp(image, |dx, dy| (dx, dy + magnitude * dx)),
            PixelOp::ShearY => warp(image, |dx, dy| (dx + magnitude * dy, dy)),
            PixelOp::Solarize => map_samples(image, |v| if v < magnitude { v } else { 1.0 - v }),
            PixelOp::Posterize => {
                let bits = magnitude.round().clamp(1.0, 8.0) as u32;
                let keep = 0xFFu8 << (8 - bits);
                map_samples(image, |v| f64::from(to_u8(v) & keep) / 255.0)
            }
            PixelOp::Equalize => equalize(image),
        }
    }
}

impl FromStr for PixelOp {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        NAMES
            .iter()
            .find(|(_, n)| *n == s)
            .map(|(op, _)| *op)
            .ok_or_else(|| Error::UnknownPixelOp(s.to_owned()))
    }
}

impl fmt::Display for PixelOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Picks one op uniformly and a magnitude uniformly from its range.
/// Always consumes exactly two draws.
pub fn choose_pixel_op(ops: &[(PixelOp, [f64; 2])], rng: &mut RngStream) -> (PixelOp, f64) {
    let (op, [lo, hi]) = ops[rng.index(ops.len())];
    let magnitude = lo + (hi - lo) * rng.uniform();
    (op, magnitude)
}

fn to_u8(v: f64) -> u8 {
    (v.clamp(0.0, 1.0) * 255.0).round() as u8
}

fn map_samples(image: &ImageTensor, f: impl Fn(f64) -> f64) -> ImageTensor {
    ImageTensor::new(image.shape(), image.data().iter().map(|&v| f(v)).collect()).expect("finite map of finite image")
}

/// Resamples `image` where each output offset `(dx, dy)` from the center reads
/// the source offset `source(dx, dy)`.
fn warp(image: &ImageTensor, source: impl Fn(f64, f64) -> (f64, f64)) -> ImageTensor {
    let shape = image.shape();
    let (h, w) = (shape.height(), shape.width());
    let (cx, cy) = ((h as f64 - 1.0) / 2.0, (w as f64 - 1.0) / 2.0);
    let mut out = Vec::with_capacity(shape.len());
    for x in 0..h {
        for y in 0..w {
            let (sx, sy) = source(x as f64 - cx, y as f64 - cy);
            let (sx, sy) = (sx + cx, sy + cy);
            for z in 0..shape.channels() {
                out.push(bilinear(image, shape, sx, sy, z));
            }
        }
    }
    ImageTensor::new(shape, out).expect("finite resample")
}

fn bilinear(image: &ImageTensor, shape: Shape, sx: f64, sy: f64, z: usize) -> f64 {
    let (hmax, wmax) = ((shape.height() - 1) as f64, (shape.width() - 1) as f64);
    if !(-EDGE_SLACK..=hmax + EDGE_SLACK).contains(&sx) || !(-EDGE_SLACK..=wmax + EDGE_SLACK).contains(&sy) {
        return FILL;
    }
    let (sx, sy) = (sx.clamp(0.0, hmax), sy.clamp(0.0, wmax));
    let (x0, y0) = (sx.floor() as usize, sy.floor() as usize);
    let x1 = (x0 + 1).min(shape.height() - 1);
    let y1 = (y0 + 1).min(shape.width() - 1);
    let (fx, fy) = (sx - x0 as f64, sy - y0 as f64);
    let top = image.get(x0, y0, z) * (1.0 - fy) + image.get(x0, y1, z) * fy;
    let bottom = image.get(x1, y0, z) * (1.0 - fy) + image.get(x1, y1, z) * fy;
    top * (1.0 - fx) + bottom * fx
}

fn equalize(image: &ImageTensor) -> ImageTensor {
    let shape = image.shape();
    let c = shape.channels();
    let quantized: Vec<u8> = image.data().iter().map(|&v| to_u8(v)).collect();
    let mut out: Vec<f64> = quantized.iter().map(|&q| f64::from(q) / 255.0).collect();
    for z in 0..c {
        let mut hist = [0usize; 256];
        for q in quantized.iter().skip(z).step_by(c) {
            hist[*q as usize] += 1;
        }
        let total: usize = hist.iter().sum();
        let last = hist.iter().rev().find(|n| **n > 0).copied().unwrap_or(0);
        let step = (total - last) / 255;
        if step == 0 {
            continue;
        }
        let mut lut = [0u8; 256];
        let mut running = step / 2;
        for (i, n) in hist.iter().enumerate() {
            lut[i] = (running / step).min(255) as u8;
            running += n;
        }
        for (q, o) in quantized.iter().zip(out.iter_mut()).skip(z).step_by(c) {
            *o = f64::from(lut[*q as usize]) / 255.0;
        }
    }
    ImageTensor::new(shape, out).expect("finite equalize")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_image(h: usize, w: usize, c: usize, seed: u64) -> ImageTensor {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let shape = Shape::new(h, w, c).unwrap();
        ImageTensor::new(shape, (0..shape.len()).map(|_| rng.random::<f64>()).collect()).unwrap()
    }

    #[test]
    fn names_round_trip() {
        for (op, name) in NAMES {
            assert_eq!(name.parse::<PixelOp>().unwrap(), op);
            assert_eq!(op.to_string(), name);
        }
        assert!(matches!("blur".parse::<PixelOp>(), Err(Error::UnknownPixelOp(_))));
    }

    #[test]
    fn full_turn_is_identity() {
        let img = random_image(9, 7, 3, 1);
        let turned = PixelOp::Rotate.apply(&img, 360.0);
        assert!(turned.max_abs_diff(&img) <= 1e-6);
    }

    #[test]
    fn zero_magnitude_geometry_is_identity() {
        let img = random_image(6, 5, 3, 2);
        for op in [
            PixelOp::Rotate,
            PixelOp::TranslateX,
            PixelOp::TranslateY,
            PixelOp::ShearX,
            PixelOp::ShearY,
        ] {
            assert!(op.apply(&img, 0.0).max_abs_diff(&img) <= 1e-12, "{op}");
        }
    }

    #[test]
    fn quarter_turn_moves_pixels() {
        // 3x3 single channel, value = row * 3 + col
        let shape = Shape::new(3, 3, 1).unwrap();
        let img = ImageTensor::new(shape, (0..9).map(f64::from).collect()).unwrap();
        let out = PixelOp::Rotate.apply(&img, 90.0);
        // center fixed, corners permuted
        assert!((out.get(1, 1, 0) - 4.0).abs() < 1e-12);
        let corners: Vec<f64> = [(0, 0), (0, 2), (2, 0), (2, 2)]
            .iter()
            .map(|&(x, y)| out.get(x, y, 0).round())
            .collect();
        let mut sorted = corners.clone();
        sorted.sort_by(f64::total_cmp);
        assert_eq!(sorted, vec![0.0, 2.0, 6.0, 8.0]);
        assert_ne!(corners, vec![0.0, 2.0, 6.0, 8.0]);
    }

    #[test]
    fn whole_pixel_translation() {
        let shape = Shape::new(1, 4, 1).unwrap();
        let img = ImageTensor::new(shape, vec![0.1, 0.2, 0.3, 0.4]).unwrap();
        let out = PixelOp::TranslateX.apply(&img, 0.25);
        let expected = [FILL, 0.1, 0.2, 0.3];
        for (a, b) in out.data().iter().zip(expected) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn solarize_inverts_above_threshold() {
        let shape = Shape::new(1, 3, 1).unwrap();
        let img = ImageTensor::new(shape, vec![0.2, 0.5, 0.9]).unwrap();
        let out = PixelOp::Solarize.apply(&img, 0.5);
        assert_eq!(out.data(), &[0.2, 0.5, 1.0 - 0.9]);
    }

    #[test]
    fn posterize_masks_low_bits() {
        let shape = Shape::new(1, 1, 1).unwrap();
        let img = ImageTensor::new(shape, vec![200.0 / 255.0]).unwrap();
        let out = PixelOp::Posterize.apply(&img, 4.0);
        assert_eq!(out.data(), &[192.0 / 255.0]);
        let full = PixelOp::Posterize.apply(&img, 8.0);
        assert!((full.data()[0] - 200.0 / 255.0).abs() < 1e-15);
    }

    #[test]
    fn equalize_spreads_histogram() {
        let shape = Shape::new(2, 2, 1).unwrap();
        let img = ImageTensor::new(shape, vec![0.4, 0.4, 0.5, 0.5]).unwrap();
        let out = PixelOp::Equalize.apply(&img, 0.0);
        // step = (4 - 2) / 255 == 0, so the channel is left alone
        assert!(out.max_abs_diff(&img) < 1.0 / 255.0);
        let narrow = ImageTensor::new(
            Shape::new(32, 32, 1).unwrap(),
            (0..1024).map(|i| 0.25 + 0.25 * i as f64 / 1023.0).collect(),
        )
        .unwrap();
        let eq = PixelOp::Equalize.apply(&narrow, 0.0);
        let lo = eq.data().iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = eq.data().iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        assert!(lo < 0.05 && hi > 0.9, "{lo} {hi}");
    }

    #[test]
    fn choice_is_deterministic() {
        let ops = vec![(PixelOp::Rotate, [-15.0, 15.0]), (PixelOp::Solarize, [0.0, 1.0])];
        let a: Vec<_> = {
            let mut r = RngStream::new(3);
            (0..20).map(|_| choose_pixel_op(&ops, &mut r)).collect()
        };
        let b: Vec<_> = {
            let mut r = RngStream::new(3);
            (0..20).map(|_| choose_pixel_op(&ops, &mut r)).collect()
        };
        assert_eq!(a, b);
        for (op, m) in a {
            match op {
                PixelOp::Rotate => assert!((-15.0..=15.0).contains(&m)),
                _ => assert!((0.0..=1.0).contains(&m)),
            }
        }
    }
}

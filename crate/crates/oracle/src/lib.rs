//! Slow, literal reference implementations used as test oracles.
//!
//! Nothing here shares code with `vipaug-core`. Every routine is written as
//! the most direct nested-loop reading of the definition it checks, operating
//! on plain row-major `H x W x C` slices (index `(x * W + y) * C + z`).

use num_complex::Complex64;
use std::f64::consts::PI;

#[inline]
fn idx(w: usize, c: usize, x: usize, y: usize, z: usize) -> usize {
    (x * w + y) * c + z
}

/// Triple-sum forward DFT over all three axes.
pub fn naive_dft3(data: &[f64], h: usize, w: usize, c: usize) -> Vec<Complex64> {
    assert_eq!(data.len(), h * w * c);
    let mut out = vec![Complex64::new(0.0, 0.0); h * w * c];
    for u in 0..h {
        for v in 0..w {
            for k in 0..c {
                let mut acc = Complex64::new(0.0, 0.0);
                for x in 0..h {
                    for y in 0..w {
                        for z in 0..c {
                            let angle = -2.0
                                * PI
                                * ((x * u) as f64 / h as f64 + (y * v) as f64 / w as f64 + (z * k) as f64 / c as f64);
                            acc += data[idx(w, c, x, y, z)] * Complex64::from_polar(1.0, angle);
                        }
                    }
                }
                out[idx(w, c, u, v, k)] = acc;
            }
        }
    }
    out
}

/// Normalized triple-sum inverse DFT; returns the full complex result.
pub fn naive_idft3(spec: &[Complex64], h: usize, w: usize, c: usize) -> Vec<Complex64> {
    assert_eq!(spec.len(), h * w * c);
    let n = (h * w * c) as f64;
    let mut out = vec![Complex64::new(0.0, 0.0); h * w * c];
    for x in 0..h {
        for y in 0..w {
            for z in 0..c {
                let mut acc = Complex64::new(0.0, 0.0);
                for u in 0..h {
                    for v in 0..w {
                        for k in 0..c {
                            let angle = 2.0
                                * PI
                                * ((u * x) as f64 / h as f64 + (v * y) as f64 / w as f64 + (k * z) as f64 / c as f64);
                            acc += spec[idx(w, c, u, v, k)] * Complex64::from_polar(1.0, angle);
                        }
                    }
                }
                out[idx(w, c, x, y, z)] = acc / n;
            }
        }
    }
    out
}

/// Double-sum 2D DFT applied to each channel independently.
pub fn naive_dft2_per_channel(data: &[f64], h: usize, w: usize, c: usize) -> Vec<Complex64> {
    assert_eq!(data.len(), h * w * c);
    let mut out = vec![Complex64::new(0.0, 0.0); h * w * c];
    for z in 0..c {
        for u in 0..h {
            for v in 0..w {
                let mut acc = Complex64::new(0.0, 0.0);
                for x in 0..h {
                    for y in 0..w {
                        let angle = -2.0 * PI * ((x * u) as f64 / h as f64 + (y * v) as f64 / w as f64);
                        acc += data[idx(w, c, x, y, z)] * Complex64::from_polar(1.0, angle);
                    }
                }
                out[idx(w, c, u, v, z)] = acc;
            }
        }
    }
    out
}

/// Normalized per-channel 2D inverse DFT.
pub fn naive_idft2_per_channel(spec: &[Complex64], h: usize, w: usize, c: usize) -> Vec<Complex64> {
    let n = (h * w) as f64;
    let mut out = vec![Complex64::new(0.0, 0.0); h * w * c];
    for z in 0..c {
        for x in 0..h {
            for y in 0..w {
                let mut acc = Complex64::new(0.0, 0.0);
                for u in 0..h {
                    for v in 0..w {
                        let angle = 2.0 * PI * ((u * x) as f64 / h as f64 + (v * y) as f64 / w as f64);
                        acc += spec[idx(w, c, u, v, z)] * Complex64::from_polar(1.0, angle);
                    }
                }
                out[idx(w, c, x, y, z)] = acc / n;
            }
        }
    }
    out
}

/// Max elementwise error divided by the largest reference magnitude (floored at 1).
pub fn max_relative_error(actual: &[Complex64], reference: &[Complex64]) -> f64 {
    assert_eq!(actual.len(), reference.len());
    let scale = reference.iter().map(|z| z.norm()).fold(1.0_f64, f64::max);
    actual
        .iter()
        .zip(reference)
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max)
        / scale
}

/// The half-open `(row, col)` bounds of each non-overlapping `s x s` window,
/// including trailing partial windows.
pub fn windows(h: usize, w: usize, s: usize) -> Vec<(usize, usize, usize, usize)> {
    let mut out = Vec::new();
    let mut r = 0;
    while r < h {
        let mut q = 0;
        while q < w {
            out.push((r, (r + s).min(h), q, (q + s).min(w)));
            q += s;
        }
        r += s;
    }
    out
}

/// Brute-force per-window argmax, first maximum in row-major scan order wins.
pub fn region_argmax(amp: &[f64], h: usize, w: usize, c: usize, s: usize) -> Vec<(usize, usize, usize)> {
    let mut marks = Vec::new();
    for z in 0..c {
        for (r0, r1, c0, c1) in windows(h, w, s) {
            let mut best = (r0, c0);
            let mut best_val = amp[idx(w, c, r0, c0, z)];
            for x in r0..r1 {
                for y in c0..c1 {
                    let a = amp[idx(w, c, x, y, z)];
                    if a > best_val {
                        best_val = a;
                        best = (x, y);
                    }
                }
            }
            marks.push((best.0, best.1, z));
        }
    }
    marks.sort();
    marks
}

/// Per-window k-th largest (1-based) via a full sort; windows with fewer than
/// `k` members contribute nothing.
pub fn region_kth(amp: &[f64], h: usize, w: usize, c: usize, s: usize, k: usize) -> Vec<(usize, usize, usize)> {
    let mut marks = Vec::new();
    for z in 0..c {
        for (r0, r1, c0, c1) in windows(h, w, s) {
            let mut members: Vec<(f64, usize, usize)> = Vec::new();
            for x in r0..r1 {
                for y in c0..c1 {
                    members.push((amp[idx(w, c, x, y, z)], x, y));
                }
            }
            if members.len() < k {
                continue;
            }
            // descending by value, ascending row-major position on ties
            members.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap().then((a.1, a.2).cmp(&(b.1, b.2))));
            let (_, x, y) = members[k - 1];
            marks.push((x, y, z));
        }
    }
    marks.sort();
    marks
}

/// Centered position of natural index `(u, v)`.
pub fn dc_centered_position(h: usize, w: usize, u: usize, v: usize) -> (usize, usize) {
    ((u + h / 2) % h, (v + w / 2) % w)
}

/// Natural-layout membership (length `h * w`) of the centered low-frequency
/// block, derived from signed frequency bounds.
pub fn low_freq_block(h: usize, w: usize, ratio: f64) -> Vec<bool> {
    let bh = (h as f64 * ratio.sqrt()).round() as i64;
    let bw = (w as f64 * ratio.sqrt()).round() as i64;
    let lo_u = -(bh / 2);
    let hi_u = bh - bh / 2 - 1;
    let lo_v = -(bw / 2);
    let hi_v = bw - bw / 2 - 1;
    let mut out = vec![false; h * w];
    for u in 0..h as i64 {
        for v in 0..w as i64 {
            // signed frequency of natural index u in the centered ordering
            let fu = if u >= h as i64 - h as i64 / 2 { u - h as i64 } else { u };
            let fv = if v >= w as i64 - w as i64 / 2 { v - w as i64 } else { v };
            let inside = (lo_u..=hi_u).contains(&fu) && (lo_v..=hi_v).contains(&fv);
            out[(u * w as i64 + v) as usize] = inside;
        }
    }
    out
}

/// Counts coordinates whose wrapped phase difference exceeds `threshold`.
pub fn count_exceeding(clean: &[f64], corrupted: &[f64], threshold: f64) -> usize {
    let mut count = 0;
    for i in 0..clean.len() {
        let d = corrupted[i] - clean[i];
        let wrapped = d.sin().atan2(d.cos());
        if wrapped.abs() > threshold {
            count += 1;
        }
    }
    count
}

/// `Σ|x|²`.
pub fn energy(values: &[Complex64]) -> f64 {
    values.iter().map(|z| z.norm_sqr()).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_point_dft() {
        let f = naive_dft3(&[3.0, 1.0], 2, 1, 1);
        assert!((f[0] - Complex64::new(4.0, 0.0)).norm() < 1e-12);
        assert!((f[1] - Complex64::new(2.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn naive_round_trip() {
        let data: Vec<f64> = (0..24).map(|i| (i as f64 * 0.37).sin()).collect();
        let back = naive_idft3(&naive_dft3(&data, 2, 4, 3), 2, 4, 3);
        for (a, b) in data.iter().zip(&back) {
            assert!((a - b.re).abs() < 1e-12);
        }
    }

    #[test]
    fn block_quarter_of_eight() {
        let block = low_freq_block(8, 8, 0.25);
        assert_eq!(block.iter().filter(|b| **b).count(), 16);
        // frequencies -2..=1 -> natural indices {6, 7, 0, 1}
        for u in [6, 7, 0, 1] {
            for v in [6, 7, 0, 1] {
                assert!(block[u * 8 + v]);
            }
        }
    }
}

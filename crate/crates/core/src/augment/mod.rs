//! Phase and amplitude augmentation operators and their composition.

mod config;
pub mod pixel;

pub use config::{default_pixel_ops, AugmentConfig, PixelOpSpec, Variant};
pub use pixel::{choose_pixel_op, PixelOp};

use crate::error::{Error, Result};
use crate::grid::{Grid, ImageTensor, RealGrid, Shape};
use crate::rng::RngStream;
use crate::spectrum::{self, check_phase_range, from_polar, roll_uv, to_polar, wrap_phase, Layout, PolarSpectrum};
use crate::vitality::{self, detect_vital, rank_mask, RankMask, VitalMask};

/// Gaussian phase jitter: `N(0, σ_vital²)` at vital coordinates and
/// `N(0, σ_nonvital²)` elsewhere, wrapped back into `(−π, π]`.
///
/// One standard-normal draw is consumed per coordinate in row-major order,
/// regardless of class.
pub fn vipaug_g(
    phase: &RealGrid,
    mask: &VitalMask,
    sigma_vital: f64,
    sigma_nonvital: f64,
    rng: &mut RngStream,
) -> Result<RealGrid> {
    mask.bits().ensure_shape(phase.shape())?;
    for sigma in [sigma_vital, sigma_nonvital] {
        if !(sigma.is_finite() && sigma >= 0.0) {
            return Err(Error::InvalidInput(format!("sigma {sigma} must be non-negative")));
        }
    }
    let data = phase
        .as_slice()
        .iter()
        .enumerate()
        .map(|(i, &p)| {
            let sigma = if mask.contains(i) { sigma_vital } else { sigma_nonvital };
            wrap_phase(p + sigma * rng.standard_normal())
        })
        .collect();
    Grid::from_vec(phase.shape(), data)
}

/// Fractal substitution: coordinates in `protect` or `retain` keep their
/// phase, every other coordinate takes `fractal_phase` verbatim.
pub fn vipaug_f(
    phase: &RealGrid,
    protect: &VitalMask,
    fractal_phase: &RealGrid,
    retain: Option<&VitalMask>,
) -> Result<RealGrid> {
    let shape = phase.shape();
    protect.bits().ensure_shape(shape)?;
    fractal_phase.ensure_shape(shape)?;
    if let Some(r) = retain {
        r.bits().ensure_shape(shape)?;
    }
    check_phase_range(fractal_phase)?;
    let data = (0..shape.len())
        .map(|i| {
            if protect.contains(i) || retain.is_some_and(|r| r.contains(i)) {
                phase.as_slice()[i]
            } else {
                fractal_phase.as_slice()[i]
            }
        })
        .collect();
    Grid::from_vec(shape, data)
}

/// Natural-layout membership of the centered low-frequency block.
///
/// In DC-centered layout the block spans `round(H·√ratio) x round(W·√ratio)`
/// coordinates starting at `⌊H/2⌋ − ⌊bh/2⌋` (likewise for columns), across
/// all channels.
pub fn low_freq_block(shape: Shape, ratio: f64) -> Result<Grid<bool>> {
    if !(0.0..=1.0).contains(&ratio) {
        return Err(Error::InvalidInput(format!(
            "low-frequency ratio {ratio} outside [0, 1]"
        )));
    }
    let side = ratio.sqrt();
    let (h, w) = (shape.height(), shape.width());
    let bh = ((h as f64 * side).round() as usize).min(h);
    let bw = ((w as f64 * side).round() as usize).min(w);
    let rows = (h / 2 - bh / 2)..(h / 2 - bh / 2 + bh);
    let cols = (w / 2 - bw / 2)..(w / 2 - bw / 2 + bw);
    let centered = Grid::from_fn(shape, |x, y, _| rows.contains(&x) && cols.contains(&y));
    Ok(roll_uv(&centered, true))
}

/// Second-ranked coordinate of each window, restricted to the low-frequency
/// block of area fraction `ratio`.
pub fn low_freq_retain_mask(amplitude: &RealGrid, filter_size: usize, ratio: f64) -> Result<RankMask> {
    let block = low_freq_block(amplitude.shape(), ratio)?;
    let second = rank_mask(amplitude, filter_size, 2)?;
    let mask = second.mask().intersect(&VitalMask::from_bits(block, filter_size))?;
    Ok(RankMask::with_mask(mask, 2))
}

/// Keeps `own`'s phase and takes `other`'s amplitude.
pub fn apr_sp(own: &PolarSpectrum, other: &PolarSpectrum) -> Result<PolarSpectrum> {
    if own.shape() != other.shape() {
        return Err(Error::mismatch(own.shape(), other.shape()));
    }
    if own.layout() != other.layout() {
        return Err(Error::LayoutMismatch {
            expected: own.layout(),
            actual: other.layout(),
        });
    }
    PolarSpectrum::new(other.amplitude().clone(), own.phase().clone(), own.layout())
}

/// Applies one uniformly chosen enabled pixel op with a uniformly drawn
/// magnitude.
pub fn pixel_stage_t(image: &ImageTensor, config: &AugmentConfig, rng: &mut RngStream) -> Result<ImageTensor> {
    let ops = config.resolve_pixel_ops()?;
    if ops.is_empty() {
        return Err(Error::InvalidConfig("no pixel ops enabled".into()));
    }
    let (op, magnitude) = choose_pixel_op(&ops, rng);
    Ok(op.apply(image, magnitude))
}

/// One uniformly drawn coordinate per window (one draw per window, channel
/// major then window row-major).
pub fn random_window_mask(shape: Shape, filter_size: usize, rng: &mut RngStream) -> Result<VitalMask> {
    vitality::check_filter(shape, filter_size)?;
    let mut bits = Grid::filled(shape, false);
    for z in 0..shape.channels() {
        for (rows, cols) in vitality::windows(shape, filter_size) {
            let pick = rng.index(rows.len() * cols.len());
            let (x, y) = (rows.start + pick / cols.len(), cols.start + pick % cols.len());
            bits.as_mut_slice()[shape.index(x, y, z)] = true;
        }
    }
    Ok(VitalMask::from_bits(bits, filter_size))
}

/// Which stages fired for one sample, and the pixel op that was drawn.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StageTrace {
    pub fractal: bool,
    pub amplitude_swap: bool,
    pub pixel_op: PixelOp,
    pub magnitude: f64,
}

/// Masks and strengths as assigned by the configured variant.
#[derive(Debug, Clone)]
pub struct PhaseRoles {
    /// Coordinates exempt from fractal substitution.
    pub protect: VitalMask,
    /// Coordinates that get `sigma_vital` jitter.
    pub jitter: VitalMask,
    /// Extra low-frequency coordinates exempt from substitution.
    pub retain: Option<VitalMask>,
    pub sigma_vital: f64,
    pub sigma_nonvital: f64,
}

impl PhaseRoles {
    /// `rng` is only drawn from by the uniform variant.
    pub fn resolve(amplitude: &RealGrid, config: &AugmentConfig, rng: &mut RngStream) -> Result<Self> {
        let s = config.filter_size;
        let vital = detect_vital(amplitude, s)?;
        let use_retention = config.low_freq_ratio > 0.0 && s >= 2;
        match config.variant {
            Variant::Standard => {
                let retain = if use_retention {
                    Some(low_freq_retain_mask(amplitude, s, config.low_freq_ratio)?.into_mask())
                } else {
                    None
                };
                Ok(Self {
                    protect: vital.clone(),
                    jitter: vital,
                    retain,
                    sigma_vital: config.sigma_vital,
                    sigma_nonvital: config.sigma_nonvital,
                })
            }
            Variant::Reverse => {
                let second = rank_mask(amplitude, s, 2)?.into_mask();
                let retain = if use_retention {
                    let block = low_freq_block(amplitude.shape(), config.low_freq_ratio)?;
                    Some(vital.intersect(&VitalMask::from_bits(block, s))?)
                } else {
                    None
                };
                Ok(Self {
                    protect: second.clone(),
                    jitter: second,
                    retain,
                    sigma_vital: config.sigma_vital,
                    sigma_nonvital: config.sigma_nonvital,
                })
            }
            Variant::Uniform => Ok(Self {
                protect: random_window_mask(amplitude.shape(), s, rng)?,
                jitter: vital,
                retain: None,
                sigma_vital: config.sigma_nonvital,
                sigma_nonvital: config.sigma_nonvital,
            }),
        }
    }
}

/// Phase change induced by a pixel op: rebuild the image from `amplitude` and
/// `phase`, apply the op, transform again and keep only the phase. The
/// identity op induces no change and skips the round trip.
fn pixel_phase_change(
    amplitude: &RealGrid,
    phase: &RealGrid,
    mode: spectrum::DftMode,
    op: PixelOp,
    magnitude: f64,
) -> Result<RealGrid> {
    if op == PixelOp::Identity {
        return Ok(phase.clone());
    }
    let polar = PolarSpectrum::new(amplitude.clone(), phase.clone(), Layout::Natural)?;
    let intermediate = spectrum::inverse(mode, &from_polar(&polar))?;
    let moved = op.apply(&intermediate, magnitude);
    Ok(to_polar(&spectrum::forward(mode, &moved)).into_parts().1)
}

/// Full augmentation up to, but excluding, the inverse transform.
///
/// Randomness is consumed from `rng` in a fixed order: one uniform for the
/// fractal decision, one for the amplitude-swap decision, then three forked
/// child streams for the `h`, `t` and `g` stages in that order.
pub fn vipaug_spectrum(
    image: &ImageTensor,
    partner: &ImageTensor,
    fractal_phase: Option<&RealGrid>,
    config: &AugmentConfig,
    rng: &mut RngStream,
) -> Result<(PolarSpectrum, StageTrace)> {
    config.validate()?;
    let shape = image.shape();
    if partner.shape() != shape {
        return Err(Error::mismatch(shape, partner.shape()));
    }
    if let Some(f) = fractal_phase {
        f.ensure_shape(shape)?;
    } else if config.p_fractal > 0.0 {
        return Err(Error::InvalidConfig(
            "p_fractal > 0 but no fractal phase was supplied".into(),
        ));
    }
    let ops = config.resolve_pixel_ops()?;
    let mode = config.dft_mode;

    let original = to_polar(&spectrum::forward(mode, image));
    let apply_fractal = rng.bernoulli(config.p_fractal);
    let apply_swap = rng.bernoulli(config.p_amplitude_swap);
    let mut h_rng = rng.fork();
    let mut t_rng = rng.fork();
    let mut g_rng = rng.fork();

    let roles = PhaseRoles::resolve(original.amplitude(), config, &mut h_rng)?;

    // h
    let mut phase = original.phase().clone();
    if apply_fractal {
        let fractal = fractal_phase.expect("checked above");
        phase = vipaug_f(&phase, &roles.protect, fractal, roles.retain.as_ref())?;
    }

    // t
    let (pixel_op, magnitude) = choose_pixel_op(&ops, &mut t_rng);
    phase = pixel_phase_change(original.amplitude(), &phase, mode, pixel_op, magnitude)?;

    // g
    phase = vipaug_g(
        &phase,
        &roles.jitter,
        roles.sigma_vital,
        roles.sigma_nonvital,
        &mut g_rng,
    )?;

    let staged = PolarSpectrum::new(original.amplitude().clone(), phase, Layout::Natural)?;
    let out = if apply_swap {
        apr_sp(&staged, &to_polar(&spectrum::forward(mode, partner)))?
    } else {
        staged
    };
    Ok((
        out,
        StageTrace {
            fractal: apply_fractal,
            amplitude_swap: apply_swap,
            pixel_op,
            magnitude,
        },
    ))
}

/// [`vipaug_spectrum`] followed by the inverse transform, realification and
/// clamping to `[0, 1]`.
pub fn vipaug_traced(
    image: &ImageTensor,
    partner: &ImageTensor,
    fractal_phase: Option<&RealGrid>,
    config: &AugmentConfig,
    rng: &mut RngStream,
) -> Result<(ImageTensor, StageTrace)> {
    let (polar, trace) = vipaug_spectrum(image, partner, fractal_phase, config, rng)?;
    let out = spectrum::inverse(config.dft_mode, &from_polar(&polar))?.clamp_unit();
    Ok((out, trace))
}

pub fn vipaug(
    image: &ImageTensor,
    partner: &ImageTensor,
    fractal_phase: Option<&RealGrid>,
    config: &AugmentConfig,
    rng: &mut RngStream,
) -> Result<ImageTensor> {
    vipaug_traced(image, partner, fractal_phase, config, rng).map(|(img, _)| img)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectrum::{dft3, DftMode};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;
    use vipaug_oracle as oracle;

    fn random_image(h: usize, w: usize, c: usize, seed: u64) -> ImageTensor {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let shape = Shape::new(h, w, c).unwrap();
        ImageTensor::new(shape, (0..shape.len()).map(|_| rng.random::<f64>()).collect()).unwrap()
    }

    fn random_phase(shape: Shape, seed: u64) -> RealGrid {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Grid::from_fn(shape, |_, _, _| rng.random_range(-3.1..3.1))
    }

    fn sample_std(values: &[f64]) -> f64 {
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
    }

    #[test]
    fn zero_sigma_is_exact_identity() {
        let shape = Shape::new(8, 8, 3).unwrap();
        let phase = random_phase(shape, 1);
        let mask = detect_vital(&random_phase(shape, 2).map(|p| p.abs()), 2).unwrap();
        let out = vipaug_g(&phase, &mask, 0.0, 0.0, &mut RngStream::new(9)).unwrap();
        assert_eq!(out, phase);
    }

    #[test]
    fn jitter_is_deterministic() {
        let shape = Shape::new(4, 4, 3).unwrap();
        let phase = random_phase(shape, 1);
        let mask = VitalMask::empty(shape, 2);
        let a = vipaug_g(&phase, &mask, 0.001, 0.014, &mut RngStream::new(5)).unwrap();
        let b = vipaug_g(&phase, &mask, 0.001, 0.014, &mut RngStream::new(5)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn jitter_std_per_class() {
        let shape = Shape::new(1, 100_000, 1).unwrap();
        let phase = random_phase(shape, 3);
        let mut rng = RngStream::new(17);
        let nonvital = vipaug_g(&phase, &VitalMask::empty(shape, 1), 0.001, 0.014, &mut rng).unwrap();
        let vital_mask = vitality::invert_mask(&VitalMask::empty(shape, 1));
        let vital = vipaug_g(&phase, &vital_mask, 0.001, 0.014, &mut rng).unwrap();
        let delta = |out: &RealGrid| -> Vec<f64> {
            out.as_slice()
                .iter()
                .zip(phase.as_slice())
                .map(|(o, p)| wrap_phase(o - p))
                .collect()
        };
        assert!((sample_std(&delta(&nonvital)) / 0.014 - 1.0).abs() < 0.05);
        assert!((sample_std(&delta(&vital)) / 0.001 - 1.0).abs() < 0.05);
    }

    #[test]
    fn jitter_stays_in_range() {
        let shape = Shape::new(1, 1000, 1).unwrap();
        let phase = Grid::filled(shape, PI);
        let out = vipaug_g(&phase, &VitalMask::empty(shape, 1), 0.0, 1.0, &mut RngStream::new(1)).unwrap();
        assert!(out.as_slice().iter().all(|p| *p > -PI && *p <= PI));
    }

    #[test]
    fn jitter_shape_mismatch() {
        let phase = random_phase(Shape::new(4, 4, 3).unwrap(), 1);
        let mask = VitalMask::empty(Shape::new(4, 4, 1).unwrap(), 2);
        assert!(matches!(
            vipaug_g(&phase, &mask, 0.0, 0.0, &mut RngStream::new(0)),
            Err(Error::ShapeMismatch { .. })
        ));
    }

    #[test]
    fn self_substitution_is_identity() {
        let shape = Shape::new(6, 6, 3).unwrap();
        let phase = random_phase(shape, 1);
        let mask = VitalMask::empty(shape, 2);
        assert_eq!(vipaug_f(&phase, &mask, &phase, None).unwrap(), phase);
    }

    #[test]
    fn substitution_three_way_selector() {
        let img = random_image(8, 8, 3, 4);
        let polar = to_polar(&dft3(&img));
        let amp = polar.amplitude();
        let vital = detect_vital(amp, 2).unwrap();
        let retain = low_freq_retain_mask(amp, 2, 0.25).unwrap().into_mask();
        let fractal = random_phase(amp.shape(), 5);
        let out = vipaug_f(polar.phase(), &vital, &fractal, Some(&retain)).unwrap();

        let vital_set = oracle::region_argmax(amp.as_slice(), 8, 8, 3, 2);
        let second_set = oracle::region_kth(amp.as_slice(), 8, 8, 3, 2, 2);
        let block = oracle::low_freq_block(8, 8, 0.25);
        let shape = amp.shape();
        for x in 0..8 {
            for y in 0..8 {
                for z in 0..3 {
                    let keep = vital_set.contains(&(x, y, z)) || (second_set.contains(&(x, y, z)) && block[x * 8 + y]);
                    let expected = if keep {
                        polar.phase().get(x, y, z)
                    } else {
                        fractal.get(x, y, z)
                    };
                    assert_eq!(out.as_slice()[shape.index(x, y, z)], *expected);
                }
            }
        }
    }

    #[test]
    fn fractal_phase_range_checked() {
        let shape = Shape::new(2, 2, 1).unwrap();
        let phase = random_phase(shape, 1);
        let bad = Grid::filled(shape, 4.0);
        assert!(vipaug_f(&phase, &VitalMask::empty(shape, 1), &bad, None).is_err());
    }

    #[test]
    fn retain_mask_ratio_extremes() {
        let amp = random_image(8, 8, 3, 6).grid().clone();
        assert_eq!(low_freq_retain_mask(&amp, 2, 0.0).unwrap().mask().count(), 0);
        assert_eq!(
            low_freq_retain_mask(&amp, 2, 1.0).unwrap().into_mask(),
            rank_mask(&amp, 2, 2).unwrap().into_mask()
        );
        assert!(low_freq_retain_mask(&amp, 2, 1.5).is_err());
    }

    #[test]
    fn quarter_block_matches_bounds() {
        let shape = Shape::new(8, 8, 3).unwrap();
        let block = low_freq_block(shape, 0.25).unwrap();
        let reference = oracle::low_freq_block(8, 8, 0.25);
        for x in 0..8 {
            for y in 0..8 {
                for z in 0..3 {
                    assert_eq!(*block.get(x, y, z), reference[x * 8 + y]);
                }
            }
        }
    }

    #[test]
    fn odd_and_uneven_blocks_match_bounds() {
        for (h, w, ratio) in [(7, 5, 4.0 / 9.0), (32, 32, 4.0 / 9.0), (9, 12, 0.3), (5, 5, 1.0)] {
            let block = low_freq_block(Shape::new(h, w, 1).unwrap(), ratio).unwrap();
            assert_eq!(
                block.as_slice(),
                oracle::low_freq_block(h, w, ratio).as_slice(),
                "{h}x{w} {ratio}"
            );
        }
    }

    #[test]
    fn amplitude_swap_is_definitional() {
        let a = to_polar(&dft3(&random_image(4, 4, 3, 1)));
        let b = to_polar(&dft3(&random_image(4, 4, 3, 2)));
        let out = apr_sp(&a, &b).unwrap();
        assert_eq!(out.amplitude(), b.amplitude());
        assert_eq!(out.phase(), a.phase());
        let other_shape = to_polar(&dft3(&random_image(4, 2, 3, 2)));
        assert!(apr_sp(&a, &other_shape).is_err());
    }

    #[test]
    fn amplitude_self_swap_reconstructs() {
        let img = random_image(8, 8, 3, 7);
        let polar = to_polar(&dft3(&img));
        let out = spectrum::idft3(&from_polar(&apr_sp(&polar, &polar).unwrap())).unwrap();
        assert!(out.max_abs_diff(&img) <= 1e-9);
    }

    #[test]
    fn amplitude_swap_carries_partner_energy() {
        let a = random_image(6, 6, 3, 8);
        let b = random_image(6, 6, 3, 9);
        let out = from_polar(&apr_sp(&to_polar(&dft3(&a)), &to_polar(&dft3(&b))).unwrap());
        let expected = oracle::energy(&oracle::naive_dft3(b.data(), 6, 6, 3));
        assert!((out.energy() - expected).abs() <= 1e-6 * expected);
    }

    #[test]
    fn identity_pixel_stage() {
        let img = random_image(5, 5, 3, 1);
        let config = AugmentConfig::disabled();
        assert_eq!(pixel_stage_t(&img, &config, &mut RngStream::new(1)).unwrap(), img);
    }

    #[test]
    fn pixel_stage_reproducible() {
        let img = random_image(8, 8, 3, 1);
        let config = AugmentConfig::cifar10();
        let a = pixel_stage_t(&img, &config, &mut RngStream::new(4)).unwrap();
        let b = pixel_stage_t(&img, &config, &mut RngStream::new(4)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn disabled_pipeline_is_identity() {
        let img = random_image(8, 8, 3, 2);
        let partner = random_image(8, 8, 3, 3);
        let out = vipaug(&img, &partner, None, &AugmentConfig::disabled(), &mut RngStream::new(0)).unwrap();
        assert!(out.max_abs_diff(&img) <= 1e-6);
    }

    #[test]
    fn cifar10_reference_config_runs() {
        let img = random_image(32, 32, 3, 2);
        let partner = random_image(32, 32, 3, 3);
        let fractal = to_polar(&dft3(&random_image(32, 32, 3, 4))).into_parts().1;
        let config = AugmentConfig::cifar10();
        assert_eq!(config.filter_size, 2);
        assert_eq!((config.sigma_vital, config.sigma_nonvital), (0.001, 0.014));
        for seed in 0..8 {
            let (polar, trace) =
                vipaug_spectrum(&img, &partner, Some(&fractal), &config, &mut RngStream::new(seed)).unwrap();
            assert!(polar.phase().as_slice().iter().all(|p| *p > -PI && *p <= PI));
            let own = to_polar(&dft3(&img));
            let expected_amp = if trace.amplitude_swap {
                to_polar(&dft3(&partner)).amplitude().clone()
            } else {
                own.amplitude().clone()
            };
            assert_eq!(polar.amplitude(), &expected_amp);
            let out = vipaug(&img, &partner, Some(&fractal), &config, &mut RngStream::new(seed)).unwrap();
            assert!(out.data().iter().all(|v| (0.0..=1.0).contains(v)));
        }
    }

    #[test]
    fn missing_fractal_is_config_error() {
        let img = random_image(4, 4, 3, 2);
        let err = vipaug(&img, &img, None, &AugmentConfig::cifar10(), &mut RngStream::new(0)).unwrap_err();
        assert!(matches!(err, Error::InvalidConfig(_)));
    }

    #[test]
    fn partner_shape_checked() {
        let img = random_image(4, 4, 3, 2);
        let partner = random_image(4, 5, 3, 2);
        let err = vipaug(&img, &partner, None, &AugmentConfig::disabled(), &mut RngStream::new(0)).unwrap_err();
        assert!(matches!(err, Error::ShapeMismatch { .. }));
    }

    #[test]
    fn two_d_mode_runs() {
        let img = random_image(8, 8, 3, 2);
        let config = AugmentConfig {
            dft_mode: DftMode::TwoD,
            ..AugmentConfig::disabled()
        };
        let out = vipaug(&img, &img, None, &config, &mut RngStream::new(0)).unwrap();
        assert!(out.max_abs_diff(&img) <= 1e-6);
    }

    #[test]
    fn reverse_roles_swap_rank_masks() {
        let amp = to_polar(&dft3(&random_image(8, 8, 3, 1))).into_parts().0;
        let std_cfg = AugmentConfig::cifar10();
        let rev_cfg = AugmentConfig {
            variant: Variant::Reverse,
            ..AugmentConfig::cifar10()
        };
        let standard = PhaseRoles::resolve(&amp, &std_cfg, &mut RngStream::new(0)).unwrap();
        let reverse = PhaseRoles::resolve(&amp, &rev_cfg, &mut RngStream::new(0)).unwrap();
        let vital = detect_vital(&amp, 2).unwrap();
        let second = rank_mask(&amp, 2, 2).unwrap().into_mask();
        assert_eq!(standard.protect, vital);
        assert_eq!(reverse.protect, second);
        // the protected sets are disjoint, so within the standard-protected
        // coordinates the reverse mask is the complement
        let within = reverse.protect.intersect(&standard.protect).unwrap();
        assert_eq!(within.count(), 0);
        // the retained low-frequency coordinates trade places too
        let block = VitalMask::from_bits(low_freq_block(amp.shape(), 4.0 / 9.0).unwrap(), 2);
        assert_eq!(standard.retain.unwrap(), second.intersect(&block).unwrap());
        assert_eq!(reverse.retain.unwrap(), vital.intersect(&block).unwrap());
    }

    #[test]
    fn uniform_roles_use_one_strength() {
        let amp = to_polar(&dft3(&random_image(8, 8, 3, 1))).into_parts().0;
        let cfg = AugmentConfig {
            variant: Variant::Uniform,
            sigma_vital: 0.005,
            sigma_nonvital: 0.005,
            ..AugmentConfig::cifar10()
        };
        let roles = PhaseRoles::resolve(&amp, &cfg, &mut RngStream::new(3)).unwrap();
        assert_eq!(roles.sigma_vital, roles.sigma_nonvital);
        assert!(roles.retain.is_none());
        assert_eq!(roles.protect.count(), 4 * 4 * 3);
        let again = PhaseRoles::resolve(&amp, &cfg, &mut RngStream::new(3)).unwrap();
        assert_eq!(roles.protect, again.protect);
    }

    #[test]
    fn random_window_mask_one_per_window() {
        let shape = Shape::new(7, 5, 2).unwrap();
        let mask = random_window_mask(shape, 2, &mut RngStream::new(1)).unwrap();
        assert_eq!(mask.count(), 4 * 3 * 2);
    }
}

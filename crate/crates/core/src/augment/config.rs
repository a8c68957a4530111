use serde::{Deserialize, Serialize};

use crate::augment::pixel::PixelOp;
use crate::error::{Error, Result};
use crate::spectrum::DftMode;

/// Ablation variants of the phase treatment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    /// Vital phases get weak jitter and survive fractal substitution.
    #[default]
    Standard,
    /// The second-largest coordinate of each window plays the vital role and
    /// the argmax coordinate is treated as non-vital.
    Reverse,
    /// One jitter strength everywhere; the coordinate protected from
    /// substitution is drawn uniformly per window instead of by amplitude.
    Uniform,
}

/// A pixel op and the range its magnitude is drawn from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PixelOpSpec {
    pub name: String,
    pub magnitude: [f64; 2],
}

impl PixelOpSpec {
    pub fn new(name: &str, lo: f64, hi: f64) -> Self {
        Self {
            name: name.to_owned(),
            magnitude: [lo, hi],
        }
    }
}

/// Every pipeline hyperparameter. Serialized field names are the JSON config
/// keys; unknown keys are rejected.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AugmentConfig {
    /// Jitter std-dev at vital coordinates, radians.
    pub sigma_vital: f64,
    /// Jitter std-dev at non-vital coordinates, radians.
    pub sigma_nonvital: f64,
    /// Side `S` of the argmax window.
    pub filter_size: usize,
    /// Area fraction of the centered low-frequency block in which the
    /// second-ranked coordinate of each window is kept from substitution.
    pub low_freq_ratio: f64,
    pub p_fractal: f64,
    pub p_amplitude_swap: f64,
    pub dft_mode: DftMode,
    pub variant: Variant,
    pub pixel_ops: Vec<PixelOpSpec>,
    pub seed: u64,
}

impl Default for AugmentConfig {
    fn default() -> Self {
        Self::cifar10()
    }
}

impl AugmentConfig {
    /// 2x2x1 filter, σ = 0.001 / 0.014, low-frequency retention over 4/9.
    pub fn cifar10() -> Self {
        Self {
            sigma_vital: 0.001,
            sigma_nonvital: 0.014,
            filter_size: 2,
            low_freq_ratio: 4.0 / 9.0,
            p_fractal: 0.5,
            p_amplitude_swap: 0.5,
            dft_mode: DftMode::ThreeD,
            variant: Variant::Standard,
            pixel_ops: default_pixel_ops(),
            seed: 0,
        }
    }

    /// σ = 0.005 / 0.012, no low-frequency retention.
    pub fn cifar100() -> Self {
        Self {
            sigma_vital: 0.005,
            sigma_nonvital: 0.012,
            low_freq_ratio: 0.0,
            ..Self::cifar10()
        }
    }

    /// σ = 0.001 / 0.005, low-frequency retention over 1/4.
    pub fn imagenet() -> Self {
        Self {
            sigma_vital: 0.001,
            sigma_nonvital: 0.005,
            low_freq_ratio: 0.25,
            ..Self::cifar10()
        }
    }

    /// Every stage off; the pipeline reduces to the identity.
    pub fn disabled() -> Self {
        Self {
            sigma_vital: 0.0,
            sigma_nonvital: 0.0,
            low_freq_ratio: 0.0,
            p_fractal: 0.0,
            p_amplitude_swap: 0.0,
            pixel_ops: vec![PixelOpSpec::new("identity", 0.0, 0.0)],
            ..Self::cifar10()
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let config: Self = serde_json::from_str(text).map_err(|e| Error::InvalidConfig(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        for (name, sigma) in [
            ("sigma_vital", self.sigma_vital),
            ("sigma_nonvital", self.sigma_nonvital),
        ] {
            if !(sigma.is_finite() && sigma >= 0.0) {
                return bad(format!("{name} must be a finite non-negative value, got {sigma}"));
            }
        }
        if self.variant == Variant::Standard && self.sigma_vital > self.sigma_nonvital {
            return bad(format!(
                "standard variant needs sigma_vital <= sigma_nonvital ({} > {})",
                self.sigma_vital, self.sigma_nonvital
            ));
        }
        for (name, p) in [
            ("low_freq_ratio", self.low_freq_ratio),
            ("p_fractal", self.p_fractal),
            ("p_amplitude_swap", self.p_amplitude_swap),
        ] {
            if !(0.0..=1.0).contains(&p) {
                return bad(format!("{name} must lie in [0, 1], got {p}"));
            }
        }
        if self.filter_size == 0 {
            return bad("filter_size must be positive".into());
        }
        if self.variant == Variant::Reverse && self.filter_size < 2 {
            return bad("reverse variant needs filter_size >= 2".into());
        }
        if self.pixel_ops.is_empty() {
            return bad("pixel_ops must list at least one op (use `identity` to disable)".into());
        }
        self.resolve_pixel_ops()?;
        Ok(())
    }

    /// Parses op names and checks magnitude ranges.
    pub fn resolve_pixel_ops(&self) -> Result<Vec<(PixelOp, [f64; 2])>> {
        self.pixel_ops
            .iter()
            .map(|spec| {
                let op: PixelOp = spec.name.parse()?;
                let [lo, hi] = spec.magnitude;
                if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
                    return Err(Error::InvalidConfig(format!(
                        "magnitude range for `{}` must be finite with lo <= hi",
                        spec.name
                    )));
                }
                Ok((op, spec.magnitude))
            })
            .collect()
    }
}

/// Rotate ±15°, translate ±20% of the extent, shear ±0.2, solarize,
/// posterize, equalize and identity.
pub fn default_pixel_ops() -> Vec<PixelOpSpec> {
    vec![
        PixelOpSpec::new("identity", 0.0, 0.0),
        PixelOpSpec::new("rotate", -15.0, 15.0),
        PixelOpSpec::new("translate_x", -0.2, 0.2),
        PixelOpSpec::new("translate_y", -0.2, 0.2),
        PixelOpSpec::new("shear_x", -0.2, 0.2),
        PixelOpSpec::new("shear_y", -0.2, 0.2),
        PixelOpSpec::new("solarize", 0.0, 1.0),
        PixelOpSpec::new("posterize", 4.0, 8.0),
        PixelOpSpec::new("equalize", 0.0, 0.0),
    ]
}

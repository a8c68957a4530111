//! Side-by-side inspection panels for one image.

use vipaug_core::analyzer::{nonvital_keep_mask, phase_ablation_reconstruct, NonVitalSelection, PhaseZeroing};
use vipaug_core::augment::{vipaug, vipaug_f, vipaug_g, AugmentConfig, PhaseRoles};
use vipaug_core::pool::{sample_phase, FractalPool};
use vipaug_core::spectrum::{self, from_polar, to_polar, Layout, PolarSpectrum};
use vipaug_core::vitality::detect_vital;
use vipaug_core::{Grid, ImageTensor, RealGrid, RngStream};

use crate::error::{CliError, Result};

pub const PANEL_COUNT: usize = 6;

fn reconstruct(amplitude: &RealGrid, phase: RealGrid, config: &AugmentConfig) -> Result<ImageTensor> {
    let polar = PolarSpectrum::new(amplitude.clone(), phase, Layout::Natural)?;
    Ok(spectrum::inverse(config.dft_mode, &from_polar(&polar))?.clamp_unit())
}

/// Original, vital-only, non-vital-only, G only, F only and the full pipeline.
///
/// The F panel shows the unchanged reconstruction when no pool is given or
/// `p_fractal` is zero. `partner` defaults to the image itself.
pub fn panels(
    image: &ImageTensor,
    config: &AugmentConfig,
    pool: Option<&FractalPool>,
    partner: Option<&ImageTensor>,
    seed: u64,
) -> Result<Vec<ImageTensor>> {
    config.validate().map_err(|e| CliError::Config(e.to_string()))?;
    if config.p_fractal > 0.0 && pool.is_none() {
        return Err(CliError::Config("p_fractal > 0 requires --pool".into()));
    }
    let mode = config.dft_mode;
    let s = config.filter_size;
    let mut rng = RngStream::new(seed);

    let polar = to_polar(&spectrum::forward(mode, image));
    let (amplitude, phase) = (polar.amplitude(), polar.phase());

    let vital = detect_vital(amplitude, s)?;
    let vital_only = phase_ablation_reconstruct(image, &vital, mode, PhaseZeroing::Angle)?;
    let second = nonvital_keep_mask(amplitude, s, NonVitalSelection::SecondRank, &mut rng)?;
    let nonvital_only = phase_ablation_reconstruct(image, &second, mode, PhaseZeroing::Angle)?;

    let roles = PhaseRoles::resolve(amplitude, config, &mut rng.fork())?;
    let jittered = vipaug_g(
        phase,
        &roles.jitter,
        roles.sigma_vital,
        roles.sigma_nonvital,
        &mut rng.fork(),
    )?;
    let g_only = reconstruct(amplitude, jittered, config)?;

    let fractal = pool.map(|p| sample_phase(p, &mut rng.fork())).transpose()?.map(|f| f.1);
    let substituted = match fractal {
        Some(f) if config.p_fractal > 0.0 => vipaug_f(phase, &roles.protect, f, roles.retain.as_ref())?,
        _ => phase.clone(),
    };
    let f_only = reconstruct(amplitude, substituted, config)?;

    let full = vipaug(image, partner.unwrap_or(image), fractal, config, &mut rng.fork())?;

    Ok(vec![image.clone(), vital_only, nonvital_only, g_only, f_only, full])
}

/// Places equally shaped panels left to right.
pub fn tile(panels: &[ImageTensor]) -> Result<ImageTensor> {
    let first = panels
        .first()
        .ok_or_else(|| CliError::Config("no panels to tile".into()))?;
    let shape = first.shape();
    if let Some(p) = panels.iter().find(|p| p.shape() != shape) {
        return Err(CliError::Config(format!(
            "panel shapes {} and {} differ",
            shape,
            p.shape()
        )));
    }
    let w = shape.width();
    let out_shape = vipaug_core::Shape::new(shape.height(), w * panels.len(), shape.channels())?;
    let grid = Grid::from_fn(out_shape, |x, y, z| panels[y / w].get(x, y % w, z));
    Ok(ImageTensor::from_grid(grid)?)
}

//! Diagnostics: phase-fluctuation counts, phase-ablation reconstructions and
//! corruption-error metrics.

use std::collections::HashMap;
use std::io::Read;

use crate::error::{Error, Result};
use crate::grid::{Grid, ImageTensor};
use crate::rng::RngStream;
use crate::spectrum::{self, from_polar, to_polar, wrap_phase, DftMode, Layout, PolarSpectrum};
use crate::vitality::{detect_vital, rank_mask, VitalMask};

/// For each threshold, the number of coordinates whose wrapped phase change
/// from `clean` to `corrupted` exceeds it.
pub fn count_phase_fluctuations(
    clean: &ImageTensor,
    corrupted: &ImageTensor,
    thresholds: &[f64],
    mode: DftMode,
) -> Result<Vec<usize>> {
    if clean.shape() != corrupted.shape() {
        return Err(Error::mismatch(clean.shape(), corrupted.shape()));
    }
    if let Some(t) = thresholds.iter().find(|t| !(t.is_finite() && **t >= 0.0)) {
        return Err(Error::InvalidInput(format!("threshold {t} must be non-negative")));
    }
    let before = to_polar(&spectrum::forward(mode, clean));
    let after = to_polar(&spectrum::forward(mode, corrupted));
    let mut deltas: Vec<f64> = before
        .phase()
        .as_slice()
        .iter()
        .zip(after.phase().as_slice())
        .map(|(p, q)| wrap_phase(q - p).abs())
        .collect();
    deltas.sort_by(f64::total_cmp);
    Ok(thresholds
        .iter()
        .map(|t| deltas.len() - deltas.partition_point(|d| d <= t))
        .collect())
}

/// What "setting a phase to 0" means outside the keep mask.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PhaseZeroing {
    /// Keep the amplitude, zero the angle.
    #[default]
    Angle,
    /// Zero the whole coefficient.
    Coefficient,
}

/// Spectrum with the original amplitude everywhere and the original phase only
/// inside `keep`.
pub fn phase_ablation_spectrum(
    image: &ImageTensor,
    keep: &VitalMask,
    mode: DftMode,
    zeroing: PhaseZeroing,
) -> Result<PolarSpectrum> {
    keep.bits().ensure_shape(image.shape())?;
    let polar = to_polar(&spectrum::forward(mode, image));
    let (amplitude, phase) = polar.into_parts();
    let phase = Grid::from_fn(phase.shape(), |x, y, z| {
        let i = phase.shape().index(x, y, z);
        if keep.contains(i) {
            phase.as_slice()[i]
        } else {
            0.0
        }
    });
    let amplitude = match zeroing {
        PhaseZeroing::Angle => amplitude,
        PhaseZeroing::Coefficient => Grid::from_fn(amplitude.shape(), |x, y, z| {
            let i = amplitude.shape().index(x, y, z);
            if keep.contains(i) {
                amplitude.as_slice()[i]
            } else {
                0.0
            }
        }),
    };
    PolarSpectrum::new(amplitude, phase, Layout::Natural)
}

/// Inverse of [`phase_ablation_spectrum`], realified and clamped to `[0, 1]`.
pub fn phase_ablation_reconstruct(
    image: &ImageTensor,
    keep: &VitalMask,
    mode: DftMode,
    zeroing: PhaseZeroing,
) -> Result<ImageTensor> {
    let polar = phase_ablation_spectrum(image, keep, mode, zeroing)?;
    Ok(spectrum::inverse(mode, &from_polar(&polar))?.clamp_unit())
}

/// How to pick a non-vital keep set of the same size as the vital set.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NonVitalSelection {
    /// Second-largest amplitude of each window.
    SecondRank,
    /// Uniform random subset of the non-vital coordinates.
    RandomSubset,
}

/// A keep mask over non-vital coordinates with as many marks as the vital
/// mask (for the second-rank option, as many as there are full windows).
pub fn nonvital_keep_mask(
    amplitude: &crate::grid::RealGrid,
    filter_size: usize,
    selection: NonVitalSelection,
    rng: &mut RngStream,
) -> Result<VitalMask> {
    match selection {
        NonVitalSelection::SecondRank => Ok(rank_mask(amplitude, filter_size, 2)?.into_mask()),
        NonVitalSelection::RandomSubset => {
            let vital = detect_vital(amplitude, filter_size)?;
            let mut candidates: Vec<usize> = (0..amplitude.shape().len()).filter(|&i| !vital.contains(i)).collect();
            let want = vital.count().min(candidates.len());
            // partial Fisher-Yates
            for k in 0..want {
                let j = k + rng.index(candidates.len() - k);
                candidates.swap(k, j);
            }
            let mut bits = Grid::filled(amplitude.shape(), false);
            for &i in &candidates[..want] {
                bits.as_mut_slice()[i] = true;
            }
            Ok(VitalMask::from_bits(bits, filter_size))
        }
    }
}

pub const SEVERITIES: usize = 5;

/// Per-corruption error percentages at the five severities.
#[derive(Debug, Clone, PartialEq)]
pub struct CorruptionErrorTable {
    pub network_name: String,
    rows: Vec<(String, [f64; SEVERITIES])>,
}

impl CorruptionErrorTable {
    pub fn new(network_name: impl Into<String>, rows: Vec<(String, [f64; SEVERITIES])>) -> Result<Self> {
        let mut seen = std::collections::HashSet::new();
        for (name, errors) in &rows {
            if !seen.insert(name.as_str()) {
                return Err(Error::Table(format!("duplicate corruption `{name}`")));
            }
            if let Some(e) = errors.iter().find(|e| !(0.0..=100.0).contains(*e)) {
                return Err(Error::Table(format!("error {e} for `{name}` outside [0, 100]")));
            }
        }
        Ok(Self {
            network_name: network_name.into(),
            rows,
        })
    }

    /// Parses `corruption,s1,s2,s3,s4,s5` CSV.
    pub fn from_csv(reader: impl Read, network_name: impl Into<String>) -> Result<Self> {
        let mut csv = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
        let header = csv.headers().map_err(|e| Error::Table(e.to_string()))?;
        let expected = ["corruption", "s1", "s2", "s3", "s4", "s5"];
        if header.iter().ne(expected.iter().copied()) {
            return Err(Error::Table(format!(
                "header must be `{}`, got `{}`",
                expected.join(","),
                header.iter().collect::<Vec<_>>().join(",")
            )));
        }
        let mut rows = Vec::new();
        for record in csv.records() {
            let record = record.map_err(|e| Error::Table(e.to_string()))?;
            let name = record[0].to_owned();
            let mut errors = [0.0; SEVERITIES];
            for (s, slot) in errors.iter_mut().enumerate() {
                *slot = record[s + 1]
                    .parse()
                    .map_err(|e| Error::Table(format!("`{name}` s{}: {e}", s + 1)))?;
            }
            rows.push((name, errors));
        }
        Self::new(network_name, rows)
    }

    pub fn rows(&self) -> &[(String, [f64; SEVERITIES])] {
        &self.rows
    }

    pub fn corruption_names(&self) -> impl Iterator<Item = &str> {
        self.rows.iter().map(|(n, _)| n.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MceReport {
    /// CE in percent, in the network table's row order.
    pub per_corruption: Vec<(String, f64)>,
    pub mce: f64,
}

/// `CE_c = 100 · Σ_s E_{s,c} / Σ_s E^ref_{s,c}` and their arithmetic mean.
pub fn compute_mce(network: &CorruptionErrorTable, reference: &CorruptionErrorTable) -> Result<MceReport> {
    if network.rows.is_empty() {
        return Err(Error::Table("network table has no rows".into()));
    }
    let reference_rows: HashMap<&str, &[f64; SEVERITIES]> =
        reference.rows.iter().map(|(n, e)| (n.as_str(), e)).collect();
    if reference_rows.len() != network.rows.len() {
        return Err(Error::Table(format!(
            "tables cover {} and {} corruptions",
            network.rows.len(),
            reference_rows.len()
        )));
    }
    let mut per_corruption = Vec::with_capacity(network.rows.len());
    for (name, errors) in &network.rows {
        let reference_errors = reference_rows
            .get(name.as_str())
            .ok_or_else(|| Error::Table(format!("reference has no `{name}` row")))?;
        let denominator: f64 = reference_errors.iter().sum();
        if denominator == 0.0 {
            return Err(Error::Table(format!("reference errors for `{name}` sum to zero")));
        }
        per_corruption.push((name.clone(), 100.0 * errors.iter().sum::<f64>() / denominator));
    }
    let mce = per_corruption.iter().map(|(_, ce)| ce).sum::<f64>() / per_corruption.len() as f64;
    Ok(MceReport { per_corruption, mce })
}

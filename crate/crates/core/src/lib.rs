//! Vital-phase frequency-domain image augmentation.
//!
//! An image is lifted into the frequency domain with a 3D (or per-channel 2D)
//! DFT and split into amplitude and phase. Phase coordinates holding the
//! largest amplitude inside each `S x S x 1` window are "vital". The
//! augmentation then
//!
//! * jitters phases with Gaussian noise, weakly at vital coordinates and
//!   strongly elsewhere ([`augment::vipaug_g`]),
//! * substitutes non-vital phases with the phases of a classless image from a
//!   [`pool::FractalPool`] ([`augment::vipaug_f`]),
//! * replaces the amplitude spectrum with another image's ([`augment::apr_sp`]),
//!
//! composed as `g ∘ t ∘ h` with a pixel-space stage `t` in between
//! ([`augment::vipaug`]). The [`analyzer`] module holds the diagnostics:
//! phase-fluctuation counting, phase-ablation reconstructions and CE/mCE.

pub mod analyzer;
pub mod augment;
pub mod error;
pub mod grid;
pub mod io;
pub mod pool;
pub mod rng;
pub mod spectrum;
pub mod vitality;

pub use error::{Error, Result};
pub use grid::{Grid, ImageTensor, RealGrid, Shape};
pub use rng::RngStream;

//! Mu-band suppression detection for motor-cortex EEG.
//!
//! The pipeline has three stages: a Hamming-windowed periodogram of each
//! central-motor-cortex channel restricted to the mu band, a generalized
//! extreme value (GEV) fit of the pooled band power, and a linear
//! discriminant classifier over the fitted `(location, scale, shape)`
//! triples.
//!
//! Modules map onto those stages:
//!
//! * [`eeg`]: records, labels, file formats and the surrogate generator.
//! * [`dsp`]: Butterworth band-limiting and periodogram estimation.
//! * [`gev`]: the distribution, its estimators and goodness-of-fit.
//! * [`features`]: epoch to feature-vector extraction.
//! * [`classify`]: LDA and repeated stratified cross-validation.

// Negated comparisons are how NaN inputs get rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod classify;
pub mod dsp;
pub mod eeg;
pub mod features;
pub mod gev;

pub use classify::{CvConfig, CvReport, LdaModel};
pub use dsp::{BiquadCascade, FilterSpec, Spectrum};
pub use eeg::{Epoch, EventLabel, MultichannelRecord};
pub use features::{FeatureVector, PipelineConfig};
pub use gev::{FitResult, GevEstimator, GevParams, GofReport, ParamSummary};

/// Electrodes over the central motor cortex, in montage order.
pub const CENTRAL_CHANNELS: [&str; 7] = ["C5", "C3", "C1", "Cz", "C2", "C4", "C6"];

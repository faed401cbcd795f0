//! Butterworth band-limiting and periodogram estimation.

mod filter;
mod spectrum;

pub use filter::{apply_filter, design_butterworth_bandpass, Biquad, BiquadCascade, FilterSpec};
pub use spectrum::{band_extract, hamming_window, periodogram, periodogram_segments, Spectrum};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DspError {
    #[error("invalid filter: {0}")]
    InvalidFilter(String),
    #[error("window length must be at least 2, got {0}")]
    WindowTooShort(usize),
    #[error("segment length must be at least 8 samples, got {0}")]
    SegmentTooShort(usize),
    #[error("signal of {len} samples is shorter than one {segment_len}-sample segment")]
    SignalTooShort { len: usize, segment_len: usize },
    #[error("invalid band [{low_hz}, {high_hz}] Hz")]
    InvalidBand { low_hz: f64, high_hz: f64 },
    #[error("band [{low_hz}, {high_hz}] Hz contains no spectrum bins")]
    EmptyBand { low_hz: f64, high_hz: f64 },
}

/// Default segment length: half a second of samples.
pub fn auto_segment_len(sample_rate: f64) -> usize {
    (sample_rate / 2.0).round() as usize
}

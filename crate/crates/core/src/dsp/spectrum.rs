use std::f64::consts::PI;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::DspError;

/// One-sided power spectral density, µV²/Hz.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    pub freqs_hz: Vec<f64>,
    pub power: Vec<f64>,
    pub segment_count: usize,
    pub window_name: String,
}

impl Spectrum {
    /// Bin spacing, or 0 for a single-bin spectrum.
    pub fn resolution_hz(&self) -> f64 {
        match self.freqs_hz.as_slice() {
            [a, b, ..] => b - a,
            _ => 0.0,
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("freq_hz,power\n");
        for (f, p) in self.freqs_hz.iter().zip(&self.power) {
            let _ = writeln!(out, "{f},{p}");
        }
        out
    }
}

/// Symmetric Hamming window `0.54 - 0.46 cos(2πn/(L-1))`, `n = 0..L`.
pub fn hamming_window(length: usize) -> Result<Vec<f64>, DspError> {
    if length < 2 {
        return Err(DspError::WindowTooShort(length));
    }
    let last = (length - 1) as f64;
    let mut w = vec![0.0; length];
    for n in 0..length.div_ceil(2) {
        let v = 0.54 - 0.46 * (2.0 * PI * n as f64 / last).cos();
        w[n] = v;
        w[length - 1 - n] = v;
    }
    Ok(w)
}

/// Hamming-windowed periodogram of each non-overlapping segment of `signal`.
///
/// Each segment of length `L` gives
/// `P(f_k) = Δt / U · |Σ_n x_n h_n e^{-2πi k n / L}|²` at `f_k = k / (L Δt)`,
/// `U = Σ h_n²`, folded to one side so that `Σ_k P(f_k) Δf` equals the
/// windowed segment energy `Σ (x_n h_n)² / U`. Trailing samples that do not
/// fill a segment are dropped.
pub fn periodogram_segments(signal: &[f64], sample_rate: f64, segment_len: usize) -> Result<Vec<Spectrum>, DspError> {
    if segment_len < 8 {
        return Err(DspError::SegmentTooShort(segment_len));
    }
    if signal.len() < segment_len {
        return Err(DspError::SignalTooShort {
            len: signal.len(),
            segment_len,
        });
    }
    let window = hamming_window(segment_len)?;
    let energy: f64 = window.iter().map(|w| w * w).sum();
    let dt = 1.0 / sample_rate;
    let bins = segment_len / 2 + 1;
    let freqs: Vec<f64> = (0..bins).map(|k| k as f64 * sample_rate / segment_len as f64).collect();
    let (cos, sin): (Vec<f64>, Vec<f64>) = (0..segment_len)
        .map(|j| {
            let a = 2.0 * PI * j as f64 / segment_len as f64;
            (a.cos(), a.sin())
        })
        .unzip();

    let spectra = signal
        .chunks_exact(segment_len)
        .map(|seg| {
            let tapered: Vec<f64> = seg.iter().zip(&window).map(|(x, h)| x * h).collect();
            let power = (0..bins)
                .map(|k| {
                    let (mut re, mut im) = (0.0, 0.0);
                    for (n, v) in tapered.iter().enumerate() {
                        let j = (k * n) % segment_len;
                        re += v * cos[j];
                        im -= v * sin[j];
                    }
                    let two_sided = dt / energy * (re * re + im * im);
                    let nyquist = segment_len.is_multiple_of(2) && k == segment_len / 2;
                    if k == 0 || nyquist {
                        two_sided
                    } else {
                        2.0 * two_sided
                    }
                })
                .collect();
            Spectrum {
                freqs_hz: freqs.clone(),
                power,
                segment_count: 1,
                window_name: "hamming".into(),
            }
        })
        .collect();
    Ok(spectra)
}

/// Segment-averaged periodogram; see [`periodogram_segments`].
pub fn periodogram(signal: &[f64], sample_rate: f64, segment_len: usize) -> Result<Spectrum, DspError> {
    let segments = periodogram_segments(signal, sample_rate, segment_len)?;
    let count = segments.len();
    let mut power = vec![0.0; segments[0].power.len()];
    for s in &segments {
        for (acc, p) in power.iter_mut().zip(&s.power) {
            *acc += p;
        }
    }
    power.iter_mut().for_each(|p| *p /= count as f64);
    Ok(Spectrum {
        freqs_hz: segments[0].freqs_hz.clone(),
        power,
        segment_count: count,
        window_name: "hamming".into(),
    })
}

/// Keeps bins with `low_hz <= f <= high_hz`.
pub fn band_extract(spectrum: &Spectrum, low_hz: f64, high_hz: f64) -> Result<Spectrum, DspError> {
    if !(low_hz < high_hz) {
        return Err(DspError::InvalidBand { low_hz, high_hz });
    }
    let (freqs_hz, power): (Vec<f64>, Vec<f64>) = spectrum
        .freqs_hz
        .iter()
        .zip(&spectrum.power)
        .filter(|(f, _)| **f >= low_hz && **f <= high_hz)
        .map(|(f, p)| (*f, *p))
        .unzip();
    if freqs_hz.is_empty() {
        return Err(DspError::EmptyBand { low_hz, high_hz });
    }
    Ok(Spectrum {
        freqs_hz,
        power,
        segment_count: spectrum.segment_count,
        window_name: spectrum.window_name.clone(),
    })
}

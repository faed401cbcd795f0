use std::f64::consts::PI;

use rustfft::num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::DspError;
use crate::eeg::MultichannelRecord;

/// Butterworth band-limiting filter: a high-pass at `low_cut_hz` followed by a
/// low-pass at `high_cut_hz`, both of order `order`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FilterSpec {
    pub order: usize,
    pub low_cut_hz: f64,
    pub high_cut_hz: f64,
    pub sample_rate: f64,
}

impl FilterSpec {
    pub fn new(order: usize, low_cut_hz: f64, high_cut_hz: f64, sample_rate: f64) -> Result<Self, DspError> {
        let spec = Self {
            order,
            low_cut_hz,
            high_cut_hz,
            sample_rate,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<(), DspError> {
        if self.order < 1 {
            return Err(DspError::InvalidFilter("order must be at least 1".into()));
        }
        let nyquist = self.sample_rate / 2.0;
        if !(self.low_cut_hz > 0.0 && self.low_cut_hz < self.high_cut_hz && self.high_cut_hz < nyquist) {
            return Err(DspError::InvalidFilter(format!(
                "cutoffs must satisfy 0 < {} < {} < {nyquist} (Nyquist)",
                self.low_cut_hz, self.high_cut_hz
            )));
        }
        Ok(())
    }

    /// Same cutoffs and order at a different sample rate.
    pub fn at_rate(&self, sample_rate: f64) -> Result<Self, DspError> {
        Self::new(self.order, self.low_cut_hz, self.high_cut_hz, sample_rate)
    }
}

/// One second-order section, `a0` normalized to 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Biquad {
    pub b0: f64,
    pub b1: f64,
    pub b2: f64,
    pub a1: f64,
    pub a2: f64,
}

impl Biquad {
    pub fn response(&self, z_inv: Complex64) -> Complex64 {
        let z2 = z_inv * z_inv;
        (self.b0 + self.b1 * z_inv + self.b2 * z2) / (1.0 + self.a1 * z_inv + self.a2 * z2)
    }

    /// Roots of `z^2 + a1 z + a2`.
    pub fn poles(&self) -> [Complex64; 2] {
        let disc = Complex64::new(self.a1 * self.a1 - 4.0 * self.a2, 0.0).sqrt();
        [(-self.a1 + disc) / 2.0, (-self.a1 - disc) / 2.0]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BiquadCascade {
    pub sections: Vec<Biquad>,
    pub gain: f64,
}

impl BiquadCascade {
    /// Complex frequency response at `freq_hz`.
    pub fn response(&self, freq_hz: f64, sample_rate: f64) -> Complex64 {
        let z_inv = Complex64::from_polar(1.0, -2.0 * PI * freq_hz / sample_rate);
        self.sections
            .iter()
            .fold(Complex64::new(self.gain, 0.0), |acc, s| acc * s.response(z_inv))
    }

    pub fn magnitude(&self, freq_hz: f64, sample_rate: f64) -> f64 {
        self.response(freq_hz, sample_rate).norm()
    }

    pub fn max_pole_modulus(&self) -> f64 {
        self.sections
            .iter()
            .flat_map(|s| s.poles())
            .map(|p| p.norm())
            .fold(0.0, f64::max)
    }

    /// Causal filtering from zero initial state (transposed direct form II).
    pub fn process(&self, input: &[f64]) -> Vec<f64> {
        let mut out: Vec<f64> = input.iter().map(|x| x * self.gain).collect();
        for s in &self.sections {
            let (mut z1, mut z2) = (0.0, 0.0);
            for v in out.iter_mut() {
                let x = *v;
                let y = s.b0 * x + z1;
                z1 = s.b1 * x - s.a1 * y + z2;
                z2 = s.b2 * x - s.a2 * y;
                *v = y;
            }
        }
        out
    }
}

#[derive(Clone, Copy)]
enum Pass {
    Low,
    High,
}

/// Bilinear-transform sections of an order-`order` Butterworth prototype,
/// prewarped so the −3 dB point lands exactly on `cutoff_hz`.
fn butterworth_sections(order: usize, cutoff_hz: f64, sample_rate: f64, pass: Pass) -> Vec<Biquad> {
    let k = (PI * cutoff_hz / sample_rate).tan();
    let k2 = k * k;
    let mut sections = Vec::with_capacity(order.div_ceil(2));
    for i in 1..=order / 2 {
        let q = 1.0 / (2.0 * ((2 * i - 1) as f64 * PI / (2 * order) as f64).sin());
        let norm = 1.0 / (1.0 + k / q + k2);
        let a1 = 2.0 * (k2 - 1.0) * norm;
        let a2 = (1.0 - k / q + k2) * norm;
        let (b0, b1, b2) = match pass {
            Pass::Low => (k2 * norm, 2.0 * k2 * norm, k2 * norm),
            Pass::High => (norm, -2.0 * norm, norm),
        };
        sections.push(Biquad { b0, b1, b2, a1, a2 });
    }
    if order % 2 == 1 {
        let a1 = (k - 1.0) / (k + 1.0);
        let (b0, b1) = match pass {
            Pass::Low => (k / (1.0 + k), k / (1.0 + k)),
            Pass::High => (1.0 / (1.0 + k), -1.0 / (1.0 + k)),
        };
        sections.push(Biquad {
            b0,
            b1,
            b2: 0.0,
            a1,
            a2: 0.0,
        });
    }
    sections
}

pub fn design_butterworth_bandpass(spec: &FilterSpec) -> Result<BiquadCascade, DspError> {
    spec.validate()?;
    let mut sections = butterworth_sections(spec.order, spec.low_cut_hz, spec.sample_rate, Pass::High);
    sections.extend(butterworth_sections(
        spec.order,
        spec.high_cut_hz,
        spec.sample_rate,
        Pass::Low,
    ));
    Ok(BiquadCascade { sections, gain: 1.0 })
}

/// Filters every channel independently; dimensions and rate are preserved.
pub fn apply_filter(cascade: &BiquadCascade, record: &MultichannelRecord) -> MultichannelRecord {
    let columns: Vec<Vec<f64>> = record.columns().iter().map(|c| cascade.process(c)).collect();
    MultichannelRecord::from_columns(&columns, record.channel_names().to_vec(), record.sample_rate())
        .expect("stable filter keeps a valid record valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn db(x: f64) -> f64 {
        20.0 * x.log10()
    }

    fn default_cascade() -> BiquadCascade {
        design_butterworth_bandpass(&FilterSpec::new(4, 8.0, 30.0, 512.0).unwrap()).unwrap()
    }

    #[test]
    fn cutoffs_are_half_power() {
        let c = default_cascade();
        assert_eq!(c.sections.len(), 4);
        for f in [8.0, 30.0] {
            let g = db(c.magnitude(f, 512.0));
            assert!((g + 3.0).abs() <= 0.5, "{f} Hz: {g} dB");
        }
    }

    #[test]
    fn dc_is_annihilated_and_midband_passes() {
        let c = default_cascade();
        assert!(c.magnitude(0.0, 512.0) < 1e-12);
        assert!(c.magnitude(15.5, 512.0) >= 0.95);
    }

    #[test]
    fn stable_for_assorted_specs() {
        for order in 1..=8 {
            for (lo, hi, fs) in [(8.0, 30.0, 512.0), (0.5, 40.0, 256.0), (1.0, 120.0, 250.0)] {
                let c = design_butterworth_bandpass(&FilterSpec::new(order, lo, hi, fs).unwrap()).unwrap();
                assert!(c.max_pole_modulus() < 1.0 - 1e-8, "order {order} {lo}-{hi}@{fs}");
            }
        }
    }

    #[test]
    fn odd_order_still_half_power() {
        let c = design_butterworth_bandpass(&FilterSpec::new(3, 8.0, 30.0, 512.0).unwrap()).unwrap();
        assert!((db(c.magnitude(30.0, 512.0)) + 3.0).abs() <= 0.5);
    }

    #[test]
    fn nyquist_violations() {
        assert!(FilterSpec::new(4, 8.0, 300.0, 512.0).is_err());
        assert!(FilterSpec::new(4, 30.0, 8.0, 512.0).is_err());
        assert!(FilterSpec::new(4, 0.0, 8.0, 512.0).is_err());
        assert!(FilterSpec::new(0, 8.0, 30.0, 512.0).is_err());
    }

    #[test]
    fn impulse_matches_direct_recursion() {
        let s = Biquad {
            b0: 0.2,
            b1: 0.3,
            b2: -0.1,
            a1: -0.5,
            a2: 0.25,
        };
        let cascade = BiquadCascade {
            sections: vec![s],
            gain: 1.0,
        };
        let mut x = vec![0.0; 64];
        x[0] = 1.0;
        let y = cascade.process(&x);
        // direct form I: y[n] = b0 x[n] + b1 x[n-1] + b2 x[n-2] - a1 y[n-1] - a2 y[n-2]
        let mut expected = vec![0.0; 64];
        for n in 0..64 {
            let xm = |k: usize| if n >= k { x[n - k] } else { 0.0 };
            let ym = |k: usize, e: &Vec<f64>| if n >= k { e[n - k] } else { 0.0 };
            expected[n] =
                s.b0 * xm(0) + s.b1 * xm(1) + s.b2 * xm(2) - s.a1 * ym(1, &expected) - s.a2 * ym(2, &expected);
        }
        for (a, b) in y.iter().zip(&expected) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    fn record(cols: Vec<Vec<f64>>) -> MultichannelRecord {
        let names = (0..cols.len()).map(|i| format!("c{i}")).collect();
        MultichannelRecord::from_columns(&cols, names, 512.0).unwrap()
    }

    #[test]
    fn zero_in_zero_out() {
        let r = record(vec![vec![0.0; 512]; 2]);
        let out = apply_filter(&default_cascade(), &r);
        assert!(out.samples().iter().all(|v| *v == 0.0));
        assert_eq!(out.n_samples(), 512);
    }

    #[test]
    fn slow_sinusoid_is_rejected() {
        let fs = 512.0;
        let x: Vec<f64> = (0..4 * 512).map(|n| (2.0 * PI * 2.0 * n as f64 / fs).sin()).collect();
        let out = apply_filter(&default_cascade(), &record(vec![x.clone()]));
        let y = out.channel(0);
        let rms = |v: &[f64]| (v.iter().map(|a| a * a).sum::<f64>() / v.len() as f64).sqrt();
        assert!(rms(&y[512..]) < 0.05 * rms(&x[512..]));
    }
}

//! Band-limited Gaussian surrogate epochs, one gain per event class.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use super::{EegError, Epoch, EventLabel, MultichannelRecord};
use crate::CENTRAL_CHANNELS;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurrogateConfig {
    /// RMS gain per class, indexed by [`EventLabel::index`]
    /// (imagery, movement, resting).
    pub gains: [f64; 3],
    /// Expected RMS of a unit-gain channel, µV.
    pub base_rms_uv: f64,
    pub band_low_hz: f64,
    pub band_high_hz: f64,
}

impl Default for SurrogateConfig {
    fn default() -> Self {
        Self {
            gains: [3.0, 2.0, 1.0],
            base_rms_uv: 10.0,
            band_low_hz: 8.0,
            band_high_hz: 30.0,
        }
    }
}

pub fn synthesize_surrogate(
    class: EventLabel,
    duration_s: f64,
    sample_rate: f64,
    seed: u64,
) -> Result<Epoch, EegError> {
    synthesize_surrogate_with(class, duration_s, sample_rate, seed, &SurrogateConfig::default())
}

/// Seven central channels of Gaussian noise confined to the configured band.
///
/// White noise is drawn per channel, every DFT bin outside the band is
/// zeroed, and the result is scaled so the expected channel RMS equals
/// `gain * base_rms_uv`. The noise depends only on `seed`, so two classes
/// synthesized with the same seed differ by their gain alone.
pub fn synthesize_surrogate_with(
    class: EventLabel,
    duration_s: f64,
    sample_rate: f64,
    seed: u64,
    cfg: &SurrogateConfig,
) -> Result<Epoch, EegError> {
    if !(duration_s > 0.0) {
        return Err(EegError::NonPositiveDuration(duration_s));
    }
    if !(sample_rate >= 64.0) {
        return Err(EegError::SampleRateTooLow(sample_rate));
    }
    let n = (duration_s * sample_rate).round() as usize;
    if n < 2 {
        return Err(EegError::NonPositiveDuration(duration_s));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let fft = FftPlanner::<f64>::new().plan_fft_forward(n);
    let ifft = FftPlanner::<f64>::new().plan_fft_inverse(n);

    let in_band = |k: usize| {
        let f = k.min(n - k) as f64 * sample_rate / n as f64;
        f >= cfg.band_low_hz && f <= cfg.band_high_hz
    };
    let kept = (0..n).filter(|&k| in_band(k)).count();
    if kept == 0 {
        return Err(EegError::InvalidRecord(
            "surrogate band contains no frequency bins".into(),
        ));
    }
    // Zeroing bins keeps a fraction kept/n of unit white-noise variance.
    let gain = cfg.gains[class.index()] * cfg.base_rms_uv / (kept as f64 / n as f64).sqrt();

    let columns: Vec<Vec<f64>> = CENTRAL_CHANNELS
        .iter()
        .map(|_| {
            let mut buf: Vec<Complex64> = (0..n)
                .map(|_| Complex64::new(StandardNormal.sample(&mut rng), 0.0))
                .collect();
            fft.process(&mut buf);
            for (k, c) in buf.iter_mut().enumerate() {
                if !in_band(k) {
                    *c = Complex64::new(0.0, 0.0);
                }
            }
            ifft.process(&mut buf);
            buf.iter().map(|c| c.re / n as f64 * gain).collect()
        })
        .collect();

    let record = MultichannelRecord::from_columns(
        &columns,
        CENTRAL_CHANNELS.iter().map(|s| s.to_string()).collect(),
        sample_rate,
    )?;
    Ok(Epoch {
        record,
        label: Some(class),
        subject_id: "surrogate".into(),
        epoch_id: format!("{}-{seed}", class.name()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsp::periodogram;

    fn rms(r: &MultichannelRecord) -> f64 {
        (r.samples().iter().map(|v| v * v).sum::<f64>() / r.samples().len() as f64).sqrt()
    }

    #[test]
    fn deterministic() {
        let a = synthesize_surrogate(EventLabel::Imagery, 2.0, 512.0, 1).unwrap();
        let b = synthesize_surrogate(EventLabel::Imagery, 2.0, 512.0, 1).unwrap();
        assert_eq!(a, b);
        let c = synthesize_surrogate(EventLabel::Imagery, 2.0, 512.0, 2).unwrap();
        assert_ne!(a.record, c.record);
        assert_eq!(a.record.n_samples(), 1024);
        assert_eq!(a.record.n_channels(), 7);
    }

    #[test]
    fn rms_follows_class_ordering() {
        for seed in 0..20 {
            let [i, m, r] = EventLabel::ALL.map(|c| rms(&synthesize_surrogate(c, 2.0, 512.0, seed).unwrap().record));
            assert!(i > m && m > r, "seed {seed}: {i} {m} {r}");
        }
    }

    #[test]
    fn power_outside_band_is_negligible() {
        let e = synthesize_surrogate(EventLabel::Movement, 2.0, 512.0, 9).unwrap();
        for ch in 0..7 {
            let x = e.record.channel(ch);
            let s = periodogram(&x, 512.0, x.len()).unwrap();
            let total: f64 = s.power.iter().sum();
            let outside: f64 = s
                .freqs_hz
                .iter()
                .zip(&s.power)
                .filter(|(f, _)| **f < 4.0 || **f > 40.0)
                .map(|(_, p)| p)
                .sum();
            assert!(outside < 0.01 * total, "channel {ch}: {outside} of {total}");
        }
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(matches!(
            synthesize_surrogate(EventLabel::Resting, 0.0, 512.0, 1),
            Err(EegError::NonPositiveDuration(_))
        ));
        assert!(matches!(
            synthesize_surrogate(EventLabel::Resting, -1.0, 512.0, 1),
            Err(EegError::NonPositiveDuration(_))
        ));
        assert!(synthesize_surrogate(EventLabel::Resting, 1.0, 32.0, 1).is_err());
    }
}

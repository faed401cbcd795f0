//! Reference class geometry in `(μ, σ, ξ)` space and a point-cloud sampler
//! around it, for exercising the classifier without EEG recordings.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::eeg::EventLabel;
use crate::features::FeatureVector;
use crate::gev::GevParams;

/// Mean and 95% interval of one fitted parameter across many epochs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParamStat {
    pub mean: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

impl ParamStat {
    pub const fn new(mean: f64, ci_low: f64, ci_high: f64) -> Self {
        Self { mean, ci_low, ci_high }
    }

    pub fn half_width(&self) -> f64 {
        (self.ci_high - self.ci_low) / 2.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassStats {
    pub label: EventLabel,
    pub location: ParamStat,
    pub scale: ParamStat,
    pub shape: ParamStat,
}

impl ClassStats {
    pub fn mean_theta(&self) -> [f64; 3] {
        [self.location.mean, self.scale.mean, self.shape.mean]
    }
}

/// Per-class means and intervals of GEV fits to mu-band periodograms of
/// central-motor-cortex EEG (imagery, movement, resting).
pub const REFERENCE_CLASSES: [ClassStats; 3] = [
    ClassStats {
        label: EventLabel::Imagery,
        location: ParamStat::new(196_975.08, 149_574.66, 244_375.50),
        scale: ParamStat::new(143_275.14, 110_712.36, 185_415.39),
        shape: ParamStat::new(0.09, -0.21, 0.38),
    },
    ClassStats {
        label: EventLabel::Movement,
        location: ParamStat::new(33_551.02, 23_148.30, 43_953.76),
        scale: ParamStat::new(31_104.66, 23_545.71, 41_090.27),
        shape: ParamStat::new(0.26, -0.06, 0.58),
    },
    ClassStats {
        label: EventLabel::Resting,
        location: ParamStat::new(1_241_060.75, 778_886.63, 1_703_234.88),
        scale: ParamStat::new(1_273_712.63, 945_447.56, 1_715_953.13),
        shape: ParamStat::new(0.15, -0.26, 0.56),
    },
];

/// Draws `per_class` labeled vectors per class, each parameter uniform on
/// `mean ± spread_factor · half_width`. Scales are kept positive.
pub fn sample_reference_clusters(per_class: usize, spread_factor: f64, seed: u64) -> Vec<FeatureVector> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(per_class * 3);
    for class in &REFERENCE_CLASSES {
        for i in 0..per_class {
            let mut draw = |s: &ParamStat| {
                let h = spread_factor * s.half_width();
                if h > 0.0 {
                    s.mean + rng.random_range(-h..=h)
                } else {
                    s.mean
                }
            };
            let location = draw(&class.location);
            let scale = draw(&class.scale).max(f64::MIN_POSITIVE);
            let shape = draw(&class.shape);
            out.push(FeatureVector {
                epoch_id: format!("{}-{i:05}", class.label.name()),
                label: Some(class.label),
                theta: GevParams { location, scale, shape },
                gof: None,
                log_likelihood: None,
            });
        }
    }
    out
}

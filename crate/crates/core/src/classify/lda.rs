use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};

use super::ClassifyError;
use crate::eeg::EventLabel;
use crate::features::FeatureVector;

/// Relative ridge added to the pooled covariance: `λ·trace/3·I`.
pub const RIDGE: f64 = 1e-8;

/// Per-feature affine map `(x - shift) / scale`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Standardization {
    pub shift: f64,
    pub scale: f64,
}

/// Shared-covariance linear discriminant model over `[μ, σ, ξ]`.
///
/// Means and covariance live in the standardized feature space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LdaModel {
    pub class_labels: Vec<EventLabel>,
    pub class_means: Vec<[f64; 3]>,
    pub pooled_covariance_inverse: [[f64; 3]; 3],
    pub log_priors: Vec<f64>,
    pub standardization: [Standardization; 3],
}

#[derive(Debug, Clone, PartialEq)]
pub struct Prediction {
    pub label: EventLabel,
    /// Discriminant per class, in `class_labels` order.
    pub scores: Vec<(EventLabel, f64)>,
}

pub fn theta_of(f: &FeatureVector) -> [f64; 3] {
    [f.theta.location, f.theta.scale, f.theta.shape]
}

/// Fits from labeled feature vectors; every vector must carry a label.
pub fn lda_fit(features: &[FeatureVector]) -> Result<LdaModel, ClassifyError> {
    let mut xs = Vec::with_capacity(features.len());
    let mut ys = Vec::with_capacity(features.len());
    for f in features {
        let label = f.label.ok_or_else(|| ClassifyError::Unlabeled(f.epoch_id.clone()))?;
        xs.push(theta_of(f));
        ys.push(label);
    }
    LdaModel::fit(&xs, &ys)
}

pub fn lda_predict(model: &LdaModel, theta: [f64; 3]) -> Result<Prediction, ClassifyError> {
    model.predict(theta)
}

impl LdaModel {
    pub fn fit(xs: &[[f64; 3]], labels: &[EventLabel]) -> Result<Self, ClassifyError> {
        assert_eq!(xs.len(), labels.len(), "one label per point");
        if xs.iter().flatten().any(|v| !v.is_finite()) {
            return Err(ClassifyError::NonFinite);
        }
        let mut counts = [0usize; 3];
        for l in labels {
            counts[l.index()] += 1;
        }
        for l in EventLabel::ALL {
            match counts[l.index()] {
                0 => return Err(ClassifyError::MissingClass(l)),
                1 => return Err(ClassifyError::TooFewSamples { label: l, count: 1 }),
                _ => {}
            }
        }
        let n = xs.len() as f64;

        let standardization: [Standardization; 3] = std::array::from_fn(|j| {
            let mean = xs.iter().map(|x| x[j]).sum::<f64>() / n;
            let var = xs.iter().map(|x| (x[j] - mean).powi(2)).sum::<f64>() / n;
            let sd = var.sqrt();
            Standardization {
                shift: mean,
                scale: if sd > 0.0 { sd } else { 1.0 },
            }
        });
        let zs: Vec<Vector3<f64>> = xs.iter().map(|x| standardize(&standardization, *x)).collect();

        let mut means = [Vector3::zeros(); 3];
        for (z, l) in zs.iter().zip(labels) {
            means[l.index()] += z;
        }
        for (m, c) in means.iter_mut().zip(counts) {
            *m /= c as f64;
        }
        let mut cov = Matrix3::zeros();
        for (z, l) in zs.iter().zip(labels) {
            let d = z - means[l.index()];
            cov += d * d.transpose();
        }
        cov /= n;
        cov += Matrix3::identity() * (RIDGE * cov.trace() / 3.0);

        let chol = cov.cholesky().ok_or(ClassifyError::SingularCovariance)?;
        let inv = chol.inverse();
        if inv.iter().any(|v| !v.is_finite()) {
            return Err(ClassifyError::SingularCovariance);
        }

        Ok(Self {
            class_labels: EventLabel::ALL.to_vec(),
            class_means: means.iter().map(|m| [m[0], m[1], m[2]]).collect(),
            pooled_covariance_inverse: std::array::from_fn(|i| std::array::from_fn(|j| inv[(i, j)])),
            log_priors: counts.iter().map(|&c| (c as f64 / n).ln()).collect(),
            standardization,
        })
    }

    pub fn standardize(&self, theta: [f64; 3]) -> [f64; 3] {
        let z = standardize(&self.standardization, theta);
        [z[0], z[1], z[2]]
    }

    fn inverse(&self) -> Matrix3<f64> {
        let p = &self.pooled_covariance_inverse;
        Matrix3::from_fn(|i, j| p[i][j])
    }

    /// Linear discriminants `z·Σ⁻¹m_k − ½ m_k·Σ⁻¹m_k + ln π_k`, highest wins;
    /// ties go to the earlier label in `class_labels`.
    pub fn predict(&self, theta: [f64; 3]) -> Result<Prediction, ClassifyError> {
        if theta.iter().any(|v| !v.is_finite()) {
            return Err(ClassifyError::NonFinite);
        }
        let z = standardize(&self.standardization, theta);
        let inv = self.inverse();
        let mut scores = Vec::with_capacity(self.class_labels.len());
        let mut best: Option<(EventLabel, f64)> = None;
        for ((label, mean), prior) in self.class_labels.iter().zip(&self.class_means).zip(&self.log_priors) {
            let m = Vector3::from(*mean);
            let w = inv * m;
            let score = z.dot(&w) - 0.5 * m.dot(&w) + prior;
            scores.push((*label, score));
            if best.is_none_or(|(_, s)| score > s) {
                best = Some((*label, score));
            }
        }
        Ok(Prediction {
            label: best.expect("at least one class").0,
            scores,
        })
    }
}

fn standardize(s: &[Standardization; 3], x: [f64; 3]) -> Vector3<f64> {
    Vector3::from_fn(|j, _| (x[j] - s[j].shift) / s[j].scale)
}

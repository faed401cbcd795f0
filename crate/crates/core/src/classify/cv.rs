use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::lda::{theta_of, LdaModel};
use super::metrics::{accuracy, confusion_metrics, ClassMetrics, Confusion};
use super::ClassifyError;
use crate::eeg::EventLabel;
use crate::features::FeatureVector;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CvConfig {
    pub folds: usize,
    pub repeats: usize,
    pub seed: u64,
    pub stratified: bool,
}

impl CvConfig {
    pub fn new(seed: u64) -> Self {
        Self {
            folds: 20,
            repeats: 10,
            seed,
            stratified: true,
        }
    }

    /// Checks the fold count against the class sizes in `labels`.
    pub fn validate(&self, labels: &[EventLabel]) -> Result<(), ClassifyError> {
        if self.folds < 2 {
            return Err(ClassifyError::InvalidConfig(format!(
                "folds must be at least 2, got {}",
                self.folds
            )));
        }
        if self.repeats < 1 {
            return Err(ClassifyError::InvalidConfig("repeats must be at least 1".into()));
        }
        let mut counts = [0usize; 3];
        for l in labels {
            counts[l.index()] += 1;
        }
        if let Some(l) = EventLabel::ALL.into_iter().find(|l| counts[l.index()] == 0) {
            return Err(ClassifyError::MissingClass(l));
        }
        if self.stratified {
            if let Some(l) = EventLabel::ALL.into_iter().find(|l| counts[l.index()] < self.folds) {
                return Err(ClassifyError::FoldConstraint {
                    folds: self.folds,
                    label: l,
                    count: counts[l.index()],
                });
            }
        } else if labels.len() < self.folds {
            return Err(ClassifyError::InvalidConfig(format!(
                "{} folds need at least {} samples, got {}",
                self.folds,
                self.folds,
                labels.len()
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RepeatReport {
    pub repeat: usize,
    pub accuracy: f64,
    pub confusion: Confusion,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CvReport {
    pub config: CvConfig,
    pub accuracy: f64,
    /// Summed over repeats; rows true, columns predicted.
    pub confusion: Confusion,
    pub per_class: Vec<ClassMetrics>,
    pub per_repeat: Vec<RepeatReport>,
}

fn repeat_seed(seed: u64, repeat: usize) -> u64 {
    seed ^ (repeat as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

/// Test-set indices of every fold for one repeat.
///
/// Stratified partitions shuffle each class separately and deal its members
/// round-robin, continuing from the fold where the previous class stopped,
/// so fold sizes differ by at most one.
pub fn partition(labels: &[EventLabel], cfg: &CvConfig, repeat: usize) -> Vec<Vec<usize>> {
    let mut rng = ChaCha8Rng::seed_from_u64(repeat_seed(cfg.seed, repeat));
    let mut folds = vec![Vec::new(); cfg.folds];
    let groups: Vec<Vec<usize>> = if cfg.stratified {
        EventLabel::ALL
            .iter()
            .map(|l| (0..labels.len()).filter(|&i| labels[i] == *l).collect())
            .collect()
    } else {
        vec![(0..labels.len()).collect()]
    };
    let mut next = 0;
    for mut g in groups {
        g.shuffle(&mut rng);
        for i in g {
            folds[next % cfg.folds].push(i);
            next += 1;
        }
    }
    for f in &mut folds {
        f.sort_unstable();
    }
    folds
}

/// One trained model per fold of `repeat`, paired with the fold's test indices.
pub fn fold_models(
    xs: &[[f64; 3]],
    labels: &[EventLabel],
    cfg: &CvConfig,
    repeat: usize,
) -> Result<Vec<(Vec<usize>, LdaModel)>, ClassifyError> {
    let folds = partition(labels, cfg, repeat);
    folds
        .into_iter()
        .map(|test| {
            let mut in_test = vec![false; xs.len()];
            for &i in &test {
                in_test[i] = true;
            }
            let (train_x, train_y): (Vec<_>, Vec<_>) = (0..xs.len())
                .filter(|&i| !in_test[i])
                .map(|i| (xs[i], labels[i]))
                .unzip();
            let model = LdaModel::fit(&train_x, &train_y)?;
            Ok((test, model))
        })
        .collect()
}

fn run_repeat(
    xs: &[[f64; 3]],
    labels: &[EventLabel],
    cfg: &CvConfig,
    repeat: usize,
) -> Result<Confusion, ClassifyError> {
    let mut confusion = [[0u64; 3]; 3];
    for (test, model) in fold_models(xs, labels, cfg, repeat)? {
        for i in test {
            let predicted = model.predict(xs[i])?.label;
            confusion[labels[i].index()][predicted.index()] += 1;
        }
    }
    Ok(confusion)
}

/// Repeated k-fold cross-validation of [`LdaModel`] on raw points.
pub fn cross_validate_points(
    xs: &[[f64; 3]],
    labels: &[EventLabel],
    cfg: &CvConfig,
) -> Result<CvReport, ClassifyError> {
    cfg.validate(labels)?;
    let repeats: Vec<Confusion> = (0..cfg.repeats)
        .into_par_iter()
        .map(|r| run_repeat(xs, labels, cfg, r))
        .collect::<Result<_, _>>()?;

    let mut confusion = [[0u64; 3]; 3];
    for c in &repeats {
        for (row, r) in confusion.iter_mut().zip(c) {
            for (a, b) in row.iter_mut().zip(r) {
                *a += b;
            }
        }
    }
    Ok(CvReport {
        config: *cfg,
        accuracy: accuracy(&confusion),
        per_class: confusion_metrics(&confusion)?,
        confusion,
        per_repeat: repeats
            .into_iter()
            .enumerate()
            .map(|(repeat, c)| RepeatReport {
                repeat,
                accuracy: accuracy(&c),
                confusion: c,
            })
            .collect(),
    })
}

/// Cross-validates labeled feature vectors; unlabeled input is an error.
pub fn cross_validate(features: &[FeatureVector], cfg: &CvConfig) -> Result<CvReport, ClassifyError> {
    let mut xs = Vec::with_capacity(features.len());
    let mut labels = Vec::with_capacity(features.len());
    for f in features {
        labels.push(f.label.ok_or_else(|| ClassifyError::Unlabeled(f.epoch_id.clone()))?);
        xs.push(theta_of(f));
    }
    cross_validate_points(&xs, &labels, cfg)
}

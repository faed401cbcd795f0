//! Linear discriminant classification of GEV feature vectors.

mod cv;
mod lda;
mod metrics;
pub mod reference;

pub use cv::{cross_validate, cross_validate_points, fold_models, partition, CvConfig, CvReport, RepeatReport};
pub use lda::{lda_fit, lda_predict, theta_of, LdaModel, Prediction, Standardization, RIDGE};
pub use metrics::{accuracy, confusion_metrics, ClassMetrics, Confusion};

use crate::eeg::EventLabel;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ClassifyError {
    #[error("training data has no {0} samples")]
    MissingClass(EventLabel),
    #[error("class {label} has {count} sample(s), at least 2 are required")]
    TooFewSamples { label: EventLabel, count: usize },
    #[error("pooled covariance is singular")]
    SingularCovariance,
    #[error("non-finite feature value")]
    NonFinite,
    #[error("feature vector '{0}' has no label")]
    Unlabeled(String),
    #[error(
        "{folds}-fold stratified cross-validation needs at least {folds} samples per class, class {label} has {count}"
    )]
    FoldConstraint {
        folds: usize,
        label: EventLabel,
        count: usize,
    },
    #[error("invalid cross-validation config: {0}")]
    InvalidConfig(String),
    #[error("confusion matrix is empty")]
    EmptyConfusion,
}

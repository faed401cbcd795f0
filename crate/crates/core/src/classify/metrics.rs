use serde::{Deserialize, Serialize};

use super::ClassifyError;
use crate::eeg::EventLabel;

/// Rows are true classes, columns predicted classes, both in
/// [`EventLabel::ALL`] order.
pub type Confusion = [[u64; 3]; 3];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassMetrics {
    pub label: EventLabel,
    /// `TP / (TP + FN)`; `None` when the class never occurs.
    pub sensitivity: Option<f64>,
    /// `TN / (TN + FP)`; `None` when every sample belongs to the class.
    pub specificity: Option<f64>,
    pub support: u64,
}

fn ratio(num: u64, den: u64) -> Option<f64> {
    (den > 0).then(|| num as f64 / den as f64)
}

pub fn confusion_metrics(confusion: &Confusion) -> Result<Vec<ClassMetrics>, ClassifyError> {
    let total: u64 = confusion.iter().flatten().sum();
    if total == 0 {
        return Err(ClassifyError::EmptyConfusion);
    }
    Ok(EventLabel::ALL
        .iter()
        .map(|&label| {
            let k = label.index();
            let tp = confusion[k][k];
            let fn_ = confusion[k].iter().sum::<u64>() - tp;
            let fp = (0..3).map(|r| confusion[r][k]).sum::<u64>() - tp;
            let tn = total - tp - fn_ - fp;
            ClassMetrics {
                label,
                sensitivity: ratio(tp, tp + fn_),
                specificity: ratio(tn, tn + fp),
                support: tp + fn_,
            }
        })
        .collect())
}

pub fn accuracy(confusion: &Confusion) -> f64 {
    let total: u64 = confusion.iter().flatten().sum();
    let correct: u64 = (0..3).map(|k| confusion[k][k]).sum();
    if total == 0 {
        0.0
    } else {
        correct as f64 / total as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn diagonal_is_perfect() {
        let m = confusion_metrics(&[[5, 0, 0], [0, 7, 0], [0, 0, 9]]).unwrap();
        for c in &m {
            assert_eq!(c.sensitivity, Some(1.0));
            assert_eq!(c.specificity, Some(1.0));
        }
        assert_eq!(m[1].support, 7);
    }

    #[test]
    fn never_predicted_class_has_zero_sensitivity() {
        let m = confusion_metrics(&[[5, 0, 0], [3, 0, 4], [0, 0, 9]]).unwrap();
        assert_eq!(m[1].sensitivity, Some(0.0));
        assert_eq!(m[1].specificity, Some(1.0));
    }

    #[test]
    fn undefined_ratios_are_absent() {
        let m = confusion_metrics(&[[5, 1, 0], [0, 0, 0], [0, 2, 3]]).unwrap();
        assert_eq!(m[1].sensitivity, None);
        assert!(m[1].specificity.is_some());
        assert_eq!(confusion_metrics(&[[0; 3]; 3]), Err(ClassifyError::EmptyConfusion));
    }

    #[test]
    fn hand_expanded_formulas() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let c: Confusion = std::array::from_fn(|_| std::array::from_fn(|_| rng.random_range(1..50)));
        let m = confusion_metrics(&c).unwrap();
        let total: u64 = c.iter().flatten().sum();
        // class 0 (imagery)
        let tp = c[0][0];
        let fn_ = c[0][1] + c[0][2];
        let fp = c[1][0] + c[2][0];
        let tn = total - tp - fn_ - fp;
        assert_eq!(m[0].sensitivity, Some(tp as f64 / (tp + fn_) as f64));
        assert_eq!(m[0].specificity, Some(tn as f64 / (tn + fp) as f64));
        // class 2 (resting)
        let tp = c[2][2];
        let fn_ = c[2][0] + c[2][1];
        let fp = c[0][2] + c[1][2];
        let tn = c[0][0] + c[0][1] + c[1][0] + c[1][1];
        assert_eq!(m[2].sensitivity, Some(tp as f64 / (tp + fn_) as f64));
        assert_eq!(m[2].specificity, Some(tn as f64 / (tn + fp) as f64));
    }
}

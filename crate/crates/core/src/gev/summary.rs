use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, StudentsT};

use super::{GevError, GevParams};

/// Mean with a two-sided 95% Student-t interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub mean: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

impl Interval {
    /// `mean [low, high]` with `decimals` digits after the point.
    pub fn render(&self, decimals: usize) -> String {
        format!(
            "{:.d$} [{:.d$}, {:.d$}]",
            self.mean,
            self.ci_low,
            self.ci_high,
            d = decimals
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParamSummary {
    pub location: Interval,
    pub scale: Interval,
    pub shape: Interval,
    pub count: usize,
}

fn interval(values: &[f64], t_crit: f64) -> Interval {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    let half = t_crit * (var / n).sqrt();
    Interval {
        mean,
        ci_low: mean - half,
        ci_high: mean + half,
    }
}

pub fn summarize_params(fits: &[GevParams]) -> Result<ParamSummary, GevError> {
    if fits.len() < 2 {
        return Err(GevError::TooFewFits(fits.len()));
    }
    let df = (fits.len() - 1) as f64;
    let t_crit = StudentsT::new(0.0, 1.0, df).expect("df >= 1").inverse_cdf(0.975);
    let col = |f: fn(&GevParams) -> f64| fits.iter().map(f).collect::<Vec<_>>();
    Ok(ParamSummary {
        location: interval(&col(|p| p.location), t_crit),
        scale: interval(&col(|p| p.scale), t_crit),
        shape: interval(&col(|p| p.shape), t_crit),
        count: fits.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_style_rendering() {
        // two fits give t(0.975, 1 df) = 12.7062...
        let t = 12.706_204_736_174_7;
        let (mean, half) = (0.0875, 0.2955);
        let d = half / t;
        let fits = [
            GevParams::new(10.0, 1.0, mean - d).unwrap(),
            GevParams::new(12.0, 2.0, mean + d).unwrap(),
        ];
        let s = summarize_params(&fits).unwrap();
        assert_eq!(s.shape.render(2), "0.09 [-0.21, 0.38]");
        assert_eq!(s.count, 2);
    }

    #[test]
    fn identical_fits_collapse() {
        let p = GevParams::new(3.0, 2.0, 0.1).unwrap();
        let s = summarize_params(&[p; 5]).unwrap();
        for i in [s.location, s.scale, s.shape] {
            assert_eq!(i.ci_low, i.mean);
            assert_eq!(i.ci_high, i.mean);
        }
        assert_eq!(s.scale.mean, 2.0);
    }

    #[test]
    fn mean_matches_naive_sum() {
        let fits: Vec<GevParams> = (0..17)
            .map(|i| GevParams::new(i as f64 * 1.5, 1.0 + 0.1 * i as f64, 0.01 * i as f64 - 0.05).unwrap())
            .collect();
        let s = summarize_params(&fits).unwrap();
        let mut acc = 0.0;
        for f in &fits {
            acc += f.location;
        }
        assert!((s.location.mean - acc / 17.0).abs() < 1e-12);
        assert!(s.location.ci_low <= s.location.mean && s.location.mean <= s.location.ci_high);
    }

    #[test]
    fn needs_two_fits() {
        let p = GevParams::new(0.0, 1.0, 0.0).unwrap();
        assert_eq!(summarize_params(&[p]), Err(GevError::TooFewFits(1)));
    }
}

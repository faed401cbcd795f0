//! Generalized extreme value distribution.
//!
//! With `z = (x - μ) / σ` the distribution is written through
//!
//! ```text
//! t(x) = (1 + ξ z)^(-1/ξ)   ξ ≠ 0
//! t(x) = exp(-z)            ξ = 0
//!
//! f(x) = t(x)^(ξ + 1) exp(-t(x)) / σ
//! F(x) = exp(-t(x))
//! ```
//!
//! on the support `1 + ξ z > 0`: bounded below at `μ - σ/ξ` when `ξ > 0`
//! (Fréchet type), bounded above at the same point when `ξ < 0` (Weibull
//! type), and the whole real line for the Gumbel case.

mod fit;
mod gumbel;
mod ks;
mod registry;
mod simplex;
mod summary;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

pub use fit::{fit_gev_mle, fit_gev_mle_with_shape};
pub use gumbel::fit_gumbel_fixed_point;
pub use ks::{kolmogorov_survival, ks_test, GofReport};
pub use registry::{EstimatorRegistry, FullMle, GevEstimator, GumbelFixedPoint};
pub use summary::{summarize_params, Interval, ParamSummary};

/// Below this `|ξ|` the Gumbel branch of `t(x)` is used.
pub const GUMBEL_THRESHOLD: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GevError {
    #[error("invalid GEV parameters: {0}")]
    InvalidParams(String),
    #[error("empty data")]
    EmptyData,
    #[error("data contains non-finite values")]
    NonFinite,
    #[error("need at least {required} distinct values, got {found}")]
    TooFewPoints { required: usize, found: usize },
    #[error("data have zero variance")]
    ZeroVariance,
    #[error("quantile level {0} outside (0, 1)")]
    InvalidProbability(f64),
    #[error("{method} did not converge after {iterations} iterations")]
    NonConvergence { method: FitMethod, iterations: usize },
    #[error("need at least 2 fits to summarize, got {0}")]
    TooFewFits(usize),
    #[error("unknown estimator '{0}'")]
    UnknownEstimator(String),
}

/// Location μ, scale σ > 0, shape ξ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GevParams {
    pub location: f64,
    pub scale: f64,
    pub shape: f64,
}

impl GevParams {
    pub fn new(location: f64, scale: f64, shape: f64) -> Result<Self, GevError> {
        if !(location.is_finite() && scale.is_finite() && shape.is_finite()) {
            return Err(GevError::InvalidParams("parameters must be finite".into()));
        }
        if scale <= 0.0 {
            return Err(GevError::InvalidParams(format!("scale must be positive, got {scale}")));
        }
        Ok(Self { location, scale, shape })
    }

    pub fn gumbel(location: f64, scale: f64) -> Result<Self, GevError> {
        Self::new(location, scale, 0.0)
    }

    fn is_gumbel(&self) -> bool {
        self.shape.abs() < GUMBEL_THRESHOLD
    }

    /// `(lower, upper)` support bounds; infinite where unbounded.
    pub fn support(&self) -> (f64, f64) {
        if self.is_gumbel() {
            (f64::NEG_INFINITY, f64::INFINITY)
        } else {
            let edge = self.location - self.scale / self.shape;
            if self.shape > 0.0 {
                (edge, f64::INFINITY)
            } else {
                (f64::NEG_INFINITY, edge)
            }
        }
    }

    /// `ln t(x)`, or `None` outside the open support.
    fn log_t(&self, x: f64) -> Option<f64> {
        let z = (x - self.location) / self.scale;
        if self.is_gumbel() {
            return Some(-z);
        }
        let arg = self.shape * z;
        if arg <= -1.0 {
            return None;
        }
        Some(-arg.ln_1p() / self.shape)
    }

    pub fn log_pdf(&self, x: f64) -> f64 {
        match self.log_t(x) {
            Some(lt) => -self.scale.ln() + (self.shape + 1.0) * lt - lt.exp(),
            None => f64::NEG_INFINITY,
        }
    }
}

pub fn gev_pdf(x: f64, p: &GevParams) -> f64 {
    p.log_pdf(x).exp()
}

pub fn gev_cdf(x: f64, p: &GevParams) -> f64 {
    match p.log_t(x) {
        Some(lt) => (-lt.exp()).exp(),
        None if p.shape > 0.0 => 0.0,
        None => 1.0,
    }
}

/// Inverse CDF: `μ + σ((-ln q)^(-ξ) - 1)/ξ`, or `μ - σ ln(-ln q)` for Gumbel.
pub fn gev_quantile(q: f64, p: &GevParams) -> Result<f64, GevError> {
    if !(q > 0.0 && q < 1.0) {
        return Err(GevError::InvalidProbability(q));
    }
    let y = -q.ln();
    Ok(if p.is_gumbel() {
        p.location - p.scale * y.ln()
    } else {
        p.location + p.scale * (-p.shape * y.ln()).exp_m1() / p.shape
    })
}

/// `n` inverse-CDF draws from a ChaCha8 stream seeded with `seed`.
pub fn gev_sample(p: &GevParams, n: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| loop {
            let u: f64 = rng.random();
            if u > 0.0 {
                break gev_quantile(u, p).expect("u in (0, 1)");
            }
        })
        .collect()
}

/// `Σ ln f(x_i)`; `-inf` when any point falls outside the support.
pub fn gev_log_likelihood(data: &[f64], p: &GevParams) -> Result<f64, GevError> {
    if data.is_empty() {
        return Err(GevError::EmptyData);
    }
    Ok(data.iter().map(|&x| p.log_pdf(x)).sum())
}

/// How a [`FitResult`] was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FitMethod {
    FullMle,
    GumbelFixedPoint,
}

impl FitMethod {
    pub fn name(self) -> &'static str {
        match self {
            FitMethod::FullMle => "full_mle",
            FitMethod::GumbelFixedPoint => "gumbel_fixed_point",
        }
    }
}

impl std::fmt::Display for FitMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub params: GevParams,
    pub log_likelihood: f64,
    pub converged: bool,
    pub iterations: usize,
    pub method: FitMethod,
}

/// Shared input checks for the estimators: finite, at least 20 distinct
/// values, nonzero variance. Returns `(mean, sd)`.
pub(crate) fn check_fit_data(data: &[f64]) -> Result<(f64, f64), GevError> {
    const MIN_DISTINCT: usize = 20;
    if data.is_empty() {
        return Err(GevError::EmptyData);
    }
    if data.iter().any(|v| !v.is_finite()) {
        return Err(GevError::NonFinite);
    }
    let mut sorted = data.to_vec();
    sorted.sort_by(f64::total_cmp);
    sorted.dedup();
    if sorted.len() == 1 {
        return Err(GevError::ZeroVariance);
    }
    if sorted.len() < MIN_DISTINCT {
        return Err(GevError::TooFewPoints {
            required: MIN_DISTINCT,
            found: sorted.len(),
        });
    }
    let n = data.len() as f64;
    let mean = data.iter().sum::<f64>() / n;
    let var = data.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    if !(var > 0.0) {
        return Err(GevError::ZeroVariance);
    }
    Ok((mean, var.sqrt()))
}

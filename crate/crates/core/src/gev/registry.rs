//! Named GEV estimators, selectable at runtime.

use std::collections::BTreeMap;

use super::{fit_gev_mle, fit_gumbel_fixed_point, FitResult, GevError};

pub trait GevEstimator: Send + Sync {
    /// Registry key; also the `method` tag written to reports.
    fn name(&self) -> &'static str;

    fn fit(&self, data: &[f64]) -> Result<FitResult, GevError>;
}

/// Location, scale and shape by simplex maximum likelihood.
#[derive(Debug, Default, Clone, Copy)]
pub struct FullMle;

impl GevEstimator for FullMle {
    fn name(&self) -> &'static str {
        "full_mle"
    }

    fn fit(&self, data: &[f64]) -> Result<FitResult, GevError> {
        fit_gev_mle(data)
    }
}

/// Gumbel location and scale by fixed-point iteration; shape is 0.
#[derive(Debug, Default, Clone, Copy)]
pub struct GumbelFixedPoint;

impl GevEstimator for GumbelFixedPoint {
    fn name(&self) -> &'static str {
        "gumbel_fixed_point"
    }

    fn fit(&self, data: &[f64]) -> Result<FitResult, GevError> {
        fit_gumbel_fixed_point(data)
    }
}

pub struct EstimatorRegistry {
    estimators: BTreeMap<&'static str, Box<dyn GevEstimator>>,
}

impl EstimatorRegistry {
    pub fn empty() -> Self {
        Self {
            estimators: BTreeMap::new(),
        }
    }

    pub fn with_builtins() -> Self {
        let mut r = Self::empty();
        r.register(Box::new(FullMle));
        r.register(Box::new(GumbelFixedPoint));
        r
    }

    /// Adds an estimator, replacing any previous one of the same name.
    pub fn register(&mut self, estimator: Box<dyn GevEstimator>) {
        self.estimators.insert(estimator.name(), estimator);
    }

    pub fn get(&self, name: &str) -> Result<&dyn GevEstimator, GevError> {
        self.estimators
            .get(name)
            .map(|b| b.as_ref())
            .ok_or_else(|| GevError::UnknownEstimator(name.to_string()))
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.estimators.keys().copied().collect()
    }
}

impl Default for EstimatorRegistry {
    fn default() -> Self {
        Self::with_builtins()
    }
}

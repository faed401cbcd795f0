//! Epoch to `θ = [μ, σ, ξ]` feature extraction.
//!
//! Per epoch: select the configured channels, band-limit them, take the
//! Hamming periodogram of every non-overlapping segment of every channel,
//! keep the mu-band bins, pool all of them into one sample and fit a GEV
//! to it.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dsp::{self, DspError, FilterSpec};
use crate::eeg::{select_channels, EegError, Epoch, EventLabel};
use crate::gev::{ks_test, EstimatorRegistry, GevError, GevEstimator, GevParams, GofReport};
use crate::CENTRAL_CHANNELS;

#[derive(Debug, thiserror::Error)]
pub enum FeatureError {
    #[error("invalid pipeline configuration: {0}")]
    Config(String),
    #[error("epoch '{epoch_id}': {source}")]
    Channels {
        epoch_id: String,
        #[source]
        source: EegError,
    },
    #[error("epoch '{epoch_id}': {source}")]
    Spectrum {
        epoch_id: String,
        #[source]
        source: DspError,
    },
    #[error("epoch '{epoch_id}': GEV fit failed: {source}")]
    Fit {
        epoch_id: String,
        #[source]
        source: GevError,
    },
    #[error(transparent)]
    Estimator(GevError),
    #[error("no epochs to process")]
    NoEpochs,
    #[error("all {} epochs failed", .0.len())]
    AllFailed(Vec<EpochFailure>),
}

impl FeatureError {
    pub fn epoch_id(&self) -> Option<&str> {
        match self {
            FeatureError::Channels { epoch_id, .. }
            | FeatureError::Spectrum { epoch_id, .. }
            | FeatureError::Fit { epoch_id, .. } => Some(epoch_id),
            _ => None,
        }
    }
}

/// Butterworth order and cutoffs; the sample rate comes from each epoch.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FilterBand {
    pub order: usize,
    pub low_cut_hz: f64,
    pub high_cut_hz: f64,
}

impl FilterBand {
    pub fn at_rate(&self, sample_rate: f64) -> Result<FilterSpec, DspError> {
        FilterSpec::new(self.order, self.low_cut_hz, self.high_cut_hz, sample_rate)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SegmentPolicy {
    /// Half a second of samples.
    Auto,
    Samples(usize),
}

impl SegmentPolicy {
    pub fn resolve(self, sample_rate: f64) -> usize {
        match self {
            SegmentPolicy::Auto => dsp::auto_segment_len(sample_rate),
            SegmentPolicy::Samples(n) => n,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Pooling {
    /// Band bins of every channel and segment form one sample.
    PoolBins,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineConfig {
    pub band_low_hz: f64,
    pub band_high_hz: f64,
    pub filter: FilterBand,
    pub segment: SegmentPolicy,
    pub channels: Vec<String>,
    pub pooling: Pooling,
    /// Name in [`EstimatorRegistry`].
    pub estimator: String,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            band_low_hz: 7.5,
            band_high_hz: 11.5,
            filter: FilterBand {
                order: 4,
                low_cut_hz: 8.0,
                high_cut_hz: 30.0,
            },
            segment: SegmentPolicy::Auto,
            channels: CENTRAL_CHANNELS.iter().map(|s| s.to_string()).collect(),
            pooling: Pooling::PoolBins,
            estimator: "full_mle".into(),
        }
    }
}

impl PipelineConfig {
    pub fn validate(&self) -> Result<(), FeatureError> {
        if self.channels.is_empty() {
            return Err(FeatureError::Config("channel set is empty".into()));
        }
        if !(self.band_low_hz >= 0.0 && self.band_low_hz < self.band_high_hz) {
            return Err(FeatureError::Config(format!(
                "band {}..{} Hz is not an increasing range",
                self.band_low_hz, self.band_high_hz
            )));
        }
        let f = &self.filter;
        if f.order < 1 || !(f.low_cut_hz > 0.0 && f.low_cut_hz < f.high_cut_hz) {
            return Err(FeatureError::Config(format!(
                "filter {}:{}:{} is not a valid band-pass",
                f.low_cut_hz, f.high_cut_hz, f.order
            )));
        }
        if self.band_high_hz < f.low_cut_hz || self.band_low_hz > f.high_cut_hz {
            return Err(FeatureError::Config(format!(
                "band {}..{} Hz lies outside the filter passband {}..{} Hz",
                self.band_low_hz, self.band_high_hz, f.low_cut_hz, f.high_cut_hz
            )));
        }
        if let SegmentPolicy::Samples(n) = self.segment {
            if n < 8 {
                return Err(FeatureError::Config(format!("segment length {n} is below 8 samples")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureVector {
    pub epoch_id: String,
    pub label: Option<EventLabel>,
    pub theta: GevParams,
    /// Absent only for vectors read back from interchange files.
    pub gof: Option<GofReport>,
    pub log_likelihood: Option<f64>,
}

/// Mu-band power values pooled over channels and segments, sorted ascending.
pub fn pooled_band_power(epoch: &Epoch, cfg: &PipelineConfig) -> Result<Vec<f64>, FeatureError> {
    cfg.validate()?;
    let id = || epoch.epoch_id.clone();
    let record = select_channels(&epoch.record, &cfg.channels)
        .map_err(|source| FeatureError::Channels { epoch_id: id(), source })?;
    let fs = record.sample_rate();
    let spectral = |source| FeatureError::Spectrum { epoch_id: id(), source };
    let cascade = dsp::design_butterworth_bandpass(&cfg.filter.at_rate(fs).map_err(spectral)?).map_err(spectral)?;
    let filtered = dsp::apply_filter(&cascade, &record);
    let segment_len = cfg.segment.resolve(fs);

    let mut pooled = Vec::new();
    for ch in filtered.columns() {
        for seg in dsp::periodogram_segments(&ch, fs, segment_len).map_err(spectral)? {
            let band = dsp::band_extract(&seg, cfg.band_low_hz, cfg.band_high_hz).map_err(spectral)?;
            pooled.extend(band.power);
        }
    }
    pooled.sort_by(f64::total_cmp);
    Ok(pooled)
}

pub fn extract_features_with(
    epoch: &Epoch,
    cfg: &PipelineConfig,
    estimator: &dyn GevEstimator,
) -> Result<FeatureVector, FeatureError> {
    let pooled = pooled_band_power(epoch, cfg)?;
    let fit_err = |source| FeatureError::Fit {
        epoch_id: epoch.epoch_id.clone(),
        source,
    };
    let fit = estimator.fit(&pooled).map_err(fit_err)?;
    let gof = ks_test(&pooled, &fit.params).map_err(fit_err)?;
    Ok(FeatureVector {
        epoch_id: epoch.epoch_id.clone(),
        label: epoch.label,
        theta: fit.params,
        gof: Some(gof),
        log_likelihood: Some(fit.log_likelihood),
    })
}

/// [`extract_features_with`] using the estimator named in `cfg`.
pub fn extract_features(epoch: &Epoch, cfg: &PipelineConfig) -> Result<FeatureVector, FeatureError> {
    let registry = EstimatorRegistry::with_builtins();
    let estimator = registry.get(&cfg.estimator).map_err(FeatureError::Estimator)?;
    extract_features_with(epoch, cfg, estimator)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Sequential,
    #[default]
    Parallel,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FailureKind {
    /// The epoch itself is unusable (channels, length, sample rate).
    Data,
    /// The fit or goodness-of-fit computation broke down.
    Numeric,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpochFailure {
    pub epoch_id: String,
    pub kind: FailureKind,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetFeatures {
    /// Successful vectors in input order.
    pub features: Vec<FeatureVector>,
    pub failures: Vec<EpochFailure>,
}

/// Extracts every epoch; individual failures are collected rather than fatal.
pub fn extract_dataset(
    epochs: &[Epoch],
    cfg: &PipelineConfig,
    execution: Execution,
) -> Result<DatasetFeatures, FeatureError> {
    if epochs.is_empty() {
        return Err(FeatureError::NoEpochs);
    }
    cfg.validate()?;
    let registry = EstimatorRegistry::with_builtins();
    let estimator = registry.get(&cfg.estimator).map_err(FeatureError::Estimator)?;
    let run = |e: &Epoch| extract_features_with(e, cfg, estimator);
    let results: Vec<_> = match execution {
        Execution::Sequential => epochs.iter().map(run).collect(),
        Execution::Parallel => epochs.par_iter().map(run).collect(),
    };

    let mut features = Vec::new();
    let mut failures = Vec::new();
    for (epoch, r) in epochs.iter().zip(results) {
        match r {
            Ok(v) => features.push(v),
            Err(e) => failures.push(EpochFailure {
                epoch_id: epoch.epoch_id.clone(),
                kind: match e {
                    FeatureError::Fit { .. } => FailureKind::Numeric,
                    _ => FailureKind::Data,
                },
                message: e.to_string(),
            }),
        }
    }
    if features.is_empty() {
        return Err(FeatureError::AllFailed(failures));
    }
    Ok(DatasetFeatures { features, failures })
}

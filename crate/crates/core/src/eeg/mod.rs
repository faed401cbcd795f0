//! Multichannel EEG records, event labels and epochs.

mod binary;
mod csv;
mod surrogate;

use std::collections::HashSet;
use std::fmt;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};

pub use binary::{encode as encode_binary, load_binary, save_binary, BINARY_MAGIC};
pub use csv::{load_csv, save_csv};
pub use surrogate::{synthesize_surrogate, synthesize_surrogate_with, SurrogateConfig};

#[derive(Debug, thiserror::Error)]
pub enum EegError {
    #[error("invalid record: {0}")]
    InvalidRecord(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: line {line}, column '{column}': cannot parse '{value}' as a number")]
    NonNumeric {
        path: PathBuf,
        line: usize,
        column: String,
        value: String,
    },
    #[error("{path}: line {line} has {found} fields, header has {expected}")]
    RowWidth {
        path: PathBuf,
        line: usize,
        expected: usize,
        found: usize,
    },
    #[error("{path}: no sample rate (expected a '# fs=<Hz>' line or an explicit override)")]
    MissingSampleRate { path: PathBuf },
    #[error("{path}: malformed file: {reason}")]
    Malformed { path: PathBuf, reason: String },
    #[error("{path}: bad magic, expected \"EEGB\"")]
    BadMagic { path: PathBuf },
    #[error("{path}: truncated payload, expected {expected} bytes, found {actual}")]
    Truncated {
        path: PathBuf,
        expected: usize,
        actual: usize,
    },
    #[error("unknown channel '{0}'")]
    UnknownChannel(String),
    #[error("duration must be positive, got {0}")]
    NonPositiveDuration(f64),
    #[error("sample rate must be at least 64 Hz for surrogate synthesis, got {0}")]
    SampleRateTooLow(f64),
}

/// Sampled EEG, `n_samples` rows by `n_channels` columns, amplitudes in µV.
///
/// Samples are stored row-major: sample `n` of channel `m` lives at
/// `n * n_channels + m`.
#[derive(Debug, Clone, PartialEq)]
pub struct MultichannelRecord {
    samples: Vec<f64>,
    n_samples: usize,
    channel_names: Vec<String>,
    sample_rate: f64,
}

impl MultichannelRecord {
    pub fn new(samples: Vec<f64>, channel_names: Vec<String>, sample_rate: f64) -> Result<Self, EegError> {
        let m = channel_names.len();
        if m == 0 {
            return Err(EegError::InvalidRecord("record needs at least one channel".into()));
        }
        if !(sample_rate.is_finite() && sample_rate > 0.0) {
            return Err(EegError::InvalidRecord(format!(
                "sample rate must be positive, got {sample_rate}"
            )));
        }
        if !samples.len().is_multiple_of(m) {
            return Err(EegError::InvalidRecord(format!(
                "{} values do not fill {m} channels",
                samples.len()
            )));
        }
        let n = samples.len() / m;
        if n < 2 {
            return Err(EegError::InvalidRecord(format!(
                "record needs at least 2 samples, got {n}"
            )));
        }
        if let Some(i) = samples.iter().position(|v| !v.is_finite()) {
            return Err(EegError::InvalidRecord(format!(
                "non-finite sample at row {}, channel '{}'",
                i / m,
                channel_names[i % m]
            )));
        }
        let mut seen = HashSet::new();
        for name in &channel_names {
            if !seen.insert(name.as_str()) {
                return Err(EegError::InvalidRecord(format!("duplicate channel '{name}'")));
            }
        }
        Ok(Self {
            samples,
            n_samples: n,
            channel_names,
            sample_rate,
        })
    }

    /// Builds a record from one sample vector per channel.
    pub fn from_columns(columns: &[Vec<f64>], channel_names: Vec<String>, sample_rate: f64) -> Result<Self, EegError> {
        if columns.len() != channel_names.len() {
            return Err(EegError::InvalidRecord(format!(
                "{} columns but {} channel names",
                columns.len(),
                channel_names.len()
            )));
        }
        let n = columns.first().map_or(0, Vec::len);
        if columns.iter().any(|c| c.len() != n) {
            return Err(EegError::InvalidRecord("columns differ in length".into()));
        }
        let m = columns.len();
        let mut samples = vec![0.0; n * m];
        for (j, col) in columns.iter().enumerate() {
            for (i, &v) in col.iter().enumerate() {
                samples[i * m + j] = v;
            }
        }
        Self::new(samples, channel_names, sample_rate)
    }

    pub fn n_samples(&self) -> usize {
        self.n_samples
    }

    pub fn n_channels(&self) -> usize {
        self.channel_names.len()
    }

    pub fn sample_rate(&self) -> f64 {
        self.sample_rate
    }

    pub fn channel_names(&self) -> &[String] {
        &self.channel_names
    }

    /// Row-major sample matrix.
    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn get(&self, row: usize, channel: usize) -> f64 {
        self.samples[row * self.n_channels() + channel]
    }

    pub fn channel(&self, index: usize) -> Vec<f64> {
        self.samples
            .iter()
            .skip(index)
            .step_by(self.n_channels())
            .copied()
            .collect()
    }

    pub fn channel_index(&self, name: &str) -> Option<usize> {
        self.channel_names.iter().position(|c| c == name)
    }

    pub fn columns(&self) -> Vec<Vec<f64>> {
        (0..self.n_channels()).map(|m| self.channel(m)).collect()
    }

    /// Multiplies every sample by `k`.
    pub fn scaled(&self, k: f64) -> Result<Self, EegError> {
        Self::new(
            self.samples.iter().map(|v| v * k).collect(),
            self.channel_names.clone(),
            self.sample_rate,
        )
    }
}

/// Restricts and reorders the columns of `record` to `names`.
pub fn select_channels<S: AsRef<str>>(
    record: &MultichannelRecord,
    names: &[S],
) -> Result<MultichannelRecord, EegError> {
    let indices = names
        .iter()
        .map(|n| {
            record
                .channel_index(n.as_ref())
                .ok_or_else(|| EegError::UnknownChannel(n.as_ref().to_string()))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let columns: Vec<Vec<f64>> = indices.iter().map(|&i| record.channel(i)).collect();
    MultichannelRecord::from_columns(
        &columns,
        names.iter().map(|n| n.as_ref().to_string()).collect(),
        record.sample_rate(),
    )
}

/// Event class of an epoch. The integer codes are part of every file format.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EventLabel {
    Imagery,
    Movement,
    Resting,
}

impl EventLabel {
    /// Fixed label order, also used for tie-breaking.
    pub const ALL: [EventLabel; 3] = [EventLabel::Imagery, EventLabel::Movement, EventLabel::Resting];

    pub fn code(self) -> i8 {
        match self {
            EventLabel::Imagery => 1,
            EventLabel::Movement => 0,
            EventLabel::Resting => -1,
        }
    }

    pub fn from_code(code: i64) -> Option<Self> {
        match code {
            1 => Some(EventLabel::Imagery),
            0 => Some(EventLabel::Movement),
            -1 => Some(EventLabel::Resting),
            _ => None,
        }
    }

    /// Position in [`EventLabel::ALL`].
    pub fn index(self) -> usize {
        match self {
            EventLabel::Imagery => 0,
            EventLabel::Movement => 1,
            EventLabel::Resting => 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            EventLabel::Imagery => "imagery",
            EventLabel::Movement => "movement",
            EventLabel::Resting => "resting",
        }
    }
}

impl fmt::Display for EventLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for EventLabel {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if let Ok(code) = s.parse::<i64>() {
            return Self::from_code(code).ok_or_else(|| format!("unknown label code {code}"));
        }
        match s.to_ascii_lowercase().as_str() {
            "imagery" | "ima" => Ok(EventLabel::Imagery),
            "movement" | "mov" => Ok(EventLabel::Movement),
            "resting" | "res" | "rest" => Ok(EventLabel::Resting),
            _ => Err(format!("unknown label '{s}'")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Epoch {
    pub record: MultichannelRecord,
    pub label: Option<EventLabel>,
    pub subject_id: String,
    pub epoch_id: String,
}

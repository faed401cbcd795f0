use std::fmt;
use std::path::Path;

use mugev::classify::ClassifyError;
use mugev::eeg::EegError;
use mugev::features::{EpochFailure, FailureKind, FeatureError};
use mugev::gev::GevError;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ErrorKind {
    Config,
    Data,
    Numeric,
}

impl ErrorKind {
    pub fn exit_code(self) -> i32 {
        match self {
            ErrorKind::Config => 2,
            ErrorKind::Data => 3,
            ErrorKind::Numeric => 4,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorEntry {
    pub kind: ErrorKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epoch_id: Option<String>,
    pub message: String,
}

impl ErrorEntry {
    pub fn new(kind: ErrorKind, message: impl Into<String>) -> Self {
        Self {
            kind,
            epoch_id: None,
            message: message.into(),
        }
    }
}

impl From<&EpochFailure> for ErrorEntry {
    fn from(f: &EpochFailure) -> Self {
        Self {
            kind: match f.kind {
                FailureKind::Data => ErrorKind::Data,
                FailureKind::Numeric => ErrorKind::Numeric,
            },
            epoch_id: Some(f.epoch_id.clone()),
            message: f.message.clone(),
        }
    }
}

/// Exit code of a set of errors: configuration problems win over data
/// problems, which win over numeric ones.
pub fn exit_code(entries: &[ErrorEntry]) -> i32 {
    entries.iter().map(|e| e.kind).min().map_or(0, ErrorKind::exit_code)
}

/// A failed command: one or more errors, all fatal to the run.
#[derive(Debug, Clone, PartialEq)]
pub struct CliError(pub Vec<ErrorEntry>);

impl CliError {
    pub fn config(msg: impl Into<String>) -> Self {
        Self(vec![ErrorEntry::new(ErrorKind::Config, msg)])
    }

    pub fn data(msg: impl Into<String>) -> Self {
        Self(vec![ErrorEntry::new(ErrorKind::Data, msg)])
    }

    pub fn numeric(msg: impl Into<String>) -> Self {
        Self(vec![ErrorEntry::new(ErrorKind::Numeric, msg)])
    }

    pub fn output(path: &Path, err: std::io::Error) -> Self {
        Self::config(format!("cannot write {}: {err}", path.display()))
    }

    pub fn exit_code(&self) -> i32 {
        exit_code(&self.0).max(1)
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            match &e.epoch_id {
                Some(id) if !e.message.contains(id.as_str()) => write!(f, "{id}: {}", e.message)?,
                _ => write!(f, "{}", e.message)?,
            }
        }
        Ok(())
    }
}

impl std::error::Error for CliError {}

impl From<EegError> for CliError {
    fn from(e: EegError) -> Self {
        Self::data(e.to_string())
    }
}

impl From<GevError> for CliError {
    fn from(e: GevError) -> Self {
        Self::numeric(e.to_string())
    }
}

impl From<FeatureError> for CliError {
    fn from(e: FeatureError) -> Self {
        let kind = match &e {
            FeatureError::Config(_) | FeatureError::Estimator(_) => ErrorKind::Config,
            FeatureError::Fit { .. } => ErrorKind::Numeric,
            FeatureError::AllFailed(failures) => return Self(failures.iter().map(ErrorEntry::from).collect()),
            _ => ErrorKind::Data,
        };
        Self(vec![ErrorEntry {
            kind,
            epoch_id: e.epoch_id().map(str::to_string),
            message: e.to_string(),
        }])
    }
}

impl From<ClassifyError> for CliError {
    fn from(e: ClassifyError) -> Self {
        let kind = match &e {
            ClassifyError::FoldConstraint { .. } | ClassifyError::InvalidConfig(_) => ErrorKind::Config,
            ClassifyError::MissingClass(_) | ClassifyError::TooFewSamples { .. } | ClassifyError::Unlabeled(_) => {
                ErrorKind::Data
            }
            ClassifyError::SingularCovariance | ClassifyError::NonFinite | ClassifyError::EmptyConfusion => {
                ErrorKind::Numeric
            }
        };
        Self(vec![ErrorEntry::new(kind, e.to_string())])
    }
}

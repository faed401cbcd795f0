use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use super::{EegError, Epoch, MultichannelRecord};

/// Reads one epoch from a CSV file.
///
/// Layout: an optional `# fs=<Hz>` line, a header `time,<ch1>,...,<chM>`,
/// then one row per sample. `fs_override` takes precedence over the
/// in-file rate.
pub fn load_csv(path: impl AsRef<Path>, fs_override: Option<f64>) -> Result<Vec<Epoch>, EegError> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| EegError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let malformed = |reason: &str| EegError::Malformed {
        path: path.to_path_buf(),
        reason: reason.to_string(),
    };

    let mut file_fs = None;
    let mut header: Option<Vec<String>> = None;
    let mut samples = Vec::new();
    let mut rows = 0usize;

    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(comment) = line.strip_prefix('#') {
            if let Some(v) = comment.trim().strip_prefix("fs=") {
                let fs: f64 = v.trim().parse().map_err(|_| EegError::NonNumeric {
                    path: path.to_path_buf(),
                    line: line_no,
                    column: "fs".into(),
                    value: v.trim().to_string(),
                })?;
                file_fs = Some(fs);
            }
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        let Some(cols) = &header else {
            if fields.len() < 2 {
                return Err(malformed("header must name a time column and at least one channel"));
            }
            header = Some(fields.iter().map(|s| s.to_string()).collect());
            continue;
        };
        if fields.len() != cols.len() {
            return Err(EegError::RowWidth {
                path: path.to_path_buf(),
                line: line_no,
                expected: cols.len(),
                found: fields.len(),
            });
        }
        for (j, cell) in fields.iter().enumerate() {
            let v: f64 = cell.parse().map_err(|_| EegError::NonNumeric {
                path: path.to_path_buf(),
                line: line_no,
                column: cols[j].clone(),
                value: cell.to_string(),
            })?;
            if j > 0 {
                samples.push(v);
            }
        }
        rows += 1;
    }

    let header = header.ok_or_else(|| malformed("no header row"))?;
    if rows == 0 {
        return Err(malformed("no data rows"));
    }
    let sample_rate = fs_override.or(file_fs).ok_or_else(|| EegError::MissingSampleRate {
        path: path.to_path_buf(),
    })?;
    let record = MultichannelRecord::new(samples, header[1..].to_vec(), sample_rate)?;
    Ok(vec![Epoch {
        record,
        label: None,
        subject_id: String::new(),
        epoch_id: stem(path),
    }])
}

/// Writes `record` as CSV. Values use the shortest representation that
/// parses back to the same `f64`, so a load after save is bit-exact.
pub fn save_csv(record: &MultichannelRecord, path: impl AsRef<Path>) -> Result<(), EegError> {
    let path = path.as_ref();
    let mut out = String::new();
    let _ = writeln!(out, "# fs={}", record.sample_rate());
    out.push_str("time");
    for name in record.channel_names() {
        out.push(',');
        out.push_str(name);
    }
    out.push('\n');
    let m = record.n_channels();
    for (n, row) in record.samples().chunks(m).enumerate() {
        let _ = write!(out, "{}", n as f64 / record.sample_rate());
        for v in row {
            let _ = write!(out, ",{v}");
        }
        out.push('\n');
    }
    fs::write(path, out).map_err(|source| EegError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub(super) fn stem(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default()
}

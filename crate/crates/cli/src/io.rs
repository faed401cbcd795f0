//! Manifests, feature tables and atomic file output.

use std::fs;
use std::path::{Path, PathBuf};

use mugev::eeg::{load_binary, load_csv, BINARY_MAGIC};
use mugev::gev::{GevParams, GofReport};
use mugev::{Epoch, EventLabel, FeatureVector};

use crate::error::CliError;

/// Writes `bytes` next to `path` under a temporary name, then renames it
/// into place so readers never observe a partial file.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let name = path
        .file_name()
        .ok_or_else(|| CliError::config(format!("{} is not a file path", path.display())))?;
    let tmp = path.with_file_name(format!(".{}.{}.tmp", name.to_string_lossy(), std::process::id()));
    fs::write(&tmp, bytes).map_err(|e| CliError::output(&tmp, e))?;
    fs::rename(&tmp, path).map_err(|e| {
        let _ = fs::remove_file(&tmp);
        CliError::output(path, e)
    })
}

pub fn ensure_dir(dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::output(dir, e))
}

fn read_text(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::data(format!("cannot read {}: {e}", path.display())))
}

fn parse_label(s: &str) -> Result<Option<EventLabel>, String> {
    let s = s.trim();
    if s.is_empty() {
        Ok(None)
    } else {
        s.parse().map(Some)
    }
}

fn label_cell(l: Option<EventLabel>) -> String {
    l.map(|l| l.code().to_string()).unwrap_or_default()
}

/// Non-empty, non-comment lines with their 1-based line numbers.
fn rows(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn check_header(path: &Path, found: Option<(usize, &str)>, expected: &str) -> Result<(), CliError> {
    match found {
        Some((_, h)) if h.split(',').map(str::trim).eq(expected.split(',')) => Ok(()),
        Some((n, h)) => Err(CliError::data(format!(
            "{}:{n}: expected header '{expected}', found '{h}'",
            path.display()
        ))),
        None => Err(CliError::data(format!("{} is empty", path.display()))),
    }
}

pub const MANIFEST_HEADER: &str = "path,label,subject_id,epoch_id";

#[derive(Debug, Clone, PartialEq)]
pub struct ManifestRow {
    /// Relative paths are resolved against the manifest's directory.
    pub path: String,
    pub label: Option<EventLabel>,
    pub subject_id: String,
    pub epoch_id: String,
}

pub fn render_manifest(rows: &[ManifestRow]) -> String {
    let mut out = format!("{MANIFEST_HEADER}\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{}\n",
            r.path,
            label_cell(r.label),
            r.subject_id,
            r.epoch_id
        ));
    }
    out
}

pub fn read_manifest(path: &Path) -> Result<Vec<ManifestRow>, CliError> {
    let text = read_text(path)?;
    let mut lines = rows(&text);
    check_header(path, lines.next(), MANIFEST_HEADER)?;
    let mut out = Vec::new();
    for (n, line) in lines {
        let cells: Vec<&str> = line.split(',').map(str::trim).collect();
        if cells.len() != 4 {
            return Err(CliError::data(format!(
                "{}:{n}: expected 4 fields, found {}",
                path.display(),
                cells.len()
            )));
        }
        let label = parse_label(cells[1]).map_err(|e| CliError::data(format!("{}:{n}: {e}", path.display())))?;
        if cells[0].is_empty() || cells[3].is_empty() {
            return Err(CliError::data(format!(
                "{}:{n}: path and epoch_id are required",
                path.display()
            )));
        }
        out.push(ManifestRow {
            path: cells[0].to_string(),
            label,
            subject_id: cells[2].to_string(),
            epoch_id: cells[3].to_string(),
        });
    }
    if out.is_empty() {
        return Err(CliError::data(format!("{} lists no epochs", path.display())));
    }
    Ok(out)
}

fn resolve(manifest: &Path, entry: &str) -> PathBuf {
    let p = Path::new(entry);
    if p.is_absolute() {
        p.to_path_buf()
    } else {
        manifest.parent().unwrap_or(Path::new("")).join(p)
    }
}

fn load_one(path: &Path, fs_override: Option<f64>) -> Result<Epoch, CliError> {
    let head = fs::read(path).map_err(|e| CliError::data(format!("cannot read {}: {e}", path.display())))?;
    let mut epochs = if head.starts_with(&BINARY_MAGIC) {
        load_binary(path)?
    } else {
        load_csv(path, fs_override)?
    };
    match epochs.len() {
        1 => Ok(epochs.remove(0)),
        n => Err(CliError::data(format!(
            "{} holds {n} epochs, expected 1",
            path.display()
        ))),
    }
}

/// Loads every epoch listed in a manifest. Label, subject and epoch id come
/// from the manifest; the files are recognised by content (EEGB or CSV).
pub fn load_epochs(manifest: &Path, fs_override: Option<f64>) -> Result<Vec<Epoch>, CliError> {
    let rows = read_manifest(manifest)?;
    let mut errors = Vec::new();
    let mut epochs = Vec::with_capacity(rows.len());
    for row in rows {
        match load_one(&resolve(manifest, &row.path), fs_override) {
            Ok(mut e) => {
                e.label = row.label;
                e.subject_id = row.subject_id;
                e.epoch_id = row.epoch_id;
                epochs.push(e);
            }
            Err(CliError(entries)) => errors.extend(entries.into_iter().map(|mut x| {
                x.epoch_id = Some(row.epoch_id.clone());
                x
            })),
        }
    }
    if errors.is_empty() {
        Ok(epochs)
    } else {
        Err(CliError(errors))
    }
}

pub const FEATURES_HEADER: &str =
    "epoch_id,label,mu,sigma,xi,log_likelihood,ks_statistic,ks_p_value,ks_n,ks_max_cdf_error";

fn opt_cell<T: ToString>(v: Option<T>) -> String {
    v.map(|v| v.to_string()).unwrap_or_default()
}

/// One row per vector. Floats use the shortest representation that reads
/// back to the same value, so the table round-trips exactly.
pub fn render_features(features: &[FeatureVector]) -> String {
    let mut out = format!("{FEATURES_HEADER}\n");
    for f in features {
        let g = f.gof.as_ref();
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{}\n",
            f.epoch_id,
            label_cell(f.label),
            f.theta.location,
            f.theta.scale,
            f.theta.shape,
            opt_cell(f.log_likelihood),
            opt_cell(g.map(|g| g.ks_statistic)),
            opt_cell(g.map(|g| g.p_value)),
            opt_cell(g.map(|g| g.n)),
            opt_cell(g.map(|g| g.max_cdf_error)),
        ));
    }
    out
}

pub fn read_features(path: &Path) -> Result<Vec<FeatureVector>, CliError> {
    let text = read_text(path)?;
    let mut lines = rows(&text);
    check_header(path, lines.next(), FEATURES_HEADER)?;
    let mut out = Vec::new();
    for (n, line) in lines {
        let err = |msg: String| CliError::data(format!("{}:{n}: {msg}", path.display()));
        let cells: Vec<&str> = line.split(',').map(str::trim).collect();
        if cells.len() != 10 {
            return Err(err(format!("expected 10 fields, found {}", cells.len())));
        }
        let num = |i: usize| -> Result<Option<f64>, CliError> {
            if cells[i].is_empty() {
                return Ok(None);
            }
            cells[i]
                .parse::<f64>()
                .map(Some)
                .map_err(|_| err(format!("column {} is not a number: '{}'", i + 1, cells[i])))
        };
        let req = |i: usize| num(i)?.ok_or_else(|| err(format!("column {} is empty", i + 1)));
        let theta = GevParams::new(req(2)?, req(3)?, req(4)?).map_err(|e| err(e.to_string()))?;
        let gof = match (num(6)?, num(7)?, cells[8], num(9)?) {
            (Some(d), Some(p), count, Some(m)) if !count.is_empty() => Some(GofReport {
                ks_statistic: d,
                p_value: p,
                n: count
                    .parse()
                    .map_err(|_| err(format!("ks_n is not an integer: '{count}'")))?,
                max_cdf_error: m,
            }),
            (None, None, "", None) => None,
            _ => return Err(err("goodness-of-fit columns must be all present or all empty".into())),
        };
        out.push(FeatureVector {
            epoch_id: cells[0].to_string(),
            label: parse_label(cells[1]).map_err(err)?,
            theta,
            gof,
            log_likelihood: num(5)?,
        });
    }
    if out.is_empty() {
        return Err(CliError::data(format!("{} holds no feature rows", path.display())));
    }
    Ok(out)
}

//! The consolidated report and its sections.

use std::collections::BTreeMap;

use mugev::classify::CvReport;
use mugev::features::EpochFailure;
use mugev::gev::{gev_cdf, gev_pdf, gev_quantile, summarize_params, Interval};
use mugev::{CvConfig, EventLabel, FeatureVector, GevParams, PipelineConfig};
use serde::{Deserialize, Serialize};

use crate::error::ErrorEntry;

/// A report section that either ran, was deliberately not run, or failed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Section<T> {
    Ok { data: T },
    Skipped { reason: String },
    Failed { errors: Vec<ErrorEntry> },
}

impl<T> Section<T> {
    pub fn skipped(reason: impl Into<String>) -> Self {
        Section::Skipped { reason: reason.into() }
    }

    pub fn data(&self) -> Option<&T> {
        match self {
            Section::Ok { data } => Some(data),
            _ => None,
        }
    }
}

/// Everything needed to repeat a run. The output directory is left out on
/// purpose: it does not influence any result.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: String,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sample_rate_override: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pipeline: Option<PipelineConfig>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cv: Option<CvConfig>,
    pub formats: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub tool: String,
    pub version: String,
    pub timestamp: String,
    pub config: RunConfig,
}

impl Provenance {
    pub fn now(config: RunConfig) -> Self {
        Self {
            tool: env!("CARGO_PKG_NAME").into(),
            version: env!("CARGO_PKG_VERSION").into(),
            timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Millis, true),
            config,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureTable {
    pub rows: Vec<FeatureVector>,
    pub failures: Vec<EpochFailure>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntervalReport {
    pub mean: f64,
    pub ci: [f64; 2],
    /// `mean [low, high]`, two decimals.
    pub text: String,
}

impl From<Interval> for IntervalReport {
    fn from(i: Interval) -> Self {
        Self {
            mean: i.mean,
            ci: [i.ci_low, i.ci_high],
            text: i.render(2),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassSummary {
    pub label: EventLabel,
    pub code: i8,
    pub count: usize,
    pub location: IntervalReport,
    pub scale: IntervalReport,
    pub shape: IntervalReport,
}

impl ClassSummary {
    pub fn mean_params(&self) -> Option<GevParams> {
        GevParams::new(self.location.mean, self.scale.mean, self.shape.mean).ok()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SkippedGroup {
    /// Class name, or `unlabeled`.
    pub group: String,
    pub count: usize,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamSummaryReport {
    pub classes: Vec<ClassSummary>,
    pub skipped: Vec<SkippedGroup>,
}

/// Per-class mean and 95% interval of each fitted parameter.
pub fn param_summary(features: &[FeatureVector]) -> ParamSummaryReport {
    let mut classes = Vec::new();
    let mut skipped = Vec::new();
    for label in EventLabel::ALL {
        let fits: Vec<GevParams> = features
            .iter()
            .filter(|f| f.label == Some(label))
            .map(|f| f.theta)
            .collect();
        if fits.is_empty() {
            continue;
        }
        match summarize_params(&fits) {
            Ok(s) => classes.push(ClassSummary {
                label,
                code: label.code(),
                count: s.count,
                location: s.location.into(),
                scale: s.scale.into(),
                shape: s.shape.into(),
            }),
            Err(e) => skipped.push(SkippedGroup {
                group: label.name().into(),
                count: fits.len(),
                reason: e.to_string(),
            }),
        }
    }
    let unlabeled = features.iter().filter(|f| f.label.is_none()).count();
    if unlabeled > 0 {
        skipped.push(SkippedGroup {
            group: "unlabeled".into(),
            count: unlabeled,
            reason: "no class label".into(),
        });
    }
    ParamSummaryReport { classes, skipped }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GofStats {
    pub epochs: usize,
    pub mean_ks_statistic: f64,
    pub max_ks_statistic: f64,
    pub mean_p_value: f64,
    pub min_p_value: f64,
    /// Epochs whose fit is rejected at the 5% level.
    pub rejected_at_5pct: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GofAggregate {
    pub overall: GofStats,
    /// Keyed by class name; unlabeled epochs only count towards `overall`.
    pub per_class: BTreeMap<String, GofStats>,
}

fn gof_stats<'a>(rows: impl Iterator<Item = &'a FeatureVector>) -> Option<GofStats> {
    let gofs: Vec<_> = rows.filter_map(|f| f.gof).collect();
    if gofs.is_empty() {
        return None;
    }
    let n = gofs.len() as f64;
    Some(GofStats {
        epochs: gofs.len(),
        mean_ks_statistic: gofs.iter().map(|g| g.ks_statistic).sum::<f64>() / n,
        max_ks_statistic: gofs.iter().map(|g| g.ks_statistic).fold(f64::NEG_INFINITY, f64::max),
        mean_p_value: gofs.iter().map(|g| g.p_value).sum::<f64>() / n,
        min_p_value: gofs.iter().map(|g| g.p_value).fold(f64::INFINITY, f64::min),
        rejected_at_5pct: gofs.iter().filter(|g| g.p_value < 0.05).count(),
    })
}

/// `None` when no vector carries a goodness-of-fit result.
pub fn gof_aggregate(features: &[FeatureVector]) -> Option<GofAggregate> {
    let overall = gof_stats(features.iter())?;
    let per_class = EventLabel::ALL
        .iter()
        .filter_map(|&l| {
            gof_stats(features.iter().filter(move |f| f.label == Some(l))).map(|s| (l.name().to_string(), s))
        })
        .collect();
    Some(GofAggregate { overall, per_class })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportBundle {
    pub provenance: Provenance,
    pub features: Section<FeatureTable>,
    pub param_summary: Section<ParamSummaryReport>,
    pub gof: Section<GofAggregate>,
    pub cv: Section<CvReport>,
}

impl ReportBundle {
    /// Errors of every failed section.
    pub fn errors(&self) -> Vec<ErrorEntry> {
        fn errs<T>(s: &Section<T>) -> &[ErrorEntry] {
            match s {
                Section::Failed { errors } => errors,
                _ => &[],
            }
        }
        let mut out = Vec::new();
        out.extend_from_slice(errs(&self.features));
        if let Some(t) = self.features.data() {
            out.extend(t.failures.iter().map(ErrorEntry::from));
        }
        out.extend_from_slice(errs(&self.param_summary));
        out.extend_from_slice(errs(&self.gof));
        out.extend_from_slice(errs(&self.cv));
        out
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

pub const CURVE_POINTS: usize = 201;

/// `x,pdf,cdf` over the central 99.8% of the distribution.
pub fn render_curve(p: &GevParams) -> Option<String> {
    let lo = gev_quantile(0.001, p).ok()?;
    let hi = gev_quantile(0.999, p).ok()?;
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return None;
    }
    let mut out = String::from("x,pdf,cdf\n");
    for i in 0..CURVE_POINTS {
        let x = lo + (hi - lo) * i as f64 / (CURVE_POINTS - 1) as f64;
        out.push_str(&format!("{x},{},{}\n", gev_pdf(x, p), gev_cdf(x, p)));
    }
    Some(out)
}

/// Rows true class, columns predicted class, summed over repeats.
pub fn render_confusion(cv: &CvReport) -> String {
    let mut out = String::from("true\\predicted");
    for l in EventLabel::ALL {
        out.push_str(&format!(",{}", l.name()));
    }
    out.push('\n');
    for (l, row) in EventLabel::ALL.iter().zip(&cv.confusion) {
        out.push_str(l.name());
        for c in row {
            out.push_str(&format!(",{c}"));
        }
        out.push('\n');
    }
    out
}

fn ratio_cell(v: Option<f64>) -> String {
    v.map_or_else(|| "n/a".into(), |v| format!("{v:.3}"))
}

/// Human-readable cross-validation summary.
pub fn render_cv_table(cv: &CvReport) -> String {
    let c = &cv.config;
    let mut out = format!(
        "accuracy {:.3}  ({}-fold x {} repeats{})\n{:<10}{:>6}{:>13}{:>13}{:>9}\n",
        cv.accuracy,
        c.folds,
        c.repeats,
        if c.stratified { ", stratified" } else { "" },
        "class",
        "code",
        "sensitivity",
        "specificity",
        "support"
    );
    for m in &cv.per_class {
        out.push_str(&format!(
            "{:<10}{:>6}{:>13}{:>13}{:>9}\n",
            m.label.name(),
            m.label.code(),
            ratio_cell(m.sensitivity),
            ratio_cell(m.specificity),
            m.support
        ));
    }
    out
}

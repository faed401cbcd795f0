use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use mugev::classify::reference::sample_reference_clusters;
use mugev::classify::{cross_validate, CvReport};
use mugev::eeg::{encode_binary, synthesize_surrogate_with, SurrogateConfig};
use mugev::features::{extract_dataset, Execution};
use mugev::{CvConfig, EventLabel, FeatureVector};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::args::{ClassifyArgs, FeatureArgs, FitArgs, Format, OutputArgs, PipelineArgs, SynthArgs, SynthFeaturesArgs};
use crate::error::{CliError, ErrorEntry};
use crate::io::{ensure_dir, load_epochs, read_features, render_features, render_manifest, write_atomic, ManifestRow};
use crate::report::{
    gof_aggregate, param_summary, render_confusion, render_curve, render_cv_table, FeatureTable, Provenance,
    ReportBundle, RunConfig, Section,
};

/// What a finished command leaves behind.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Outcome {
    /// Text for standard output.
    pub stdout: String,
    /// Files written, in order.
    pub files: Vec<PathBuf>,
    /// Non-fatal failures (individual epochs, a failed report section).
    /// A non-empty list still makes the command exit non-zero.
    pub errors: Vec<ErrorEntry>,
}

impl Outcome {
    fn write(&mut self, path: PathBuf, bytes: impl AsRef<[u8]>) -> Result<(), CliError> {
        write_atomic(&path, bytes.as_ref())?;
        self.files.push(path);
        Ok(())
    }
}

pub fn cmd_synth(args: &SynthArgs) -> Result<Outcome, CliError> {
    if args.per_class == 0 {
        return Err(CliError::config("--per-class must be at least 1"));
    }
    if !(args.duration > 0.0 && args.duration.is_finite()) {
        return Err(CliError::config(format!(
            "--duration must be positive, got {}",
            args.duration
        )));
    }
    if !(args.fs >= 64.0 && args.fs.is_finite()) {
        return Err(CliError::config(format!(
            "--fs must be at least 64 Hz, got {}",
            args.fs
        )));
    }
    ensure_dir(&args.out)?;
    let cfg = SurrogateConfig {
        gains: args.gains,
        ..SurrogateConfig::default()
    };
    // One stream of per-epoch seeds, drawn class by class.
    let mut seeds = ChaCha8Rng::seed_from_u64(args.seed);
    let mut out = Outcome::default();
    let mut manifest = Vec::new();
    for label in EventLabel::ALL {
        for i in 0..args.per_class {
            let epoch = synthesize_surrogate_with(label, args.duration, args.fs, seeds.next_u64(), &cfg)?;
            let epoch_id = format!("{}-{i:04}", label.name());
            let file = format!("{epoch_id}.eegb");
            out.write(args.out.join(&file), encode_binary(&epoch.record))?;
            manifest.push(ManifestRow {
                path: file,
                label: Some(label),
                subject_id: epoch.subject_id,
                epoch_id,
            });
        }
    }
    out.write(args.out.join("manifest.csv"), render_manifest(&manifest))?;
    writeln!(
        out.stdout,
        "wrote {} epochs and manifest.csv to {}",
        manifest.len(),
        args.out.display()
    )
    .unwrap();
    Ok(out)
}

pub fn cmd_synth_features(args: &SynthFeaturesArgs) -> Result<Outcome, CliError> {
    if args.per_class == 0 {
        return Err(CliError::config("--per-class must be at least 1"));
    }
    if !(args.spread >= 0.0 && args.spread.is_finite()) {
        return Err(CliError::config(format!(
            "--spread must be non-negative, got {}",
            args.spread
        )));
    }
    ensure_dir(&args.out)?;
    let fv = sample_reference_clusters(args.per_class, args.spread, args.seed);
    let mut out = Outcome::default();
    out.write(args.out.join("features.csv"), render_features(&fv))?;
    writeln!(out.stdout, "wrote {} feature rows to {}", fv.len(), args.out.display()).unwrap();
    Ok(out)
}

fn run_config(command: &str, seed: u64, input: &Path, output: &OutputArgs) -> RunConfig {
    RunConfig {
        command: command.into(),
        seed,
        input: Some(input.display().to_string()),
        sample_rate_override: None,
        pipeline: None,
        cv: None,
        formats: output.format_names(),
    }
}

fn extract(input: &Path, fa: &FeatureArgs) -> Result<Section<FeatureTable>, CliError> {
    let epochs = load_epochs(input, fa.fs)?;
    let execution = if fa.sequential {
        Execution::Sequential
    } else {
        Execution::Parallel
    };
    Ok(match extract_dataset(&epochs, &fa.pipeline_config(), execution) {
        Ok(d) => Section::Ok {
            data: FeatureTable {
                rows: d.features,
                failures: d.failures,
            },
        },
        Err(e) => {
            let e = CliError::from(e);
            // Bad settings fail the whole command rather than one section.
            if e.exit_code() == 2 {
                return Err(e);
            }
            Section::Failed { errors: e.0 }
        }
    })
}

fn cv_section(features: &[FeatureVector], cfg: &CvConfig) -> Result<Section<CvReport>, CliError> {
    let unlabeled = features.iter().filter(|f| f.label.is_none()).count();
    if unlabeled > 0 {
        return Ok(Section::skipped(format!(
            "{unlabeled} of {} feature vectors have no label",
            features.len()
        )));
    }
    match cross_validate(features, cfg) {
        Ok(r) => Ok(Section::Ok { data: r }),
        Err(e) => {
            let e = CliError::from(e);
            if e.exit_code() == 2 {
                return Err(e);
            }
            Ok(Section::Failed { errors: e.0 })
        }
    }
}

/// Fills the summary sections from the feature section and writes the
/// requested files.
fn assemble(
    provenance: Provenance,
    features: Section<FeatureTable>,
    cv: Section<CvReport>,
    output: &OutputArgs,
    out: &mut Outcome,
) -> Result<ReportBundle, CliError> {
    let rows = features.data().map(|t| t.rows.as_slice());
    let param_summary = match rows {
        Some(r) => Section::Ok { data: param_summary(r) },
        None => Section::skipped("no feature vectors"),
    };
    let gof = match rows.map(gof_aggregate) {
        Some(Some(g)) => Section::Ok { data: g },
        Some(None) => Section::skipped("feature vectors carry no goodness-of-fit results"),
        None => Section::skipped("no feature vectors"),
    };
    let bundle = ReportBundle {
        provenance,
        features,
        param_summary,
        gof,
        cv,
    };

    ensure_dir(&output.out)?;
    if output.wants(Format::Csv) {
        if let Some(t) = bundle.features.data() {
            let rows = &t.rows;
            out.write(output.out.join("features.csv"), render_features(rows))?;
        }
        if let Some(s) = bundle.param_summary.data() {
            for c in &s.classes {
                if let Some(curve) = c.mean_params().as_ref().and_then(render_curve) {
                    out.write(output.out.join(format!("curve_{}.csv", c.label.name())), curve)?;
                }
            }
        }
        if let Some(cv) = bundle.cv.data() {
            out.write(output.out.join("confusion.csv"), render_confusion(cv))?;
        }
    }
    if output.wants(Format::Json) {
        out.write(output.out.join("report.json"), bundle.to_json())?;
    }

    if let Some(s) = bundle.param_summary.data() {
        for c in &s.classes {
            writeln!(
                out.stdout,
                "{:<9} n={:<4} mu {}  sigma {}  xi {}",
                c.label.name(),
                c.count,
                c.location.text,
                c.scale.text,
                c.shape.text
            )
            .unwrap();
        }
    }
    match &bundle.cv {
        Section::Ok { data } => out.stdout.push_str(&render_cv_table(data)),
        Section::Skipped { reason } => writeln!(out.stdout, "cross-validation skipped: {reason}").unwrap(),
        Section::Failed { .. } => {}
    }
    out.errors = bundle.errors();
    Ok(bundle)
}

pub fn cmd_fit(args: &FitArgs) -> Result<Outcome, CliError> {
    let mut cfg = run_config("fit", args.seed, &args.input, &args.output);
    cfg.pipeline = Some(args.features.pipeline_config());
    cfg.sample_rate_override = args.features.fs;
    let features = extract(&args.input, &args.features)?;
    let mut out = Outcome::default();
    let bundle = assemble(
        Provenance::now(cfg),
        features,
        Section::skipped("fit only; run `classify` on features.csv"),
        &args.output,
        &mut out,
    )?;
    if args.output.wants(Format::Json) {
        if let Section::Ok { data } = &bundle.param_summary {
            let json = serde_json::to_string_pretty(data).expect("summary serializes") + "\n";
            out.write(args.output.out.join("param_summary.json"), json)?;
        }
    }
    Ok(out)
}

pub fn cmd_classify(args: &ClassifyArgs) -> Result<Outcome, CliError> {
    let cv_cfg = args.cv.config(args.seed);
    let mut cfg = run_config("classify", args.seed, &args.input, &args.output);
    cfg.cv = Some(cv_cfg);
    let rows = read_features(&args.input)?;
    let cv = match cv_section(&rows, &cv_cfg)? {
        Section::Skipped { reason } => return Err(CliError::data(reason)),
        s => s,
    };
    let features = Section::Ok {
        data: FeatureTable { rows, failures: vec![] },
    };
    let mut out = Outcome::default();
    let bundle = assemble(Provenance::now(cfg), features, cv, &args.output, &mut out)?;
    if args.output.wants(Format::Json) {
        if let Section::Ok { data } = &bundle.cv {
            let json = serde_json::to_string_pretty(data).expect("cv report serializes") + "\n";
            out.write(args.output.out.join("cv_report.json"), json)?;
        }
    }
    Ok(out)
}

pub fn cmd_pipeline(args: &PipelineArgs) -> Result<Outcome, CliError> {
    let cv_cfg = args.cv.config(args.seed);
    let mut cfg = run_config("pipeline", args.seed, &args.input, &args.output);
    cfg.pipeline = Some(args.features.pipeline_config());
    cfg.sample_rate_override = args.features.fs;
    cfg.cv = Some(cv_cfg);
    let features = extract(&args.input, &args.features)?;
    let cv = match features.data() {
        Some(t) => cv_section(&t.rows, &cv_cfg)?,
        None => Section::skipped("no feature vectors"),
    };
    let mut out = Outcome::default();
    assemble(Provenance::now(cfg), features, cv, &args.output, &mut out)?;
    Ok(out)
}

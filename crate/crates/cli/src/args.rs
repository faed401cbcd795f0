use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use mugev::features::{FilterBand, SegmentPolicy};
use mugev::{CvConfig, PipelineConfig, CENTRAL_CHANNELS};

#[derive(Debug, Clone, Parser)]
#[command(
    name = "mugev",
    version,
    about = "Mu-band GEV features and LDA classification of EEG epochs"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Write labeled surrogate epochs (EEGB) and a manifest.
    Synth(SynthArgs),
    /// Write a feature table sampled around the reference class geometry.
    SynthFeatures(SynthFeaturesArgs),
    /// Fit a GEV to every epoch and summarise the parameters per class.
    Fit(FitArgs),
    /// Cross-validate an LDA classifier on a feature table.
    Classify(ClassifyArgs),
    /// Fit and classify in one run.
    Pipeline(PipelineArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Synth(_) => "synth",
            Command::SynthFeatures(_) => "synth-features",
            Command::Fit(_) => "fit",
            Command::Classify(_) => "classify",
            Command::Pipeline(_) => "pipeline",
        }
    }

    pub fn out_dir(&self) -> &PathBuf {
        match self {
            Command::Synth(a) => &a.out,
            Command::SynthFeatures(a) => &a.out,
            Command::Fit(a) => &a.output.out,
            Command::Classify(a) => &a.output.out,
            Command::Pipeline(a) => &a.output.out,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

impl Format {
    pub fn name(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Output directory, created if missing.
    #[arg(long)]
    pub out: PathBuf,
    /// Report formats to write.
    #[arg(long, value_delimiter = ',', default_value = "json,csv")]
    pub format: Vec<Format>,
}

impl OutputArgs {
    pub fn wants(&self, f: Format) -> bool {
        self.format.contains(&f)
    }

    pub fn format_names(&self) -> Vec<String> {
        let mut v: Vec<String> = self.format.iter().map(|f| f.name().to_string()).collect();
        v.sort();
        v.dedup();
        v
    }
}

#[derive(Debug, Clone, Args)]
pub struct FeatureArgs {
    /// Band whose periodogram bins are pooled, `low:high` in Hz.
    #[arg(long, default_value = "7.5:11.5", value_parser = parse_band)]
    pub band: (f64, f64),
    /// Butterworth band-pass, `low:high:order`.
    #[arg(long, default_value = "8:30:4", value_parser = parse_filter)]
    pub filter: FilterBand,
    /// Periodogram segment length in samples, or `auto` for half a second.
    #[arg(long, default_value = "auto", value_parser = parse_segment)]
    pub segment: SegmentPolicy,
    /// Channels to pool (defaults to the seven central channels).
    #[arg(long, value_delimiter = ',')]
    pub channels: Option<Vec<String>>,
    /// GEV estimator: `full_mle` or `gumbel_fixed_point`.
    #[arg(long, default_value = "full_mle")]
    pub estimator: String,
    /// Sample rate for CSV epochs without a `# fs=` line.
    #[arg(long)]
    pub fs: Option<f64>,
    /// Process epochs on one thread.
    #[arg(long)]
    pub sequential: bool,
}

impl FeatureArgs {
    pub fn pipeline_config(&self) -> PipelineConfig {
        PipelineConfig {
            band_low_hz: self.band.0,
            band_high_hz: self.band.1,
            filter: self.filter,
            segment: self.segment,
            channels: self
                .channels
                .clone()
                .unwrap_or_else(|| CENTRAL_CHANNELS.iter().map(|s| s.to_string()).collect()),
            estimator: self.estimator.clone(),
            ..PipelineConfig::default()
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct CvArgs {
    #[arg(long, default_value_t = 20)]
    pub folds: usize,
    #[arg(long, default_value_t = 10)]
    pub repeats: usize,
    /// Assign folds without balancing classes.
    #[arg(long)]
    pub unstratified: bool,
}

impl CvArgs {
    pub fn config(&self, seed: u64) -> CvConfig {
        CvConfig {
            folds: self.folds,
            repeats: self.repeats,
            seed,
            stratified: !self.unstratified,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct SynthArgs {
    /// Epochs per class.
    #[arg(long)]
    pub per_class: usize,
    /// Epoch length in seconds.
    #[arg(long, default_value_t = 2.0)]
    pub duration: f64,
    #[arg(long, default_value_t = 512.0)]
    pub fs: f64,
    #[arg(long)]
    pub seed: u64,
    /// RMS gains `imagery:movement:resting`.
    #[arg(long, default_value = "3:2:1", value_parser = parse_gains)]
    pub gains: [f64; 3],
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct SynthFeaturesArgs {
    #[arg(long, default_value_t = 300)]
    pub per_class: usize,
    /// Box half-width as a multiple of each reference interval half-width.
    #[arg(long, default_value_t = 0.5)]
    pub spread: f64,
    #[arg(long)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct FitArgs {
    /// Manifest CSV (`path,label,subject_id,epoch_id`).
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub seed: u64,
    #[command(flatten)]
    pub features: FeatureArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct ClassifyArgs {
    /// Feature table as written by `fit`.
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub seed: u64,
    #[command(flatten)]
    pub cv: CvArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct PipelineArgs {
    /// Manifest CSV (`path,label,subject_id,epoch_id`).
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub seed: u64,
    #[command(flatten)]
    pub features: FeatureArgs,
    #[command(flatten)]
    pub cv: CvArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

fn parse_numbers<const N: usize>(s: &str, what: &str) -> Result<[f64; N], String> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != N {
        return Err(format!("expected {what}"));
    }
    let mut out = [0.0; N];
    for (o, p) in out.iter_mut().zip(parts) {
        *o = p
            .trim()
            .parse()
            .map_err(|_| format!("'{p}' is not a number (expected {what})"))?;
    }
    Ok(out)
}

fn parse_band(s: &str) -> Result<(f64, f64), String> {
    let [lo, hi] = parse_numbers(s, "low:high")?;
    if !(lo >= 0.0 && lo < hi) {
        return Err(format!("band {lo}:{hi} is not an increasing range"));
    }
    Ok((lo, hi))
}

fn parse_filter(s: &str) -> Result<FilterBand, String> {
    let [lo, hi, order] = parse_numbers(s, "low:high:order")?;
    if order.fract() != 0.0 || !(1.0..=64.0).contains(&order) || !(lo > 0.0 && lo < hi) {
        return Err(format!("filter {s} is not a valid band-pass"));
    }
    Ok(FilterBand {
        order: order as usize,
        low_cut_hz: lo,
        high_cut_hz: hi,
    })
}

fn parse_segment(s: &str) -> Result<SegmentPolicy, String> {
    if s.eq_ignore_ascii_case("auto") {
        return Ok(SegmentPolicy::Auto);
    }
    match s.parse::<usize>() {
        Ok(n) if n >= 8 => Ok(SegmentPolicy::Samples(n)),
        Ok(n) => Err(format!("segment length {n} is below 8 samples")),
        Err(_) => Err(format!("'{s}' is neither a sample count nor 'auto'")),
    }
}

fn parse_gains(s: &str) -> Result<[f64; 3], String> {
    let g = parse_numbers(s, "imagery:movement:resting")?;
    if g.iter().any(|g| !(*g > 0.0 && g.is_finite())) {
        return Err("gains must be positive".into());
    }
    Ok(g)
}

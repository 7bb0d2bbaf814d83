//! The `periocular` command line.
//!
//! ```text
//! periocular preprocess --config exp.toml --out out/   ROI PNGs + manifest.csv
//! periocular extract    --config exp.toml --out out/   feature CSVs + sidecars
//! periocular evaluate   --config exp.toml --out out/   reports + summary.txt
//! periocular report     --out out/                     re-render text tables
//! ```
//!
//! Exit codes: 0 success, 2 configuration error, 3 data error, 4 internal error.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::config::{combination_name, Config};
use crate::error::{Error, ErrorKind, Result};
use crate::eval::export::{write_feature_csv, FeatureSidecar, FEATURE_FORMAT_VERSION};
use crate::eval::report::{csv_error, read_predictions_csv};
use crate::eval::{
    compute_metrics, confusion_from_predictions, load_frames, summary_table, Evaluator, Expression,
    ExperimentReport,
};

#[derive(Debug, Parser)]
#[command(name = "periocular", version, about = "Periocular expression recognition experiments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// Experiment configuration (TOML).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true, default_value = "out")]
    pub out: PathBuf,
    /// Overrides the configured seed.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// More logging; repeat for debug output.
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Write the normalized ROI of every selected frame and a manifest.
    Preprocess,
    /// Write per-image feature CSVs for every configured combination.
    Extract,
    /// Run leave-one-subject-out evaluation and write reports.
    Evaluate,
    /// Rebuild text tables and the summary from existing JSON reports.
    Report,
}

pub fn exit_code(kind: ErrorKind) -> i32 {
    match kind {
        ErrorKind::Config => 2,
        ErrorKind::Data => 3,
        ErrorKind::Internal => 4,
    }
}

fn load_config(common: &CommonArgs) -> Result<Config> {
    let path = common
        .config
        .as_ref()
        .ok_or_else(|| Error::Config("--config is required for this command".into()))?;
    let mut config = Config::load(path)?;
    if let Some(seed) = common.seed {
        config.settings.seed = seed;
    }
    Ok(config)
}

fn create_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|e| Error::io(path, e))
}

pub fn cmd_preprocess(config: &Config, out: &Path) -> Result<PathBuf> {
    let evaluator = Evaluator::new(config.settings)?;
    let frames = load_frames(config)?;
    let rois = evaluator.prepare_rois(&frames)?;
    let manifest = out.join("manifest.csv");
    create_dir(out)?;
    let mut w = csv::Writer::from_path(&manifest).map_err(|e| csv_error(&manifest, e))?;
    w.write_record(["subject_id", "sequence_id", "frame_index", "label", "roi_path"])
        .map_err(|e| csv_error(&manifest, e))?;
    for (f, roi) in frames.iter().zip(&rois) {
        let rel = PathBuf::from("rois")
            .join(&f.subject_id)
            .join(&f.sequence_id)
            .join(format!("{:04}.png", f.frame_index));
        let abs = out.join(&rel);
        create_dir(abs.parent().expect("has parent"))?;
        roi.save_png(&abs)?;
        w.write_record([
            f.subject_id.as_str(),
            f.sequence_id.as_str(),
            &f.frame_index.to_string(),
            f.label.name(),
            &rel.to_string_lossy(),
        ])
        .map_err(|e| csv_error(&manifest, e))?;
    }
    w.flush().map_err(|e| Error::io(&manifest, e))?;
    log::info!("wrote {} ROIs and {}", rois.len(), manifest.display());
    Ok(manifest)
}

pub fn cmd_extract(config: &Config, out: &Path) -> Result<Vec<PathBuf>> {
    let evaluator = Evaluator::new(config.settings)?;
    let frames = load_frames(config)?;
    let rois = evaluator.prepare_rois(&frames)?;
    let tables = evaluator.tables_for(&rois, &config.combinations)?;
    let dir = out.join("features");
    let mut written = Vec::new();
    for combo in &config.combinations {
        let name = combination_name(combo);
        let stem = name.to_ascii_lowercase().replace('+', "_");
        let join = |mirrored: bool| -> Vec<Vec<f64>> {
            (0..frames.len())
                .map(|i| {
                    combo
                        .iter()
                        .flat_map(|d| {
                            let t = &tables[d];
                            let rows = if mirrored { t.mirrored.as_ref().expect("mirrored") } else { &t.original };
                            rows[i].iter().copied()
                        })
                        .collect()
                })
                .collect()
        };
        let variants: &[bool] = if config.settings.mirror_training { &[false, true] } else { &[false] };
        for &mirrored in variants {
            let values = join(mirrored);
            let sidecar = FeatureSidecar {
                format_version: FEATURE_FORMAT_VERSION,
                descriptor: name.clone(),
                combination: combo.clone(),
                mirrored,
                dims: values.first().map_or(0, Vec::len),
                rows: values.len(),
                settings: config.settings,
            };
            let file = dir.join(if mirrored { format!("{stem}_mirrored.csv") } else { format!("{stem}.csv") });
            write_feature_csv(&file, &frames, &values, &sidecar)?;
            written.push(file);
        }
    }
    Ok(written)
}

pub fn cmd_evaluate(config: &Config, out: &Path) -> Result<Vec<ExperimentReport>> {
    let evaluator = Evaluator::new(config.settings)?;
    let frames = load_frames(config)?;
    let reports = evaluator.run(&frames, &config.combinations)?;
    let dir = out.join("reports");
    for r in &reports {
        r.save(&dir)?;
        log::info!(
            "{}: average {:.1}, overall {:.1}, min {:.1}",
            r.name,
            r.metrics.average_acc,
            r.metrics.overall_acc,
            r.metrics.min_acc
        );
    }
    write_file(&out.join("summary.txt"), &summary_table(&reports))?;
    Ok(reports)
}

/// Reloads every JSON report under `out/reports`, checks that its metrics
/// agree with its prediction log, and rewrites the text outputs.
pub fn cmd_report(out: &Path) -> Result<Vec<ExperimentReport>> {
    let dir = out.join("reports");
    let mut paths: Vec<PathBuf> = fs::read_dir(&dir)
        .map_err(|e| Error::io(&dir, e))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|e| e == "json"))
        .collect();
    paths.sort();
    if paths.is_empty() {
        return Err(Error::format(&dir, "no JSON reports found"));
    }
    let mut reports = Vec::new();
    for path in paths {
        let text = fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
        let report = ExperimentReport::from_json(&text).map_err(|e| Error::format(&path, e.to_string()))?;
        let log_path = dir.join(format!("{}_predictions.csv", report.file_stem()));
        let predictions = if log_path.exists() {
            read_predictions_csv(&log_path)?
        } else {
            report.predictions.clone()
        };
        let names: Vec<&str> = Expression::ALL.iter().map(|e| e.name()).collect();
        let recomputed = compute_metrics(&confusion_from_predictions(&predictions), &names)?;
        if recomputed != report.metrics {
            return Err(Error::format(&path, "stored metrics disagree with the prediction log"));
        }
        let txt = dir.join(format!("{}.txt", report.file_stem()));
        write_file(&txt, &report.text_table())?;
        reports.push(report);
    }
    let summary = summary_table(&reports);
    write_file(&out.join("summary.txt"), &summary)?;
    print!("{summary}");
    Ok(reports)
}

fn init_logging(verbose: u8) {
    let level = match verbose {
        0 => log::LevelFilter::Warn,
        1 => log::LevelFilter::Info,
        _ => log::LevelFilter::Debug,
    };
    let _ = env_logger::Builder::new().filter_level(level).parse_default_env().try_init();
}

pub fn run(cli: &Cli) -> Result<()> {
    if let Some(jobs) = cli.common.jobs {
        if jobs == 0 {
            return Err(Error::Config("--jobs must be at least 1".into()));
        }
        // Fails only if a pool already exists, e.g. when called twice in-process.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global();
    }
    let out = &cli.common.out;
    match cli.command {
        Command::Preprocess => cmd_preprocess(&load_config(&cli.common)?, out).map(drop),
        Command::Extract => cmd_extract(&load_config(&cli.common)?, out).map(drop),
        Command::Evaluate => {
            let reports = cmd_evaluate(&load_config(&cli.common)?, out)?;
            print!("{}", summary_table(&reports));
            Ok(())
        }
        Command::Report => cmd_report(out).map(drop),
    }
}

/// Parses `args`, runs the command and returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { exit_code(ErrorKind::Config) } else { 0 };
        }
    };
    init_logging(cli.common.verbose);
    match run(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(e.kind())
        }
    }
}

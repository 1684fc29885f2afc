//! The `voxph` command line.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;
use voxph_core::classifier::{ClassifierConfig, Objective, SelectionMode, SplitMode};
use voxph_core::filtration::Direction;
use voxph_core::vectorize::DimSet;
use voxph_core::volume::Axis;
use voxph_core::Bin;

use crate::classify::{classify, confusion_csv, dataset_from_table, report_json, roc_csv, Task};
use crate::config::{parse_axis, parse_dims, parse_direction, ExtractConfig, ExtractOverrides, RangeArg, VecArg};
use crate::error::read_toml;
use crate::extract::{diagrams_of, extract_batch};
use crate::features::FeatureTable;
use crate::io::{load_volume, Format};
use crate::manifest::Manifest;
use crate::synth::{write_dataset, SynthConfig};
use crate::{diagram, Error};

#[derive(Debug, Parser)]
#[command(name = "voxph", version, about = "Cubical persistent homology features for 3D volumes")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute feature vectors (and optionally diagrams) for a manifest.
    Extract(ExtractCmd),
    /// Cross-validate the boosted-trees classifier on a feature CSV.
    Classify(ClassifyCmd),
    /// Write a synthetic phantom dataset and its manifest.
    Synth(SynthCmd),
    /// Print the persistence diagrams of one volume as JSON.
    Diagram(DiagramCmd),
}

#[derive(Debug, Clone, Default, Args)]
pub struct ExtractFlags {
    /// Number of thresholds N.
    #[arg(long)]
    pub levels: Option<Bin>,
    /// `minmax` or `fixed:LO:HI`.
    #[arg(long)]
    pub range: Option<RangeArg>,
    /// Middle slices to keep (0 = all).
    #[arg(long)]
    pub slices: Option<usize>,
    #[arg(long, value_parser = parse_axis)]
    pub axis: Option<Axis>,
    /// `sub` or `super`.
    #[arg(long, value_parser = parse_direction)]
    pub direction: Option<Direction>,
    /// `betti` or `silhouette:P`.
    #[arg(long = "vec")]
    pub vectorization: Option<VecArg>,
    /// Homology dimensions to emit, e.g. `1,2`.
    #[arg(long, value_parser = parse_dims)]
    pub dims: Option<DimSet>,
}

impl ExtractFlags {
    fn overrides(&self) -> ExtractOverrides {
        ExtractOverrides {
            levels: self.levels,
            range: self.range,
            slices: self.slices,
            axis: self.axis,
            direction: self.direction,
            vectorization: self.vectorization,
            dims: self.dims.clone(),
        }
    }
}

#[derive(Debug, Args)]
pub struct ExtractCmd {
    pub manifest: PathBuf,
    /// Feature CSV to write; `-` for stdout.
    #[arg(short, long, default_value = "-")]
    pub out: PathBuf,
    /// Directory for one diagram JSON per volume.
    #[arg(long)]
    pub diagrams: Option<PathBuf>,
    /// TOML file whose `[extract]` table overrides the manifest's.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Worker threads (0 = one per core).
    #[arg(long, default_value_t = 0)]
    pub workers: usize,
    #[arg(long, value_enum, default_value = "auto")]
    pub format: Format,
    #[command(flatten)]
    pub flags: ExtractFlags,
}

#[derive(Debug, Args)]
pub struct ClassifyCmd {
    pub features: PathBuf,
    #[arg(long, value_enum, default_value = "three-class")]
    pub task: Task,
    /// Directory for report.json, confusion.csv and roc.csv.
    #[arg(short, long)]
    pub out: PathBuf,
    #[arg(long)]
    pub folds: Option<usize>,
    /// TOML file with a `[classifier]` table and optional `folds`.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    pub workers: usize,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub n_estimators: Option<usize>,
    #[arg(long)]
    pub learning_rate: Option<f64>,
    #[arg(long)]
    pub max_depth: Option<usize>,
    #[arg(long)]
    pub colsample_bytree: Option<f64>,
    /// `mean`, `off` or `absolute:T`.
    #[arg(long, value_parser = parse_selection)]
    pub selection: Option<SelectionMode>,
    #[arg(long, value_parser = parse_split)]
    pub split: Option<SplitMode>,
}

#[derive(Debug, Args)]
pub struct SynthCmd {
    pub config: PathBuf,
    #[arg(short, long)]
    pub out: PathBuf,
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct DiagramCmd {
    pub volume: PathBuf,
    #[arg(long, value_enum, default_value = "auto")]
    pub format: Format,
    /// TOML file with an `[extract]` table.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[command(flatten)]
    pub flags: ExtractFlags,
}

fn parse_selection(s: &str) -> Result<SelectionMode, String> {
    match s {
        "mean" => Ok(SelectionMode::Mean),
        "off" => Ok(SelectionMode::Off),
        _ => s
            .strip_prefix("absolute:")
            .and_then(|t| t.parse::<f64>().ok())
            .filter(|t| t.is_finite())
            .map(SelectionMode::Absolute)
            .ok_or_else(|| format!("invalid selection '{s}': expected mean, off or absolute:T")),
    }
}

fn parse_split(s: &str) -> Result<SplitMode, String> {
    match s {
        "histogram" => Ok(SplitMode::Histogram),
        "exact" => Ok(SplitMode::Exact),
        _ => Err(format!("invalid split mode '{s}': expected histogram or exact")),
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct ConfigFile {
    extract: ExtractOverrides,
    classifier: Option<ClassifierConfig>,
    folds: Option<usize>,
}

fn config_file(path: Option<&Path>) -> Result<ConfigFile, Error> {
    path.map_or_else(|| Ok(ConfigFile::default()), read_toml)
}

/// Whether every input was processed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Complete,
    Partial,
}

pub fn run(cli: Cli) -> Result<Outcome, Error> {
    match cli.command {
        Command::Extract(cmd) => run_extract(cmd),
        Command::Classify(cmd) => run_classify(cmd).map(|()| Outcome::Complete),
        Command::Synth(cmd) => run_synth(cmd).map(|()| Outcome::Complete),
        Command::Diagram(cmd) => run_diagram(cmd).map(|()| Outcome::Complete),
    }
}

/// Exit codes: 0 complete, 2 some inputs skipped, 1 fatal error (including
/// bad arguments, which clap would otherwise report as 2).
pub fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::FAILURE } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(Outcome::Complete) => ExitCode::SUCCESS,
        Ok(Outcome::Partial) => ExitCode::from(2),
        Err(e) => {
            eprintln!("voxph: {e}");
            ExitCode::FAILURE
        }
    }
}

fn write_output(path: &Path, contents: &[u8]) -> Result<(), Error> {
    if path == Path::new("-") {
        let mut out = std::io::stdout().lock();
        out.write_all(contents).map_err(Error::file("<stdout>"))?;
        return out.flush().map_err(Error::file("<stdout>"));
    }
    fs::write(path, contents).map_err(Error::file(path))
}

fn run_extract(cmd: ExtractCmd) -> Result<Outcome, Error> {
    let manifest = Manifest::load(&cmd.manifest)?;
    let mut cfg = ExtractConfig::default();
    manifest.extract.apply(&mut cfg);
    config_file(cmd.config.as_deref())?.extract.apply(&mut cfg);
    cmd.flags.overrides().apply(&mut cfg);

    let batch = extract_batch(&manifest.volumes, cmd.format, &cfg, cmd.workers)?;
    for f in &batch.failures {
        eprintln!("voxph: skipped {}: {}", f.entry.path.display(), f.error);
    }
    write_output(&cmd.out, batch.table.to_csv_string().as_bytes())?;
    if let Some(dir) = &cmd.diagrams {
        fs::create_dir_all(dir).map_err(Error::file(dir))?;
        for (id, d) in batch.table.ids.iter().zip(&batch.diagrams) {
            let path = dir.join(format!("{id}.json"));
            fs::write(&path, diagram::to_json(d, cfg.direction)).map_err(Error::file(&path))?;
        }
    }
    if batch.failures.is_empty() {
        Ok(Outcome::Complete)
    } else {
        eprintln!(
            "voxph: {} of {} volumes failed",
            batch.failures.len(),
            manifest.volumes.len()
        );
        Ok(Outcome::Partial)
    }
}

fn run_classify(cmd: ClassifyCmd) -> Result<(), Error> {
    let file = config_file(cmd.config.as_deref())?;
    let mut cfg = file.classifier.unwrap_or_default();
    cfg.objective = match cmd.task {
        Task::Binary => Objective::BinaryLogistic,
        Task::ThreeClass => Objective::MulticlassSoftmax,
    };
    if let Some(v) = cmd.seed {
        cfg.seed = v;
    }
    if let Some(v) = cmd.n_estimators {
        cfg.n_estimators = v;
    }
    if let Some(v) = cmd.learning_rate {
        cfg.learning_rate = v;
    }
    if let Some(v) = cmd.max_depth {
        cfg.max_depth = v;
    }
    if let Some(v) = cmd.colsample_bytree {
        cfg.colsample_bytree = v;
    }
    if let Some(v) = cmd.selection {
        cfg.feature_selection = v;
    }
    if let Some(v) = cmd.split {
        cfg.split_mode = v;
    }
    let folds = cmd.folds.or(file.folds).unwrap_or(10);

    let text = fs::read(&cmd.features).map_err(Error::file(&cmd.features))?;
    let table = FeatureTable::read(text.as_slice())?;
    let ds = dataset_from_table(&table, cmd.task)?;
    if cmd.task == Task::Binary && ds.n_classes() != 2 {
        return Err(Error::Invalid(format!("binary task needs 2 classes, found {}", ds.n_classes())));
    }
    let report = classify(&ds, &cfg, folds, cmd.workers)?;

    fs::create_dir_all(&cmd.out).map_err(Error::file(&cmd.out))?;
    for (name, body) in [
        ("report.json", report_json(&report)),
        ("confusion.csv", confusion_csv(&report)),
        ("roc.csv", roc_csv(&report)),
    ] {
        let path = cmd.out.join(name);
        fs::write(&path, body).map_err(Error::file(&path))?;
    }
    Ok(())
}

fn run_synth(cmd: SynthCmd) -> Result<(), Error> {
    let mut cfg: SynthConfig = read_toml(&cmd.config)?;
    if let Some(seed) = cmd.seed {
        cfg.seed = seed;
    }
    write_dataset(&cfg, &cmd.out)?;
    Ok(())
}

fn run_diagram(cmd: DiagramCmd) -> Result<(), Error> {
    let mut cfg = ExtractConfig::default();
    config_file(cmd.config.as_deref())?.extract.apply(&mut cfg);
    cmd.flags.overrides().apply(&mut cfg);
    let vol = load_volume(&cmd.volume, cmd.format)?;
    let d = diagrams_of(&vol, &cfg)?;
    write_output(Path::new("-"), diagram::to_json(&d, cfg.direction).as_bytes())
}

//! `texent`: entropy-based GLCM texture analysis from the command line.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use texent_core::classifier::ClassifierKind;
use texent_core::dataset::{DEFAULT_DISTANCE, DEFAULT_SEED};
use texent_core::fbim::DEFAULT_DMAX;
use texent_core::glcm::DEFAULT_LEVELS;
use texent_core::measures::{MeasureKind, DEFAULT_ALPHA, DEFAULT_Q};
use texent_core::Error;

#[derive(Debug, Parser)]
#[command(
    name = "texent",
    version,
    about = "Non-extensive entropy texture analysis on gray-level co-occurrence matrices"
)]
struct Cli {
    /// Worker threads for per-tile and per-cell work (default: all cores).
    #[arg(long, global = true, value_name = "N")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Cut an image into non-overlapping square tiles named r{row}_c{col}.pgm.
    Tile(TileArgs),
    /// Write the co-occurrence matrix of one spacing vector as CSV.
    Glcm(GlcmArgs),
    /// Print the direction-averaged GLCM entropy of an image.
    Entropy(EntropyArgs),
    /// Compute a polar interaction map (8 angles x dmax distances).
    Fbim(FbimArgs),
    /// Train and evaluate a classifier on per-tile entropy features.
    Classify(ClassifyArgs),
    /// Run classification once per entropy measure and tabulate the results.
    Compare(CompareArgs),
}

#[derive(Debug, Args)]
struct TileArgs {
    /// Source PGM image.
    image: PathBuf,
    /// Tile side length in pixels.
    #[arg(long, default_value_t = 128)]
    size: usize,
    /// Output directory (created if missing).
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct GlcmOpts {
    /// Requantize to this many gray levels (1..=256) when the image differs.
    #[arg(long, default_value_t = DEFAULT_LEVELS)]
    levels: u16,
    /// Count each pair in both directions.
    #[arg(long)]
    symmetric: bool,
}

#[derive(Debug, Args)]
struct MeasureOpts {
    /// proposed | proposed-normalized | shannon | renyi | tsallis | palpal
    #[arg(long, default_value = "proposed", value_parser = parse_measure)]
    measure: MeasureKind,
    /// Renyi order.
    #[arg(long, default_value_t = DEFAULT_ALPHA)]
    alpha: f64,
    /// Tsallis index.
    #[arg(long, default_value_t = DEFAULT_Q)]
    q: f64,
}

#[derive(Debug, Args)]
struct DistanceOpts {
    /// Co-occurrence distance.
    #[arg(long, default_value_t = DEFAULT_DISTANCE)]
    dist: u32,
    /// Use one feature per distance in LO:HI (inclusive) instead of --dist.
    #[arg(long, value_name = "LO:HI", value_parser = parse_range)]
    drange: Option<(u32, u32)>,
}

#[derive(Debug, Args)]
struct GlcmArgs {
    image: PathBuf,
    #[arg(long, default_value_t = DEFAULT_DISTANCE)]
    dist: u32,
    /// Angle in degrees, a multiple of 45 below 360.
    #[arg(long, default_value_t = 0)]
    angle: u16,
    #[command(flatten)]
    glcm: GlcmOpts,
    /// Output CSV (default: standard output).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct EntropyArgs {
    image: PathBuf,
    #[command(flatten)]
    measure: MeasureOpts,
    #[command(flatten)]
    distance: DistanceOpts,
    /// Evaluate one direction instead of averaging 0, 45, 90 and 135 degrees.
    #[arg(long)]
    angle: Option<u16>,
    #[command(flatten)]
    glcm: GlcmOpts,
}

#[derive(Debug, Args)]
struct FbimArgs {
    image: PathBuf,
    /// proposed | proposed-normalized | shannon | renyi | tsallis | palpal | correlation
    #[arg(long, default_value = "proposed", value_parser = parse_feature)]
    feature: FeatureName,
    #[arg(long, default_value_t = DEFAULT_DMAX)]
    dmax: u32,
    #[arg(long, default_value_t = DEFAULT_ALPHA)]
    alpha: f64,
    #[arg(long, default_value_t = DEFAULT_Q)]
    q: f64,
    #[command(flatten)]
    glcm: GlcmOpts,
    /// Intensity-coded map as 8-bit PGM.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Map values as CSV (standard output when neither --out nor --csv is given).
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct DataOpts {
    /// Training directory of <class>/<tile>.pgm.
    #[arg(long, requires = "test", conflicts_with = "data")]
    train: Option<PathBuf>,
    /// Test directory of <class>/<tile>.pgm.
    #[arg(long, requires = "train")]
    test: Option<PathBuf>,
    /// Single directory split into halves per class with --seed.
    #[arg(long, required_unless_present = "train")]
    data: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Fraction of each class assigned to the first half.
    #[arg(long, default_value_t = 0.5)]
    fraction: f64,
    /// Average over N seeded splits (seeds seed, seed+1, ...); needs --data.
    #[arg(long, default_value_t = 1)]
    trials: usize,
    /// 1nn | centroid
    #[arg(long, default_value = "1nn", value_parser = parse_classifier)]
    classifier: ClassifierKind,
    #[command(flatten)]
    distance: DistanceOpts,
    #[command(flatten)]
    glcm: GlcmOpts,
    /// Report CSV (default: standard output).
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ClassifyArgs {
    #[command(flatten)]
    measure: MeasureOpts,
    #[command(flatten)]
    data: DataOpts,
}

#[derive(Debug, Args)]
struct CompareArgs {
    #[arg(long, default_value_t = DEFAULT_ALPHA)]
    alpha: f64,
    #[arg(long, default_value_t = DEFAULT_Q)]
    q: f64,
    #[command(flatten)]
    data: DataOpts,
}

#[derive(Debug, Clone, Copy)]
enum FeatureName {
    Measure(MeasureKind),
    Correlation,
}

fn parse_measure(s: &str) -> Result<MeasureKind, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_feature(s: &str) -> Result<FeatureName, String> {
    if s.eq_ignore_ascii_case("correlation") {
        Ok(FeatureName::Correlation)
    } else {
        parse_measure(s).map(FeatureName::Measure)
    }
}

fn parse_classifier(s: &str) -> Result<ClassifierKind, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_range(s: &str) -> Result<(u32, u32), String> {
    let (lo, hi) = s
        .split_once(':')
        .ok_or_else(|| format!("expected LO:HI, got '{s}'"))?;
    let lo: u32 = lo.trim().parse().map_err(|e| format!("'{lo}': {e}"))?;
    let hi: u32 = hi.trim().parse().map_err(|e| format!("'{hi}': {e}"))?;
    if lo == 0 || lo > hi {
        return Err(format!("need 1 <= LO <= HI, got {lo}:{hi}"));
    }
    Ok((lo, hi))
}

/// A failure with the flag or file it concerns (empty when the error
/// already names it).
#[derive(Debug)]
struct Failure {
    context: String,
    error: Error,
}

impl Failure {
    fn exit_code(&self) -> u8 {
        if self.error.is_io_or_parse() {
            2
        } else {
            1
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };

    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cli.threads {
        if n == 0 {
            eprintln!("texent: --threads: must be at least 1");
            return ExitCode::from(1);
        }
        pool = pool.num_threads(n);
    }
    let pool = match pool.build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("texent: --threads: {e}");
            return ExitCode::from(1);
        }
    };

    match pool.install(|| commands::run(cli.command)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            if f.context.is_empty() {
                eprintln!("texent: {}", f.error);
            } else {
                eprintln!("texent: {}: {}", f.context, f.error);
            }
            ExitCode::from(f.exit_code())
        }
    }
}

use std::fs;
use std::path::{Path, PathBuf};

use texent_core::classifier::comparison_csv;
use texent_core::dataset::{
    build_feature_set, load_class_dir, read_pgm_file, write_pgm_file, LabeledImage,
};
use texent_core::fbim::fbim_to_csv;
use texent_core::glcm::HALF_ANGLES;
use texent_core::measures::MeasureKind;
use texent_core::numfmt::sig15;
use texent_core::{
    compute_fbim, compute_glcm, fbim_to_image, folds, glcm_entropy, repeated_cross_validation,
    tile, AccuracyTable, EntropyMeasure, Error, Feature, FeatureSpec, GrayImage, LabeledFeatureSet,
    SpacingVector, SplitSpec,
};

use crate::{
    ClassifyArgs, Command, CompareArgs, DataOpts, DistanceOpts, EntropyArgs, Failure, FbimArgs,
    FeatureName, GlcmArgs, GlcmOpts, TileArgs,
};

type Outcome<T> = std::result::Result<T, Failure>;

trait Context<T> {
    fn context(self, what: impl AsRef<str>) -> Outcome<T>;

    /// For errors that already name their file.
    fn plain(self) -> Outcome<T>
    where
        Self: Sized,
    {
        self.context("")
    }
}

impl<T> Context<T> for texent_core::Result<T> {
    fn context(self, what: impl AsRef<str>) -> Outcome<T> {
        self.map_err(|error| Failure {
            context: what.as_ref().to_string(),
            error,
        })
    }
}

fn shown(path: &Path) -> String {
    path.display().to_string()
}

pub fn run(command: Command) -> Outcome<()> {
    match command {
        Command::Tile(a) => run_tile(a),
        Command::Glcm(a) => run_glcm(a),
        Command::Entropy(a) => run_entropy(a),
        Command::Fbim(a) => run_fbim(a),
        Command::Classify(a) => run_classify(a),
        Command::Compare(a) => run_compare(a),
    }
}

fn write_text(path: &Path, text: &str) -> Outcome<()> {
    fs::write(path, text)
        .map_err(|e| Error::io(path, e))
        .plain()
}

/// Writes to `path`, or standard output when absent.
fn emit(path: Option<&PathBuf>, text: &str) -> Outcome<()> {
    match path {
        Some(p) => write_text(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn measure_of(kind: MeasureKind, alpha: f64, q: f64) -> Outcome<EntropyMeasure> {
    match kind {
        MeasureKind::Proposed => Ok(EntropyMeasure::Proposed),
        MeasureKind::ProposedNormalized => Ok(EntropyMeasure::ProposedNormalized),
        MeasureKind::Shannon => Ok(EntropyMeasure::Shannon),
        MeasureKind::Renyi => EntropyMeasure::renyi(alpha).context("--alpha"),
        MeasureKind::Tsallis => EntropyMeasure::tsallis(q).context("--q"),
        MeasureKind::PalPal => Ok(EntropyMeasure::PalPal),
    }
}

fn check_levels(levels: u16) -> Outcome<()> {
    if (1..=256).contains(&levels) {
        Ok(())
    } else {
        Err(Failure {
            context: "--levels".into(),
            error: Error::Domain(format!("{levels} not in 1..=256")),
        })
    }
}

/// Loads an image and requantizes it to `opts.levels` when they differ.
fn load_image(path: &Path, opts: &GlcmOpts) -> Outcome<GrayImage> {
    check_levels(opts.levels)?;
    let img = read_pgm_file(path).plain()?;
    if img.levels() == opts.levels {
        Ok(img)
    } else {
        img.quantize(opts.levels).context("--levels")
    }
}

fn distances(opts: &DistanceOpts) -> Outcome<Vec<u32>> {
    let ds: Vec<u32> = match opts.drange {
        Some((lo, hi)) => (lo..=hi).collect(),
        None => vec![opts.dist],
    };
    let flag = if opts.drange.is_some() {
        "--drange"
    } else {
        "--dist"
    };
    for &d in &ds {
        SpacingVector::new(d, 0).context(flag)?;
    }
    Ok(ds)
}

fn run_tile(a: TileArgs) -> Outcome<()> {
    let img = read_pgm_file(&a.image).plain()?;
    let tiles = tile(&img, a.size).context("--size")?;
    fs::create_dir_all(&a.out)
        .map_err(|e| Error::io(&a.out, e))
        .plain()?;
    let cols = img.width() / a.size;
    for (k, t) in tiles.iter().enumerate() {
        let path = a.out.join(format!("r{}_c{}.pgm", k / cols, k % cols));
        write_pgm_file(&path, t).plain()?;
    }
    eprintln!("wrote {} tiles to {}", tiles.len(), a.out.display());
    Ok(())
}

fn run_glcm(a: GlcmArgs) -> Outcome<()> {
    let spacing = SpacingVector::new(a.dist, a.angle).context("--dist/--angle")?;
    let img = load_image(&a.image, &a.glcm)?;
    let g = compute_glcm(&img, spacing, a.glcm.symmetric).context(shown(&a.image))?;
    emit(a.out.as_ref(), &g.to_csv())
}

fn run_entropy(a: EntropyArgs) -> Outcome<()> {
    let measure = measure_of(a.measure.measure, a.measure.alpha, a.measure.q)?;
    let ds = distances(&a.distance)?;
    let angles: Vec<u16> = match a.angle {
        Some(t) => vec![t],
        None => HALF_ANGLES.to_vec(),
    };
    for &t in &angles {
        SpacingVector::new(1, t).context("--angle")?;
    }
    let img = load_image(&a.image, &a.glcm)?;
    let mut out = String::new();
    for d in ds {
        let mut sum = 0.0;
        for &t in &angles {
            let s = SpacingVector::new(d, t).context("--angle")?;
            let g = compute_glcm(&img, s, a.glcm.symmetric).context(shown(&a.image))?;
            sum += glcm_entropy(&g, measure).context(shown(&a.image))?;
        }
        out.push_str(&sig15(sum / angles.len() as f64));
        out.push('\n');
    }
    print!("{out}");
    Ok(())
}

fn run_fbim(a: FbimArgs) -> Outcome<()> {
    let feature = match a.feature {
        FeatureName::Correlation => Feature::Correlation,
        FeatureName::Measure(k) => Feature::Entropy(measure_of(k, a.alpha, a.q)?),
    };
    let img = load_image(&a.image, &a.glcm)?;
    let map = compute_fbim(&img, feature, a.dmax, a.glcm.symmetric).context("--dmax")?;
    if let Some(path) = &a.out {
        let coded = fbim_to_image(&map).context(shown(&a.image))?;
        write_pgm_file(path, &coded).plain()?;
    }
    if a.csv.is_some() || a.out.is_none() {
        emit(a.csv.as_ref(), &fbim_to_csv(&map))?;
    }
    Ok(())
}

/// Tiles loaded once and reused across measures.
enum Corpus {
    Fixed(Vec<LabeledImage>, Vec<LabeledImage>),
    Pooled(Vec<LabeledImage>),
}

fn load_dir(path: &Path) -> Outcome<Vec<LabeledImage>> {
    load_class_dir(path).plain()
}

fn load_corpus(d: &DataOpts) -> Outcome<(Corpus, SplitSpec)> {
    check_levels(d.glcm.levels)?;
    let split = SplitSpec::new(d.seed, d.fraction).context("--fraction")?;
    if d.trials == 0 {
        return Err(Failure {
            context: "--trials".into(),
            error: Error::Domain("must be at least 1".into()),
        });
    }
    let corpus = match (&d.train, &d.test, &d.data) {
        (Some(train), Some(test), _) => {
            if d.trials > 1 {
                return Err(Failure {
                    context: "--trials".into(),
                    error: Error::Domain("repeated trials need --data".into()),
                });
            }
            Corpus::Fixed(load_dir(train)?, load_dir(test)?)
        }
        (_, _, Some(data)) => Corpus::Pooled(load_dir(data)?),
        _ => unreachable!("clap requires --data or --train with --test"),
    };
    Ok((corpus, split))
}

fn feature_set(images: &[LabeledImage], spec: &FeatureSpec) -> Outcome<LabeledFeatureSet> {
    build_feature_set(images, spec).context("--dist/--drange")
}

fn accuracy(
    corpus: &Corpus,
    split: SplitSpec,
    d: &DataOpts,
    measure: EntropyMeasure,
) -> Outcome<AccuracyTable> {
    let spec = FeatureSpec {
        measure,
        distances: distances(&d.distance)?,
        symmetric: d.glcm.symmetric,
        levels: Some(d.glcm.levels),
    };
    match corpus {
        Corpus::Fixed(train, test) => {
            let a = feature_set(train, &spec)?;
            let b = feature_set(test, &spec)?;
            let fold = folds(&a, &b, d.classifier).context("classification")?;
            AccuracyTable::from_trials(&[fold]).context("classification")
        }
        Corpus::Pooled(all) => {
            let set = feature_set(all, &spec)?;
            repeated_cross_validation(&set, split, d.classifier, d.trials).context("classification")
        }
    }
}

fn run_classify(a: ClassifyArgs) -> Outcome<()> {
    let measure = measure_of(a.measure.measure, a.measure.alpha, a.measure.q)?;
    let (corpus, split) = load_corpus(&a.data)?;
    let table = accuracy(&corpus, split, &a.data, measure)?;
    eprintln!(
        "{measure}: validation {}, cross-validation {}",
        sig15(table.average_validation),
        sig15(table.average_cross_validation)
    );
    emit(a.data.report.as_ref(), &table.to_csv())
}

fn run_compare(a: CompareArgs) -> Outcome<()> {
    let measures = EntropyMeasure::comparison_set(a.alpha, a.q).context("--alpha/--q")?;
    let (corpus, split) = load_corpus(&a.data)?;
    let mut tables = Vec::with_capacity(measures.len());
    for m in measures {
        let t = accuracy(&corpus, split, &a.data, m)?;
        eprintln!(
            "{m}: validation {}, cross-validation {}",
            sig15(t.average_validation),
            sig15(t.average_cross_validation)
        );
        tables.push((m.name(), t));
    }
    let named: Vec<(&str, &AccuracyTable)> = tables.iter().map(|(n, t)| (*n, t)).collect();
    emit(a.data.report.as_ref(), &comparison_csv(&named))
}

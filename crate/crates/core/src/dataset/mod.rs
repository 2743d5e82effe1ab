//! Image I/O, tiling, per-tile features and train/test splitting.

pub mod features;
pub mod pgm;
pub mod split;

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

pub use features::{averaged_entropy, extract_feature, tile, FeatureSpec, DEFAULT_DISTANCE};
pub use pgm::{load_pgm, read_pgm_file, save_pgm, write_pgm_file};
pub use split::{split, SplitSpec, DEFAULT_SEED};

use crate::error::{Error, Result};
use crate::glcm::GrayImage;
use crate::numfmt::sig15;

/// One labeled feature vector.
#[derive(Debug, Clone, PartialEq)]
pub struct Record {
    pub label: String,
    /// Identifies the tile the features came from.
    pub source: String,
    pub features: Vec<f64>,
}

/// Records sharing one feature dimension.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct LabeledFeatureSet {
    records: Vec<Record>,
}

impl LabeledFeatureSet {
    pub fn new(records: Vec<Record>) -> Result<Self> {
        let mut set = LabeledFeatureSet::default();
        for r in records {
            set.push(r)?;
        }
        Ok(set)
    }

    pub fn push(&mut self, record: Record) -> Result<()> {
        if let Some(dim) = self.dim() {
            if record.features.len() != dim {
                return Err(Error::domain(format!(
                    "record '{}' has {} features, expected {dim}",
                    record.source,
                    record.features.len()
                )));
            }
        }
        if record.features.is_empty() {
            return Err(Error::domain(format!(
                "record '{}' has no features",
                record.source
            )));
        }
        self.records.push(record);
        Ok(())
    }

    pub fn records(&self) -> &[Record] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Feature dimension, or `None` for an empty set.
    pub fn dim(&self) -> Option<usize> {
        self.records.first().map(|r| r.features.len())
    }

    /// Distinct labels in ascending order.
    pub fn classes(&self) -> Vec<String> {
        self.records
            .iter()
            .map(|r| r.label.clone())
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect()
    }

    pub fn count_of(&self, label: &str) -> usize {
        self.records.iter().filter(|r| r.label == label).count()
    }

    /// Feature table CSV: `label,tile,f1,…,fk` with 15-significant-digit values.
    pub fn to_csv(&self) -> Result<String> {
        let dim = self.dim().unwrap_or(1);
        let mut out = String::from("label,tile");
        for k in 1..=dim {
            let _ = write!(out, ",f{k}");
        }
        out.push('\n');
        for r in &self.records {
            for field in [&r.label, &r.source] {
                if field.contains([',', '"', '\n', '\r']) {
                    return Err(Error::domain(format!(
                        "'{field}' cannot be written to the feature table (contains a separator)"
                    )));
                }
            }
            let _ = write!(out, "{},{}", r.label, r.source);
            for &v in &r.features {
                let _ = write!(out, ",{}", sig15(v));
            }
            out.push('\n');
        }
        Ok(out)
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::parse(0, "empty feature table"))?;
        if !header.starts_with("label,tile,") {
            return Err(Error::parse(
                0,
                "feature table header must start with 'label,tile,'",
            ));
        }
        let mut offset = header.len() + 1;
        let mut set = LabeledFeatureSet::default();
        for line in lines {
            if line.is_empty() {
                offset += 1;
                continue;
            }
            let mut fields = line.split(',');
            let label = fields.next().unwrap_or_default().to_string();
            let source = fields
                .next()
                .ok_or_else(|| Error::parse(offset, "row is missing the tile column"))?
                .to_string();
            let features = fields
                .map(|f| {
                    f.parse::<f64>()
                        .map_err(|e| Error::parse(offset, format!("bad feature '{f}': {e}")))
                })
                .collect::<Result<Vec<_>>>()?;
            set.push(Record {
                label,
                source,
                features,
            })
            .map_err(|e| Error::parse(offset, e.to_string()))?;
            offset += line.len() + 1;
        }
        Ok(set)
    }
}

/// A tile read from a class directory.
#[derive(Debug, Clone)]
pub struct LabeledImage {
    pub label: String,
    pub source: String,
    pub image: GrayImage,
}

fn sorted_entries(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut paths = fs::read_dir(dir)
        .map_err(|e| Error::io(dir, e))?
        .map(|e| e.map(|e| e.path()).map_err(|e| Error::io(dir, e)))
        .collect::<Result<Vec<_>>>()?;
    paths.sort();
    Ok(paths)
}

/// Loads `root/<label>/*.pgm`, with classes and files in name order.
pub fn load_class_dir(root: impl AsRef<Path>) -> Result<Vec<LabeledImage>> {
    let root = root.as_ref();
    let mut out = Vec::new();
    for class_dir in sorted_entries(root)? {
        if !class_dir.is_dir() {
            continue;
        }
        let label = class_dir
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_default();
        for file in sorted_entries(&class_dir)? {
            let is_pgm = file
                .extension()
                .is_some_and(|e| e.eq_ignore_ascii_case("pgm"));
            if !is_pgm || !file.is_file() {
                continue;
            }
            let source = file
                .file_stem()
                .map(|n| n.to_string_lossy().into_owned())
                .unwrap_or_default();
            out.push(LabeledImage {
                label: label.clone(),
                source,
                image: read_pgm_file(&file)?,
            });
        }
    }
    if out.is_empty() {
        return Err(Error::domain(format!(
            "{} holds no <class>/<tile>.pgm images",
            root.display()
        )));
    }
    Ok(out)
}

/// Extracts features for every image (in parallel) into a labeled set that
/// preserves input order.
pub fn build_feature_set(images: &[LabeledImage], spec: &FeatureSpec) -> Result<LabeledFeatureSet> {
    let pixels: Vec<GrayImage> = images.iter().map(|i| i.image.clone()).collect();
    let features = spec.extract_all(&pixels)?;
    LabeledFeatureSet::new(
        images
            .iter()
            .zip(features)
            .map(|(img, features)| Record {
                label: img.label.clone(),
                source: img.source.clone(),
                features,
            })
            .collect(),
    )
}

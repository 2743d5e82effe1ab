use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::glcm::{compute_glcm, glcm_entropy, GrayImage, SpacingVector, HALF_ANGLES};
use crate::measures::EntropyMeasure;

/// Default co-occurrence distance for the single-feature pipeline.
pub const DEFAULT_DISTANCE: u32 = 31;

/// Splits `img` into non-overlapping `size × size` tiles in row-major order.
pub fn tile(img: &GrayImage, size: usize) -> Result<Vec<GrayImage>> {
    if size == 0 {
        return Err(Error::domain("tile size must be positive"));
    }
    if img.width() % size != 0 || img.height() % size != 0 {
        return Err(Error::domain(format!(
            "{}x{} image is not divisible into {size}x{size} tiles",
            img.width(),
            img.height()
        )));
    }
    let mut tiles = Vec::with_capacity((img.width() / size) * (img.height() / size));
    for ty in (0..img.height()).step_by(size) {
        for tx in (0..img.width()).step_by(size) {
            tiles.push(img.crop(tx, ty, size, size)?);
        }
    }
    Ok(tiles)
}

/// Mean of the GLCM entropy over 0°, 45°, 90° and 135° at distance `d`.
pub fn averaged_entropy(
    img: &GrayImage,
    measure: EntropyMeasure,
    d: u32,
    symmetric: bool,
) -> Result<f64> {
    let mut sum = 0.0;
    for &theta in &HALF_ANGLES {
        let glcm = compute_glcm(img, SpacingVector::new(d, theta)?, symmetric)?;
        sum += glcm_entropy(&glcm, measure)?;
    }
    Ok(sum / HALF_ANGLES.len() as f64)
}

/// Single-element feature vector: the direction-averaged entropy at `d`.
pub fn extract_feature(
    img: &GrayImage,
    measure: EntropyMeasure,
    d: u32,
    symmetric: bool,
) -> Result<Vec<f64>> {
    Ok(vec![averaged_entropy(img, measure, d, symmetric)?])
}

/// How a tile is turned into a feature vector.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureSpec {
    pub measure: EntropyMeasure,
    /// One feature per distance, in the given order.
    pub distances: Vec<u32>,
    pub symmetric: bool,
    /// Requantize tiles to this many gray levels first.
    pub levels: Option<u16>,
}

impl FeatureSpec {
    pub fn single(measure: EntropyMeasure, d: u32) -> Self {
        FeatureSpec {
            measure,
            distances: vec![d],
            symmetric: false,
            levels: None,
        }
    }

    pub fn range(measure: EntropyMeasure, d_lo: u32, d_hi: u32) -> Self {
        FeatureSpec {
            measure,
            distances: (d_lo..=d_hi).collect(),
            symmetric: false,
            levels: None,
        }
    }

    pub fn extract(&self, img: &GrayImage) -> Result<Vec<f64>> {
        if self.distances.is_empty() {
            return Err(Error::domain("feature spec has no distances"));
        }
        let quantized;
        let img = match self.levels {
            Some(l) if l != img.levels() => {
                quantized = img.quantize(l)?;
                &quantized
            }
            _ => img,
        };
        self.distances
            .iter()
            .map(|&d| averaged_entropy(img, self.measure, d, self.symmetric))
            .collect()
    }

    /// Extracts features for every image in parallel; output order matches
    /// input order.
    pub fn extract_all(&self, images: &[GrayImage]) -> Result<Vec<Vec<f64>>> {
        images.par_iter().map(|img| self.extract(img)).collect()
    }
}

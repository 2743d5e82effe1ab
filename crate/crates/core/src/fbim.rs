//! Feature-based polar interaction maps.
//!
//! A map holds one texture feature evaluated on the co-occurrence matrix of
//! every spacing vector `(θ, d)` with `θ ∈ {0°, 45°, …, 315°}` (rows) and
//! `d ∈ 1..=d_max` (columns). Periodic structure shows up as extremum ridges
//! at multiples of the texture period.

use std::fmt::{self, Write as _};
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::glcm::{compute_glcm, correlation, glcm_entropy, GrayImage, SpacingVector, ANGLES};
use crate::measures::{EntropyMeasure, MeasureKind};
use crate::numfmt::sig15;

/// Default largest spacing magnitude.
pub const DEFAULT_DMAX: u32 = 31;

/// The feature plotted in an interaction map.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Feature {
    Entropy(EntropyMeasure),
    Correlation,
}

impl Feature {
    pub fn from_name(name: &str, alpha: f64, q: f64) -> Result<Self> {
        if name.eq_ignore_ascii_case("correlation") {
            return Ok(Feature::Correlation);
        }
        // Validate the kind first so an unknown name reports as such.
        MeasureKind::from_str(name)?;
        EntropyMeasure::from_name(name, alpha, q).map(Feature::Entropy)
    }

    pub fn name(&self) -> &'static str {
        match self {
            Feature::Entropy(m) => m.name(),
            Feature::Correlation => "correlation",
        }
    }

    /// Evaluates the feature for one spacing vector. `Ok(None)` marks a cell
    /// where the feature is undefined (zero-variance correlation).
    pub fn evaluate(
        &self,
        img: &GrayImage,
        spacing: SpacingVector,
        symmetric: bool,
    ) -> Result<Option<f64>> {
        let glcm = compute_glcm(img, spacing, symmetric)?;
        match self {
            Feature::Entropy(m) => glcm_entropy(&glcm, *m).map(Some),
            Feature::Correlation => match correlation(&glcm) {
                Ok(c) => Ok(Some(c)),
                Err(Error::DegenerateVariance { .. }) => Ok(None),
                Err(e) => Err(e),
            },
        }
    }
}

impl fmt::Display for Feature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Feature::Entropy(m) => m.fmt(f),
            Feature::Correlation => f.write_str("correlation"),
        }
    }
}

/// An `8 × d_max` grid of feature values; `None` marks undefined cells.
#[derive(Debug, Clone, PartialEq)]
pub struct Fbim {
    values: Vec<Option<f64>>,
    feature_name: String,
    d_max: u32,
}

impl Fbim {
    pub fn new(
        values: Vec<Option<f64>>,
        feature_name: impl Into<String>,
        d_max: u32,
    ) -> Result<Self> {
        if d_max == 0 {
            return Err(Error::domain("d_max must be >= 1"));
        }
        if values.len() != ANGLES.len() * d_max as usize {
            return Err(Error::domain(format!(
                "{} values do not form an 8x{d_max} map",
                values.len()
            )));
        }
        if values.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::domain("map values must be finite"));
        }
        Ok(Fbim {
            values,
            feature_name: feature_name.into(),
            d_max,
        })
    }

    pub fn d_max(&self) -> u32 {
        self.d_max
    }

    pub fn feature_name(&self) -> &str {
        &self.feature_name
    }

    pub fn values(&self) -> &[Option<f64>] {
        &self.values
    }

    /// Value at angle row `row` (0 ↦ 0°, 1 ↦ 45°, …) and distance `d`.
    pub fn get(&self, row: usize, d: u32) -> Option<f64> {
        assert!(row < ANGLES.len() && (1..=self.d_max).contains(&d));
        self.values[row * self.d_max as usize + (d - 1) as usize]
    }

    /// The row for angle row index `row`, indexed by `d - 1`.
    pub fn row(&self, row: usize) -> &[Option<f64>] {
        let w = self.d_max as usize;
        &self.values[row * w..(row + 1) * w]
    }
}

/// Evaluates `feature` over all eight angles and `d = 1..=d_max`.
///
/// Cells are independent and computed in parallel on the current rayon pool;
/// the result is assembled in index order and equals sequential evaluation.
pub fn compute_fbim(
    img: &GrayImage,
    feature: Feature,
    d_max: u32,
    symmetric: bool,
) -> Result<Fbim> {
    if d_max == 0 {
        return Err(Error::domain("d_max must be >= 1"));
    }
    let need = d_max as usize + 1;
    if img.width() < need || img.height() < need {
        return Err(Error::domain(format!(
            "{}x{} image too small for d_max={d_max} (needs at least {need}x{need})",
            img.width(),
            img.height()
        )));
    }
    let spacings: Vec<SpacingVector> = ANGLES
        .iter()
        .flat_map(|&t| (1..=d_max).map(move |d| SpacingVector::new(d, t)))
        .collect::<Result<_>>()?;
    let values = spacings
        .par_iter()
        .map(|&s| feature.evaluate(img, s, symmetric))
        .collect::<Result<Vec<_>>>()?;
    Fbim::new(values, feature.name(), d_max)
}

/// Intensity-codes a map as an `8 × d_max` (rows × columns) 8-bit image by
/// linear min-max scaling of the defined cells. Undefined cells become 0;
/// a map whose defined cells are all equal renders as mid-gray 128.
pub fn fbim_to_image(fbim: &Fbim) -> Result<GrayImage> {
    let defined = fbim.values().iter().flatten();
    let (lo, hi) = defined.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
        (lo.min(v), hi.max(v))
    });
    if lo > hi {
        return Err(Error::domain("every map cell is undefined"));
    }
    let span = hi - lo;
    let pixels = fbim
        .values()
        .iter()
        .map(|v| match v {
            None => 0,
            Some(_) if span == 0.0 => 128,
            Some(v) => ((v - lo) / span * 255.0).round() as u8,
        })
        .collect();
    GrayImage::from_u8(fbim.d_max() as usize, ANGLES.len(), pixels)
}

/// CSV with header `theta,1,…,d_max` and one row per angle. Undefined cells
/// are empty fields.
pub fn fbim_to_csv(fbim: &Fbim) -> String {
    let mut out = String::from("theta");
    for d in 1..=fbim.d_max() {
        let _ = write!(out, ",{d}");
    }
    out.push('\n');
    for (r, &theta) in ANGLES.iter().enumerate() {
        let _ = write!(out, "{theta}");
        for v in fbim.row(r) {
            out.push(',');
            if let Some(v) = v {
                out.push_str(&sig15(*v));
            }
        }
        out.push('\n');
    }
    out
}

/// Parses the output of [`fbim_to_csv`].
pub fn fbim_from_csv(text: &str, feature_name: &str) -> Result<Fbim> {
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::parse(0, "empty map CSV"))?;
    let d_max = header.split(',').count().saturating_sub(1) as u32;
    let mut values = Vec::new();
    let mut offset = header.len() + 1;
    for (r, line) in lines.enumerate() {
        let mut fields = line.split(',');
        let theta = fields.next().unwrap_or_default();
        if ANGLES.get(r).map(|a| a.to_string()) != Some(theta.to_string()) {
            return Err(Error::parse(
                offset,
                format!("unexpected angle '{theta}' in row {r}"),
            ));
        }
        let row: Vec<Option<f64>> = fields
            .map(|f| {
                if f.is_empty() {
                    Ok(None)
                } else {
                    f.parse::<f64>()
                        .map(Some)
                        .map_err(|e| Error::parse(offset, format!("bad value '{f}': {e}")))
                }
            })
            .collect::<Result<_>>()?;
        if row.len() != d_max as usize {
            return Err(Error::parse(
                offset,
                format!("row {r} has {} values", row.len()),
            ));
        }
        values.extend(row);
        offset += line.len() + 1;
    }
    Fbim::new(values, feature_name, d_max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synthetic;

    #[test]
    fn shape_is_eight_by_dmax() {
        let img = synthetic::uniform_noise(40, 40, 256, 3);
        let f = compute_fbim(&img, Feature::Entropy(EntropyMeasure::Proposed), 31, false).unwrap();
        assert_eq!(f.values().len(), 8 * 31);
        let pic = fbim_to_image(&f).unwrap();
        assert_eq!((pic.width(), pic.height()), (31, 8));
    }

    #[test]
    fn too_small_image_is_rejected() {
        let img = synthetic::uniform_noise(31, 64, 256, 3);
        assert!(matches!(
            compute_fbim(&img, Feature::Correlation, 31, false),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn constant_image_correlation_all_missing() {
        let img = GrayImage::from_fn(40, 40, 256, |_, _| 9).unwrap();
        let f = compute_fbim(&img, Feature::Correlation, 31, false).unwrap();
        assert!(f.values().iter().all(Option::is_none));
        assert!(fbim_to_image(&f).is_err());
    }

    #[test]
    fn intensity_coding() {
        let mut vals = vec![Some(0.25); 16];
        let f = Fbim::new(vals.clone(), "x", 2).unwrap();
        assert!(fbim_to_image(&f)
            .unwrap()
            .pixels()
            .iter()
            .all(|&p| p == 128));

        vals[3] = Some(1.0);
        vals[4] = None;
        vals[0] = Some(0.0);
        let f = Fbim::new(vals, "x", 2).unwrap();
        let img = fbim_to_image(&f).unwrap();
        assert_eq!(img.pixels()[0], 0);
        assert_eq!(img.pixels()[3], 255);
        assert_eq!(img.pixels()[4], 0);
        assert_eq!(img.pixels()[1], 64);
    }

    #[test]
    fn csv_layout_and_round_trip() {
        let mut vals: Vec<Option<f64>> = (0..16).map(|i| Some(1.0 / (i as f64 + 3.0))).collect();
        vals[5] = None;
        let f = Fbim::new(vals, "x", 2).unwrap();
        let csv = fbim_to_csv(&f);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 9);
        assert_eq!(lines[0], "theta,1,2");
        assert_eq!(lines[3], "90,0.142857142857143,");
        assert!(!csv.contains("NaN") && !csv.to_lowercase().contains("nan"));
        let back = fbim_from_csv(&csv, "x").unwrap();
        for (a, b) in f.values().iter().zip(back.values()) {
            match (a, b) {
                (Some(a), Some(b)) => assert!(((a - b) / a).abs() < 1e-14),
                (None, None) => {}
                _ => panic!("missing-cell mismatch"),
            }
        }
    }

    #[test]
    fn feature_names() {
        assert_eq!(
            Feature::from_name("correlation", 2.0, 2.0).unwrap(),
            Feature::Correlation
        );
        assert_eq!(
            Feature::from_name("tsallis", 2.0, 3.0).unwrap(),
            Feature::Entropy(EntropyMeasure::Tsallis { q: 3.0 })
        );
        assert!(Feature::from_name("contrast", 2.0, 2.0).is_err());
    }
}

//! Gray-level co-occurrence matrices.
//!
//! Angles follow Haralick's convention with image rows growing downward:
//! 0° points right, 90° points up (negative row offset), and diagonal
//! directions move `d` pixels along both axes.

use std::fmt::{self, Write as _};

use crate::error::{Error, Result};
use crate::measures::{apply_measure, EntropyMeasure, ProbDist};

/// Number of gray levels in an unquantized 8-bit image.
pub const DEFAULT_LEVELS: u16 = 256;

/// A single-channel image, row-major, with pixel values in `0..levels`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrayImage {
    width: usize,
    height: usize,
    levels: u16,
    pixels: Vec<u8>,
}

impl GrayImage {
    pub fn new(width: usize, height: usize, levels: u16, pixels: Vec<u8>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::domain(format!(
                "image size {width}x{height} must be positive"
            )));
        }
        if levels == 0 || levels > 256 {
            return Err(Error::domain(format!(
                "gray levels {levels} not in 1..=256"
            )));
        }
        if pixels.len() != width * height {
            return Err(Error::domain(format!(
                "{} pixels given for a {width}x{height} image",
                pixels.len()
            )));
        }
        if let Some(i) = pixels.iter().position(|&p| u16::from(p) >= levels) {
            return Err(Error::domain(format!(
                "pixel {} at index {i} exceeds level range 0..{levels}",
                pixels[i]
            )));
        }
        Ok(GrayImage {
            width,
            height,
            levels,
            pixels,
        })
    }

    /// An 8-bit image with the full 256 gray levels.
    pub fn from_u8(width: usize, height: usize, pixels: Vec<u8>) -> Result<Self> {
        GrayImage::new(width, height, DEFAULT_LEVELS, pixels)
    }

    pub fn from_fn(
        width: usize,
        height: usize,
        levels: u16,
        mut f: impl FnMut(usize, usize) -> u8,
    ) -> Result<Self> {
        let mut pixels = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                pixels.push(f(x, y));
            }
        }
        GrayImage::new(width, height, levels, pixels)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn levels(&self) -> u16 {
        self.levels
    }

    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> u8 {
        self.pixels[y * self.width + x]
    }

    /// Requantizes to `levels` bins by `v * levels / self.levels`.
    pub fn quantize(&self, levels: u16) -> Result<GrayImage> {
        if levels == 0 || levels > 256 {
            return Err(Error::domain(format!(
                "gray levels {levels} not in 1..=256"
            )));
        }
        let from = u32::from(self.levels);
        let to = u32::from(levels);
        let pixels = self
            .pixels
            .iter()
            .map(|&v| (u32::from(v) * to / from) as u8)
            .collect();
        GrayImage::new(self.width, self.height, levels, pixels)
    }

    /// Copies the `w × h` window whose top-left corner is `(x0, y0)`.
    pub fn crop(&self, x0: usize, y0: usize, w: usize, h: usize) -> Result<GrayImage> {
        if x0 + w > self.width || y0 + h > self.height {
            return Err(Error::domain(format!(
                "crop {w}x{h}+{x0}+{y0} exceeds {}x{} image",
                self.width, self.height
            )));
        }
        let mut pixels = Vec::with_capacity(w * h);
        for y in y0..y0 + h {
            let start = y * self.width + x0;
            pixels.extend_from_slice(&self.pixels[start..start + w]);
        }
        GrayImage::new(w, h, self.levels, pixels)
    }
}

/// The eight co-occurrence directions at 45° resolution.
pub const ANGLES: [u16; 8] = [0, 45, 90, 135, 180, 225, 270, 315];

/// The four directions averaged for a rotation-tolerant feature.
pub const HALF_ANGLES: [u16; 4] = [0, 45, 90, 135];

/// Displacement between the two pixels of a co-occurrence pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SpacingVector {
    d: u32,
    theta: u16,
}

impl SpacingVector {
    pub fn new(d: u32, theta: u16) -> Result<Self> {
        if d == 0 {
            return Err(Error::domain("spacing distance must be >= 1"));
        }
        if !ANGLES.contains(&theta) {
            return Err(Error::domain(format!(
                "angle {theta} is not a multiple of 45 in 0..=315"
            )));
        }
        Ok(SpacingVector { d, theta })
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn theta(&self) -> u16 {
        self.theta
    }

    /// The spacing pointing the opposite way.
    pub fn reversed(&self) -> SpacingVector {
        SpacingVector {
            d: self.d,
            theta: (self.theta + 180) % 360,
        }
    }
}

impl fmt::Display for SpacingVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "d={} theta={}", self.d, self.theta)
    }
}

/// Pixel offset `(dx, dy)` for a spacing vector; `dy` grows downward.
pub fn offset_of(spacing: SpacingVector) -> (i64, i64) {
    let d = i64::from(spacing.d);
    let (dx, dy) = match spacing.theta % 180 {
        0 => (d, 0),
        45 => (d, -d),
        90 => (0, -d),
        135 => (-d, -d),
        _ => unreachable!("validated angle"),
    };
    if spacing.theta >= 180 {
        (-dx, -dy)
    } else {
        (dx, dy)
    }
}

/// Half-open range of start coordinates along one axis whose partner,
/// shifted by `delta`, stays inside `0..len`.
fn valid_range(len: usize, delta: i64) -> std::ops::Range<usize> {
    let len = len as i64;
    let lo = (-delta).max(0);
    let hi = (len - delta).min(len);
    if lo >= hi {
        0..0
    } else {
        lo as usize..hi as usize
    }
}

/// An `L × L` co-occurrence count matrix for one spacing vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Glcm {
    levels: usize,
    counts: Vec<u64>,
    spacing: SpacingVector,
    symmetric: bool,
    total: u64,
}

impl Glcm {
    /// Wraps a precomputed count matrix.
    pub fn from_counts(
        levels: usize,
        counts: Vec<u64>,
        spacing: SpacingVector,
        symmetric: bool,
    ) -> Result<Self> {
        if levels == 0 || counts.len() != levels * levels {
            return Err(Error::domain(format!(
                "{} counts do not form a {levels}x{levels} matrix",
                counts.len()
            )));
        }
        let total = counts.iter().sum();
        Ok(Glcm {
            levels,
            counts,
            spacing,
            symmetric,
            total,
        })
    }

    pub fn levels(&self) -> usize {
        self.levels
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    #[inline]
    pub fn count(&self, i: usize, j: usize) -> u64 {
        self.counts[i * self.levels + j]
    }

    pub fn spacing(&self) -> SpacingVector {
        self.spacing
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    fn ensure_nonempty(&self) -> Result<()> {
        if self.total == 0 {
            return Err(Error::EmptyGlcm {
                d: self.spacing.d,
                theta: u32::from(self.spacing.theta),
            });
        }
        Ok(())
    }

    /// CSV with one row per reference level `i` and `L` count columns.
    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(self.levels * self.levels * 2);
        out.push('i');
        for j in 0..self.levels {
            let _ = write!(out, ",{j}");
        }
        out.push('\n');
        for (i, row) in self.counts.chunks_exact(self.levels).enumerate() {
            let _ = write!(out, "{i}");
            for c in row {
                let _ = write!(out, ",{c}");
            }
            out.push('\n');
        }
        out
    }
}

/// Counts ordered gray-level pairs `(img(p), img(p + offset))` over every
/// position `p` with both pixels in bounds. With `symmetric`, the reversed
/// pair is counted as well.
pub fn compute_glcm(img: &GrayImage, spacing: SpacingVector, symmetric: bool) -> Result<Glcm> {
    let levels = usize::from(img.levels());
    let (dx, dy) = offset_of(spacing);
    let xs = valid_range(img.width(), dx);
    let ys = valid_range(img.height(), dy);
    if xs.is_empty() || ys.is_empty() {
        return Err(Error::EmptyGlcm {
            d: spacing.d,
            theta: u32::from(spacing.theta),
        });
    }

    let mut counts = vec![0u64; levels * levels];
    let w = img.width();
    let px = img.pixels();
    for y in ys {
        let y2 = (y as i64 + dy) as usize;
        let row = &px[y * w..(y + 1) * w];
        let row2 = &px[y2 * w..(y2 + 1) * w];
        let x2_start = (xs.start as i64 + dx) as usize;
        let span = xs.len();
        for (&a, &b) in row[xs.start..xs.start + span]
            .iter()
            .zip(&row2[x2_start..x2_start + span])
        {
            let (a, b) = (usize::from(a), usize::from(b));
            counts[a * levels + b] += 1;
            if symmetric {
                counts[b * levels + a] += 1;
            }
        }
    }
    Glcm::from_counts(levels, counts, spacing, symmetric)
}

/// Co-occurrence probabilities: counts divided by their total, flattened
/// row-major into `L²` outcomes with zero cells kept.
pub fn glcp(glcm: &Glcm) -> Result<ProbDist> {
    glcm.ensure_nonempty()?;
    ProbDist::from_counts(glcm.counts())
}

/// Haralick correlation `Σ (i-μx)(j-μy) f_ij / (σx σy)` of the normalized
/// matrix, where `x` indexes rows and `y` columns.
pub fn correlation(glcm: &Glcm) -> Result<f64> {
    glcm.ensure_nonempty()?;
    let levels = glcm.levels();
    let total = glcm.total() as f64;

    let mut row_mass = vec![0u64; levels];
    let mut col_mass = vec![0u64; levels];
    for (i, row) in glcm.counts().chunks_exact(levels).enumerate() {
        for (j, &c) in row.iter().enumerate() {
            row_mass[i] += c;
            col_mass[j] += c;
        }
    }
    let support = |m: &[u64]| m.iter().filter(|&&c| c > 0).count();

    let moments = |mass: &[u64]| {
        let mean: f64 = mass
            .iter()
            .enumerate()
            .map(|(k, &c)| k as f64 * (c as f64 / total))
            .sum();
        let var: f64 = mass
            .iter()
            .enumerate()
            .map(|(k, &c)| (k as f64 - mean).powi(2) * (c as f64 / total))
            .sum();
        (mean, var.sqrt())
    };
    let (mu_x, sigma_x) = moments(&row_mass);
    let (mu_y, sigma_y) = moments(&col_mass);
    // A single occupied level means zero variance; test the support rather
    // than the float so rounding cannot fake a tiny nonzero sigma.
    if support(&row_mass) < 2 || support(&col_mass) < 2 {
        return Err(Error::DegenerateVariance { sigma_x, sigma_y });
    }

    let mut cov = 0.0;
    for i in 0..levels {
        let di = i as f64 - mu_x;
        for j in 0..levels {
            let c = glcm.count(i, j);
            if c == 0 {
                continue;
            }
            cov += di * (j as f64 - mu_y) * (c as f64 / total);
        }
    }
    Ok(cov / (sigma_x * sigma_y))
}

/// Entropy `measure` of the co-occurrence probabilities.
pub fn glcm_entropy(glcm: &Glcm, measure: EntropyMeasure) -> Result<f64> {
    apply_measure(measure, &glcp(glcm)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::E_INV;

    fn sv(d: u32, theta: u16) -> SpacingVector {
        SpacingVector::new(d, theta).unwrap()
    }

    fn stripes(w: usize, h: usize) -> GrayImage {
        GrayImage::from_fn(w, h, 2, |x, _| (x % 2) as u8).unwrap()
    }

    #[test]
    fn offsets() {
        assert_eq!(offset_of(sv(1, 0)), (1, 0));
        assert_eq!(offset_of(sv(2, 90)), (0, -2));
        assert_eq!(offset_of(sv(3, 225)), (-3, 3));
        assert_eq!(offset_of(sv(1, 45)), (1, -1));
        assert_eq!(offset_of(sv(1, 135)), (-1, -1));
        assert_eq!(offset_of(sv(4, 180)), (-4, 0));
        assert_eq!(offset_of(sv(4, 270)), (0, 4));
        assert_eq!(offset_of(sv(4, 315)), (4, 4));
        for &t in &ANGLES {
            let (dx, dy) = offset_of(sv(5, t));
            assert_eq!(offset_of(sv(5, t).reversed()), (-dx, -dy));
        }
    }

    #[test]
    fn spacing_validation() {
        assert!(SpacingVector::new(0, 0).is_err());
        assert!(SpacingVector::new(1, 30).is_err());
        assert!(SpacingVector::new(1, 360).is_err());
    }

    #[test]
    fn image_validation() {
        assert!(GrayImage::new(2, 2, 2, vec![0, 1, 2, 0]).is_err());
        assert!(GrayImage::new(2, 2, 256, vec![0, 1, 2]).is_err());
        assert!(GrayImage::new(0, 2, 256, vec![]).is_err());
        assert!(GrayImage::new(1, 1, 257, vec![0]).is_err());
    }

    #[test]
    fn two_by_two_hand_count() {
        let img = GrayImage::new(2, 2, 2, vec![0, 1, 0, 1]).unwrap();
        let g = compute_glcm(&img, sv(1, 0), false).unwrap();
        assert_eq!(g.counts(), &[0, 2, 0, 0]);
        assert_eq!(g.total(), 2);
        assert_eq!(glcp(&g).unwrap().probs(), &[0.0, 1.0, 0.0, 0.0]);
    }

    #[test]
    fn constant_image_has_single_cell() {
        let img = GrayImage::from_fn(9, 7, 256, |_, _| 77).unwrap();
        for &t in &ANGLES {
            let g = compute_glcm(&img, sv(2, t), false).unwrap();
            assert_eq!(g.count(77, 77), g.total());
            let p = glcp(&g).unwrap();
            assert_eq!(p.probs().iter().filter(|&&v| v > 0.0).count(), 1);
            assert_eq!(glcm_entropy(&g, EntropyMeasure::Proposed).unwrap(), E_INV);
            assert_eq!(
                glcm_entropy(&g, EntropyMeasure::ProposedNormalized).unwrap(),
                0.0
            );
            assert!(matches!(
                correlation(&g),
                Err(Error::DegenerateVariance { .. })
            ));
        }
    }

    #[test]
    fn out_of_range_spacing_is_empty() {
        let img = stripes(4, 4);
        assert!(matches!(
            compute_glcm(&img, sv(4, 0), false),
            Err(Error::EmptyGlcm { d: 4, theta: 0 })
        ));
        assert!(compute_glcm(&img, sv(3, 45), false).is_ok());
        assert!(compute_glcm(&img, sv(4, 90), false).is_err());
    }

    #[test]
    fn stripe_correlation_endpoints() {
        let img = stripes(16, 16);
        let c1 = correlation(&compute_glcm(&img, sv(1, 0), false).unwrap()).unwrap();
        let c2 = correlation(&compute_glcm(&img, sv(2, 0), false).unwrap()).unwrap();
        assert!((c1 + 1.0).abs() <= 1e-9, "{c1}");
        assert!((c2 - 1.0).abs() <= 1e-9, "{c2}");
    }

    #[test]
    fn uniform_glcp_normalizes_to_one() {
        let levels = 4;
        let counts = vec![3u64; levels * levels];
        let g = Glcm::from_counts(levels, counts, sv(1, 0), false).unwrap();
        let h = glcm_entropy(&g, EntropyMeasure::ProposedNormalized).unwrap();
        assert!((h - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn empty_counts_rejected_by_glcp() {
        let g = Glcm::from_counts(2, vec![0; 4], sv(1, 0), false).unwrap();
        assert!(matches!(glcp(&g), Err(Error::EmptyGlcm { .. })));
        assert!(correlation(&g).is_err());
    }

    #[test]
    fn quantize_and_crop() {
        let img = GrayImage::from_fn(4, 2, 256, |x, y| (x * 64 + y) as u8).unwrap();
        let q = img.quantize(4).unwrap();
        assert_eq!(q.pixels(), &[0, 1, 2, 3, 0, 1, 2, 3]);
        let c = img.crop(1, 1, 2, 1).unwrap();
        assert_eq!(c.pixels(), &[65, 129]);
        assert!(img.crop(3, 0, 2, 1).is_err());
    }

    #[test]
    fn csv_layout() {
        let img = GrayImage::new(2, 2, 2, vec![0, 1, 0, 1]).unwrap();
        let g = compute_glcm(&img, sv(1, 0), false).unwrap();
        assert_eq!(g.to_csv(), "i,0,1\n0,0,2\n1,0,0\n");
    }
}

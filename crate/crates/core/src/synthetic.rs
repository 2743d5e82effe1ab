//! Deterministic synthetic textures for tests, benchmarks and demos.

use rand::Rng;
use rand::SeedableRng;
use rand_xoshiro::SplitMix64;

use crate::glcm::GrayImage;

/// Vertical stripes: columns with `x mod period < on_width` are `high`, the
/// rest `low`.
pub fn vertical_stripes(
    width: usize,
    height: usize,
    period: usize,
    on_width: usize,
    low: u8,
    high: u8,
) -> GrayImage {
    assert!(period > 0, "stripe period must be positive");
    GrayImage::from_fn(width, height, 256, |x, _| {
        if x % period < on_width {
            high
        } else {
            low
        }
    })
    .expect("stripe parameters produce a valid image")
}

/// Checkerboard of `cell × cell` squares, so the pattern period is `2 * cell`.
pub fn checkerboard(width: usize, height: usize, cell: usize, low: u8, high: u8) -> GrayImage {
    assert!(cell > 0, "checker cell must be positive");
    GrayImage::from_fn(width, height, 256, |x, y| {
        if (x / cell + y / cell) % 2 == 0 {
            low
        } else {
            high
        }
    })
    .expect("checkerboard parameters produce a valid image")
}

/// Independent uniform gray levels in `0..levels`.
pub fn uniform_noise(width: usize, height: usize, levels: u16, seed: u64) -> GrayImage {
    let mut rng = SplitMix64::seed_from_u64(seed);
    GrayImage::from_fn(width, height, levels, |_, _| {
        rng.random_range(0..levels) as u8
    })
    .expect("noise parameters produce a valid image")
}

/// Adds independent uniform integer noise in `-amplitude..=amplitude` to every
/// pixel, clamped to the image's level range.
pub fn jitter(img: &GrayImage, amplitude: u8, seed: u64) -> GrayImage {
    let mut rng = SplitMix64::seed_from_u64(seed);
    let top = i32::from(img.levels()) - 1;
    let a = i32::from(amplitude);
    let pixels = img
        .pixels()
        .iter()
        .map(|&p| (i32::from(p) + rng.random_range(-a..=a)).clamp(0, top) as u8)
        .collect();
    GrayImage::new(img.width(), img.height(), img.levels(), pixels)
        .expect("clamped pixels stay in range")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stripes_and_checkers() {
        let s = vertical_stripes(8, 2, 4, 1, 0, 255);
        assert_eq!(&s.pixels()[..8], &[255, 0, 0, 0, 255, 0, 0, 0]);
        assert_eq!(&s.pixels()[8..], &s.pixels()[..8]);
        let c = checkerboard(4, 2, 1, 0, 9);
        assert_eq!(c.pixels(), &[0, 9, 0, 9, 9, 0, 9, 0]);
    }

    #[test]
    fn noise_is_seeded() {
        assert_eq!(uniform_noise(16, 16, 256, 7), uniform_noise(16, 16, 256, 7));
        assert_ne!(uniform_noise(16, 16, 256, 7), uniform_noise(16, 16, 256, 8));
        let j = jitter(&vertical_stripes(8, 8, 2, 1, 0, 255), 3, 1);
        assert!(j.pixels().iter().all(|&p| p <= 3 || p >= 252));
    }
}

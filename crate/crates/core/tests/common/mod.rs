#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_xoshiro::SplitMix64;
use texent_core::{GrayImage, JointDist, ProbDist};

pub fn rng(seed: u64) -> SplitMix64 {
    SplitMix64::seed_from_u64(seed)
}

/// Random weights drawn from one of several shapes so the suites see flat,
/// peaked and sparse distributions alike.
pub fn random_weights(rng: &mut SplitMix64, n: usize) -> Vec<f64> {
    let shape = rng.random_range(0..4);
    let mut w: Vec<f64> = (0..n)
        .map(|_| {
            let u: f64 = rng.random_range(f64::EPSILON..1.0);
            match shape {
                // Exponential weights: uniform on the simplex.
                0 => -u.ln(),
                // Heavy concentration on a few outcomes.
                1 => u.powi(8),
                // Roughly half the outcomes impossible.
                2 => {
                    if rng.random_bool(0.5) {
                        0.0
                    } else {
                        -u.ln()
                    }
                }
                _ => u,
            }
        })
        .collect();
    if w.iter().all(|&x| x == 0.0) {
        let k = rng.random_range(0..n);
        w[k] = 1.0;
    }
    w
}

pub fn random_dist(rng: &mut SplitMix64, n: usize) -> ProbDist {
    ProbDist::normalize(&random_weights(rng, n)).unwrap()
}

pub fn random_joint(rng: &mut SplitMix64, max_side: usize) -> JointDist {
    let rows = rng.random_range(1..=max_side);
    let cols = rng.random_range(1..=max_side);
    let cells = ProbDist::normalize(&random_weights(rng, rows * cols)).unwrap();
    JointDist::new(rows, cols, cells.into_inner()).unwrap()
}

pub fn random_image(rng: &mut SplitMix64, max_side: usize) -> GrayImage {
    let w = rng.random_range(1..=max_side);
    let h = rng.random_range(1..=max_side);
    let levels: u16 = *[2u16, 4, 8, 16, 256].get(rng.random_range(0..5)).unwrap();
    GrayImage::from_fn(w, h, levels, |_, _| rng.random_range(0..levels) as u8).unwrap()
}

/// Independent co-occurrence counter: derives the offset from the angle's
/// unit vector (y axis pointing up, so the row offset is negated) and walks
/// every pixel position.
pub fn brute_force_glcm(img: &GrayImage, d: u32, theta: u16, symmetric: bool) -> Vec<u64> {
    let rad = f64::from(theta).to_radians();
    let dx = rad.cos().round() as i64 * i64::from(d);
    let dy = -(rad.sin().round() as i64) * i64::from(d);
    let l = usize::from(img.levels());
    let mut counts = vec![0u64; l * l];
    for y in 0..img.height() as i64 {
        for x in 0..img.width() as i64 {
            let (x2, y2) = (x + dx, y + dy);
            if x2 < 0 || y2 < 0 || x2 >= img.width() as i64 || y2 >= img.height() as i64 {
                continue;
            }
            let a = usize::from(img.get(x as usize, y as usize));
            let b = usize::from(img.get(x2 as usize, y2 as usize));
            counts[a * l + b] += 1;
            if symmetric {
                counts[b * l + a] += 1;
            }
        }
    }
    counts
}

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;
use texent_core::dataset::FeatureSpec;
use texent_core::*;

fn bench_glcm(c: &mut Criterion) {
    let img = synthetic::uniform_noise(128, 128, 256, 1);
    let mut g = c.benchmark_group("glcm");
    for d in [1u32, 31] {
        let s = SpacingVector::new(d, 45).unwrap();
        g.bench_with_input(BenchmarkId::new("count_128", d), &s, |b, &s| {
            b.iter(|| compute_glcm(black_box(&img), s, false).unwrap())
        });
    }
    let glcm = compute_glcm(&img, SpacingVector::new(1, 0).unwrap(), false).unwrap();
    g.bench_function("correlation_256", |b| {
        b.iter(|| correlation(black_box(&glcm)).unwrap())
    });
    g.finish();
}

fn bench_entropy(c: &mut Criterion) {
    let img = synthetic::uniform_noise(128, 128, 256, 2);
    let glcm = compute_glcm(&img, SpacingVector::new(1, 0).unwrap(), false).unwrap();
    let p = glcp(&glcm).unwrap();
    let mut g = c.benchmark_group("entropy_65536");
    for m in EntropyMeasure::comparison_set(2.0, 2.0).unwrap() {
        g.bench_function(m.name(), |b| {
            b.iter(|| apply_measure(m, black_box(&p)).unwrap())
        });
    }
    g.finish();

    let tiles: Vec<GrayImage> = tile(&synthetic::uniform_noise(512, 512, 256, 3), 128).unwrap();
    let spec = FeatureSpec::single(EntropyMeasure::ProposedNormalized, 31);
    c.bench_function("features_16_tiles_d31", |b| {
        b.iter(|| spec.extract_all(black_box(&tiles)).unwrap())
    });
}

fn bench_fbim(c: &mut Criterion) {
    let img = synthetic::uniform_noise(128, 128, 256, 4);
    let mut g = c.benchmark_group("fbim_128");
    g.sample_size(10);
    for (name, f) in [
        ("proposed", Feature::Entropy(EntropyMeasure::Proposed)),
        ("correlation", Feature::Correlation),
    ] {
        g.bench_function(name, |b| {
            b.iter(|| compute_fbim(black_box(&img), f, 31, false).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, bench_glcm, bench_entropy, bench_fbim);
criterion_main!(benches);

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use latpoly::mds::mds_embed;
use latpoly::mlkit::{train_mlp, Architecture, Dataset, ForestConfig, RandomForest, Task, TrainConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn synthetic(n: usize, dim: usize, seed: u64) -> Dataset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let features: Vec<Vec<f64>> = (0..n).map(|_| (0..dim).map(|_| rng.random_range(-3.0..3.0)).collect()).collect();
    let labels = features.iter().map(|x| x.iter().map(|v: &f64| v.abs()).sum()).collect();
    Dataset::new(features, labels).unwrap()
}

fn learning(c: &mut Criterion) {
    let data = synthetic(1000, 10, 1);
    let mut group = c.benchmark_group("learning");
    group.sample_size(10);
    group.bench_function("mlp_polygon_one_epoch", |b| {
        let config = TrainConfig { epochs: 1, ..TrainConfig::polygon(0) };
        b.iter(|| train_mlp(black_box(&data), &Architecture::polygon(), Task::Regression, &config, None).unwrap())
    });
    let classes: Vec<f64> = data.labels.iter().map(|&y| f64::from(u8::from(y > 15.0))).collect();
    let labeled = Dataset::new(data.features.clone(), classes).unwrap();
    group.bench_function("forest_70_trees", |b| {
        b.iter(|| RandomForest::fit(black_box(&labeled), &ForestConfig::default()).unwrap())
    });
    let points = &data.features[..200];
    group.bench_function("mds_200_points", |b| b.iter(|| mds_embed(black_box(points), 2, 300, 1e-9, 0).unwrap()));
    group.finish();
}

criterion_group!(benches, learning);
criterion_main!(benches);

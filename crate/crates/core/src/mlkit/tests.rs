use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::mlp::Adam;
use super::*;

fn toy_regression(n: usize, seed: u64) -> Dataset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut f = Vec::new();
    let mut l = Vec::new();
    for _ in 0..n {
        let x: Vec<f64> = (0..3).map(|_| rng.random_range(-2.0..2.0)).collect();
        l.push(3.0 * x[0] - 2.0 * x[1] + x[2] * x[2] + 10.0);
        f.push(x);
    }
    Dataset::new(f, l).unwrap()
}

fn finite_difference_error(model: &MlpModel, xs: &[&[f64]], ys: &[f64], loss: Loss) -> f64 {
    let (_, grad) = model.loss_and_gradient(xs, ys, loss);
    let base = model.parameters();
    let h = 1e-6;
    let mut worst: f64 = 0.0;
    let mut m = model.clone();
    // losses are evaluated in the scaled target space the gradient refers to
    let ys_scaled: Vec<f64> = match model.target_scaler {
        Some((mean, s)) => ys.iter().map(|y| (y - mean) / s).collect(),
        None => ys.to_vec(),
    };
    m.target_scaler = None;
    for i in 0..base.len() {
        let mut p = base.clone();
        p[i] += h;
        m.set_parameters(&p);
        let up = m.loss_and_gradient(xs, &ys_scaled, loss).0;
        p[i] -= 2.0 * h;
        m.set_parameters(&p);
        let down = m.loss_and_gradient(xs, &ys_scaled, loss).0;
        let numeric = (up - down) / (2.0 * h);
        let rel = (numeric - grad[i]).abs() / numeric.abs().max(grad[i].abs()).max(1.0);
        worst = worst.max(rel);
    }
    worst
}

#[test]
fn gradients_match_finite_differences() {
    let data = toy_regression(6, 1);
    let xs: Vec<&[f64]> = data.features.iter().map(Vec::as_slice).collect();
    let arch = Architecture { hidden: vec![5, 4], alpha: 0.01 };
    for loss in [Loss::LogCosh, Loss::Mse] {
        let model = MlpModel::new(3, &arch, Task::Regression, 7).unwrap();
        assert!(finite_difference_error(&model, &xs, &data.labels, loss) < 1e-4, "{loss}");
    }
    let labels: Vec<f64> = data.labels.iter().map(|&y| f64::from(y > 10.0)).collect();
    let model = MlpModel::new(3, &arch, Task::Classification, 7).unwrap();
    assert!(finite_difference_error(&model, &xs, &labels, Loss::CrossEntropy) < 1e-4);
}

#[test]
fn training_is_deterministic_and_learns() {
    let data = toy_regression(400, 2);
    let arch = Architecture { hidden: vec![32, 32], alpha: 0.01 };
    let config = TrainConfig { epochs: 60, ..TrainConfig::polygon(42) };
    let (a, log_a) = train_mlp(&data, &arch, Task::Regression, &config, None).unwrap();
    let (b, log_b) = train_mlp(&data, &arch, Task::Regression, &config, None).unwrap();
    assert_eq!(a, b);
    assert_eq!(log_a, log_b);
    assert_eq!(log_a.len(), 60);
    assert!(log_a.last().unwrap().train_loss < 0.2 * log_a[0].train_loss);
    let test = toy_regression(100, 3);
    let pred = a.predict_many(&test.features).unwrap();
    assert!(metrics::mae(&pred, &test.labels) < 1.0);
    let (c, _) = train_mlp(&data, &arch, Task::Regression, &TrainConfig { seed: 43, ..config }, None).unwrap();
    assert_ne!(a, c);
}

#[test]
fn adam_zero_gradient_is_a_no_op() {
    let mut p = vec![0.3, -1.2, 5.0];
    let before = p.clone();
    let mut adam = Adam::new(AdamConfig::default(), 3);
    adam.step(&mut p, &[0.0; 3]);
    assert_eq!(p, before);
    let mut adam = Adam::new(AdamConfig::default(), 3);
    adam.step(&mut p, &[1.0, -1.0, 0.0]);
    // first real step moves each parameter by about the learning rate
    assert!((p[0] - (0.3 - 1e-3)).abs() < 1e-9);
    assert!((p[1] - (-1.2 + 1e-3)).abs() < 1e-9);
}

#[test]
fn fine_tune_zero_epochs_and_shapes() {
    let data = toy_regression(50, 4);
    let arch = Architecture { hidden: vec![8], alpha: 0.01 };
    let config = TrainConfig { epochs: 2, ..TrainConfig::polytope(1) };
    let (m, _) = train_mlp(&data, &arch, Task::Regression, &config, None).unwrap();
    let (same, log) = fine_tune(&m, &data, &TrainConfig { epochs: 0, ..config.clone() }, None).unwrap();
    assert_eq!(same, m);
    assert!(log.is_empty());
    let (tuned, _) = fine_tune(&m, &data, &config, Some(&data)).unwrap();
    assert_ne!(tuned, m);
    assert!(matches!(m.predict(&[1.0, 2.0]), Err(crate::Error::ShapeMismatch { expected: 3, got: 2 })));
    let wide = Dataset::new(vec![vec![0.0; 4]], vec![1.0]).unwrap();
    assert!(fine_tune(&m, &wide, &config, None).is_err());
}

#[test]
fn divergence_is_reported() {
    let data = toy_regression(50, 5);
    let arch = Architecture { hidden: vec![8], alpha: 0.01 };
    let mut config = TrainConfig { epochs: 5, standardize: false, ..TrainConfig::polytope(1) };
    config.adam.learning_rate = 1e300;
    assert!(matches!(train_mlp(&data, &arch, Task::Regression, &config, None), Err(crate::Error::Diverged { .. })));
}

#[test]
fn classifier_separates() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut f = Vec::new();
    let mut l = Vec::new();
    for _ in 0..300 {
        let x: Vec<f64> = (0..2).map(|_| rng.random_range(-1.0..1.0)).collect();
        l.push(f64::from(x[0] + x[1] > 0.0));
        f.push(x);
    }
    let data = Dataset::new(f, l).unwrap();
    let config = TrainConfig { loss: Loss::CrossEntropy, epochs: 30, ..TrainConfig::polytope(3) };
    let (m, _) = train_mlp(&data, &Architecture::polytope(), Task::Classification, &config, None).unwrap();
    let pred: Vec<usize> = data.features.iter().map(|x| m.predict_class(x).unwrap()).collect();
    assert!(metrics::classification_accuracy(&pred, &data.labels).unwrap() > 0.95);
    let bad = TrainConfig { loss: Loss::Mse, ..config };
    assert!(train_mlp(&data, &Architecture::polytope(), Task::Classification, &bad, None).is_err());
}

#[test]
fn model_round_trips_exactly() {
    let data = toy_regression(30, 6);
    let (m, _) = train_mlp(
        &data,
        &Architecture { hidden: vec![6], alpha: 0.01 },
        Task::Regression,
        &TrainConfig { epochs: 3, ..TrainConfig::polygon(0) },
        None,
    )
    .unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("model.json");
    m.save(&path).unwrap();
    let back = MlpModel::load(&path).unwrap();
    assert_eq!(back, m);
    for x in &data.features {
        assert_eq!(back.predict(x).unwrap().to_bits(), m.predict(x).unwrap().to_bits());
    }
}

#[test]
fn architecture_parsing() {
    assert_eq!("polygon".parse::<Architecture>().unwrap(), Architecture::polygon());
    let a: Architecture = "custom:10,5@0.1".parse().unwrap();
    assert_eq!(a.hidden, vec![10, 5]);
    assert_eq!(a.alpha, 0.1);
    assert!("custom:0".parse::<Architecture>().is_err());
    assert!("big".parse::<Architecture>().is_err());
}

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::dataset::Dataset;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Task {
    /// Single linear output.
    Regression,
    /// Two outputs with softmax; labels are 0 or 1.
    Classification,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Loss {
    LogCosh,
    Mse,
    /// Softmax cross-entropy, classification only.
    CrossEntropy,
}

impl FromStr for Loss {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "logcosh" => Ok(Loss::LogCosh),
            "mse" => Ok(Loss::Mse),
            "crossentropy" | "xent" => Ok(Loss::CrossEntropy),
            _ => Err(Error::Config(format!("unknown loss {s:?}"))),
        }
    }
}

impl fmt::Display for Loss {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Loss::LogCosh => "logcosh",
            Loss::Mse => "mse",
            Loss::CrossEntropy => "crossentropy",
        })
    }
}

/// `log(cosh(e))`, stable for large `|e|`.
pub fn logcosh(e: f64) -> f64 {
    let a = e.abs();
    a + (-2.0 * a).exp().ln_1p() - std::f64::consts::LN_2
}

pub fn leaky_relu(x: f64, alpha: f64) -> f64 {
    if x >= 0.0 {
        x
    } else {
        alpha * x
    }
}

impl Loss {
    /// Loss of a single residual `e = prediction - target`.
    pub fn value(&self, e: f64) -> f64 {
        match self {
            Loss::LogCosh => logcosh(e),
            Loss::Mse | Loss::CrossEntropy => e * e,
        }
    }

    fn derivative(&self, e: f64) -> f64 {
        match self {
            Loss::LogCosh => e.tanh(),
            Loss::Mse | Loss::CrossEntropy => 2.0 * e,
        }
    }
}

/// Hidden layer widths and leaky-ReLU slope.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Architecture {
    pub hidden: Vec<usize>,
    pub alpha: f64,
}

impl Architecture {
    /// Four hidden layers of 64, slope 0.01.
    pub fn polygon() -> Self {
        Self { hidden: vec![64; 4], alpha: 0.01 }
    }

    /// One hidden layer of 100, slope 1e-5.
    pub fn polytope() -> Self {
        Self { hidden: vec![100], alpha: 1e-5 }
    }
}

impl FromStr for Architecture {
    type Err = Error;

    /// `polygon`, `polytope`, or `custom:W1,W2,...[@alpha]`.
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "polygon" => Ok(Self::polygon()),
            "polytope" => Ok(Self::polytope()),
            _ => {
                let spec =
                    s.strip_prefix("custom:").ok_or_else(|| Error::Config(format!("unknown architecture {s:?}")))?;
                let (widths, alpha) = match spec.split_once('@') {
                    Some((w, a)) => (w, a.parse().map_err(|_| Error::Config(format!("bad slope in {s:?}")))?),
                    None => (spec, 0.01),
                };
                let hidden = widths
                    .split(',')
                    .filter(|w| !w.is_empty())
                    .map(|w| w.trim().parse::<usize>().map_err(|_| Error::Config(format!("bad width in {s:?}"))))
                    .collect::<Result<Vec<_>>>()?;
                if hidden.contains(&0) {
                    return Err(Error::Config("layer widths must be positive".into()));
                }
                Ok(Self { hidden, alpha })
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AdamConfig {
    pub learning_rate: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub epsilon: f64,
}

impl Default for AdamConfig {
    fn default() -> Self {
        Self { learning_rate: 1e-3, beta1: 0.9, beta2: 0.999, epsilon: 1e-8 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    pub batch_size: usize,
    pub epochs: usize,
    pub loss: Loss,
    pub adam: AdamConfig,
    pub seed: u64,
    /// Fit per-feature and target standardization on the training data.
    pub standardize: bool,
}

impl TrainConfig {
    pub fn polygon(seed: u64) -> Self {
        Self { batch_size: 32, epochs: 20, loss: Loss::LogCosh, adam: AdamConfig::default(), seed, standardize: true }
    }

    pub fn polytope(seed: u64) -> Self {
        Self { batch_size: 16, epochs: 20, loss: Loss::Mse, adam: AdamConfig::default(), seed, standardize: true }
    }

    fn validate(&self, task: Task) -> Result<()> {
        if self.batch_size == 0 || self.epochs == 0 {
            return Err(Error::Config("batch size and epochs must be at least 1".into()));
        }
        if (task == Task::Classification) != (self.loss == Loss::CrossEntropy) {
            return Err(Error::Config(format!("loss {} does not fit {task:?}", self.loss)));
        }
        Ok(())
    }
}

/// Dense layer computing `W x + b`, weights stored row-major (`outputs x inputs`).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Layer {
    pub inputs: usize,
    pub outputs: usize,
    pub weights: Vec<f64>,
    pub bias: Vec<f64>,
}

impl Layer {
    fn glorot(inputs: usize, outputs: usize, rng: &mut ChaCha8Rng) -> Self {
        let limit = (6.0 / (inputs + outputs) as f64).sqrt();
        let weights = (0..inputs * outputs).map(|_| rng.random_range(-limit..limit)).collect();
        Self { inputs, outputs, weights, bias: vec![0.0; outputs] }
    }

    fn forward(&self, x: &[f64], out: &mut Vec<f64>) {
        out.clear();
        for o in 0..self.outputs {
            let row = &self.weights[o * self.inputs..(o + 1) * self.inputs];
            out.push(row.iter().zip(x).map(|(w, v)| w * v).sum::<f64>() + self.bias[o]);
        }
    }
}

/// Affine standardization `(x - mean) / scale`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Scaler {
    pub mean: Vec<f64>,
    pub scale: Vec<f64>,
}

impl Scaler {
    fn fit(rows: &[&[f64]]) -> Self {
        let n = rows.len() as f64;
        let dim = rows[0].len();
        let mut mean = vec![0.0; dim];
        for r in rows {
            for (m, x) in mean.iter_mut().zip(r.iter()) {
                *m += x / n;
            }
        }
        let mut var = vec![0.0; dim];
        for r in rows {
            for ((v, x), m) in var.iter_mut().zip(r.iter()).zip(&mean) {
                *v += (x - m) * (x - m) / n;
            }
        }
        let scale = var.into_iter().map(|v| if v > 1e-12 { v.sqrt() } else { 1.0 }).collect();
        Self { mean, scale }
    }

    fn apply(&self, x: &[f64]) -> Vec<f64> {
        x.iter().zip(&self.mean).zip(&self.scale).map(|((x, m), s)| (x - m) / s).collect()
    }
}

/// Feed-forward network with leaky-ReLU hidden layers.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MlpModel {
    pub task: Task,
    pub alpha: f64,
    pub layers: Vec<Layer>,
    pub input_scaler: Option<Scaler>,
    pub target_scaler: Option<(f64, f64)>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EpochLog {
    pub epoch: usize,
    pub train_loss: f64,
    pub val_loss: Option<f64>,
}

pub(crate) struct Adam {
    config: AdamConfig,
    m: Vec<f64>,
    v: Vec<f64>,
    t: i32,
}

impl Adam {
    pub(crate) fn new(config: AdamConfig, n: usize) -> Self {
        Self { config, m: vec![0.0; n], v: vec![0.0; n], t: 0 }
    }

    pub(crate) fn step(&mut self, params: &mut [f64], grad: &[f64]) {
        let AdamConfig { learning_rate, beta1, beta2, epsilon } = self.config;
        self.t += 1;
        let c1 = 1.0 - beta1.powi(self.t);
        let c2 = 1.0 - beta2.powi(self.t);
        for i in 0..params.len() {
            self.m[i] = beta1 * self.m[i] + (1.0 - beta1) * grad[i];
            self.v[i] = beta2 * self.v[i] + (1.0 - beta2) * grad[i] * grad[i];
            let m_hat = self.m[i] / c1;
            let v_hat = self.v[i] / c2;
            params[i] -= learning_rate * m_hat / (v_hat.sqrt() + epsilon);
        }
    }
}

impl MlpModel {
    /// Randomly initialized network (uniform Glorot weights, zero biases).
    pub fn new(inputs: usize, arch: &Architecture, task: Task, seed: u64) -> Result<Self> {
        if inputs == 0 {
            return Err(Error::Config("network needs at least one input".into()));
        }
        if arch.alpha <= 0.0 {
            return Err(Error::Config("leaky-ReLU slope must be positive".into()));
        }
        let outputs = match task {
            Task::Regression => 1,
            Task::Classification => 2,
        };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut sizes = vec![inputs];
        sizes.extend(&arch.hidden);
        sizes.push(outputs);
        let layers = sizes.windows(2).map(|w| Layer::glorot(w[0], w[1], &mut rng)).collect();
        Ok(Self { task, alpha: arch.alpha, layers, input_scaler: None, target_scaler: None })
    }

    pub fn input_len(&self) -> usize {
        self.layers[0].inputs
    }

    pub fn num_parameters(&self) -> usize {
        self.layers.iter().map(|l| l.weights.len() + l.bias.len()).sum()
    }

    /// All weights and biases, layer by layer.
    pub fn parameters(&self) -> Vec<f64> {
        self.layers.iter().flat_map(|l| l.weights.iter().chain(&l.bias).copied()).collect()
    }

    pub fn set_parameters(&mut self, params: &[f64]) {
        let mut it = params.iter().copied();
        for l in &mut self.layers {
            for w in l.weights.iter_mut().chain(l.bias.iter_mut()) {
                *w = it.next().expect("parameter count");
            }
        }
    }

    fn check_len(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.input_len() {
            return Err(Error::ShapeMismatch { expected: self.input_len(), got: x.len() });
        }
        Ok(())
    }

    /// Raw outputs of the last layer for an already-scaled input, keeping
    /// every pre-activation and activation for backpropagation.
    fn forward_trace(&self, x: &[f64]) -> (Vec<Vec<f64>>, Vec<Vec<f64>>) {
        let mut acts = vec![x.to_vec()];
        let mut pre = Vec::with_capacity(self.layers.len());
        let last = self.layers.len() - 1;
        for (i, layer) in self.layers.iter().enumerate() {
            let mut z = Vec::with_capacity(layer.outputs);
            layer.forward(acts.last().expect("input"), &mut z);
            let a = if i == last { z.clone() } else { z.iter().map(|&v| leaky_relu(v, self.alpha)).collect() };
            pre.push(z);
            acts.push(a);
        }
        (pre, acts)
    }

    fn scaled_input(&self, x: &[f64]) -> Vec<f64> {
        match &self.input_scaler {
            Some(s) => s.apply(x),
            None => x.to_vec(),
        }
    }

    fn raw_output(&self, x: &[f64]) -> Vec<f64> {
        let mut a = self.scaled_input(x);
        let mut z = Vec::new();
        let last = self.layers.len() - 1;
        for (i, layer) in self.layers.iter().enumerate() {
            layer.forward(&a, &mut z);
            if i != last {
                for v in &mut z {
                    *v = leaky_relu(*v, self.alpha);
                }
            }
            std::mem::swap(&mut a, &mut z);
        }
        a
    }

    /// Regression prediction in label units.
    pub fn predict(&self, x: &[f64]) -> Result<f64> {
        self.check_len(x)?;
        if self.task != Task::Regression {
            return Err(Error::Config("predict needs a regression model".into()));
        }
        let y = self.raw_output(x)[0];
        Ok(match self.target_scaler {
            Some((mean, scale)) => y * scale + mean,
            None => y,
        })
    }

    /// Class probabilities `[p0, p1]` of a classifier.
    pub fn predict_proba(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check_len(x)?;
        if self.task != Task::Classification {
            return Err(Error::Config("predict_proba needs a classification model".into()));
        }
        Ok(softmax(&self.raw_output(x)))
    }

    /// Class 1 iff its probability is at least 0.5.
    pub fn predict_class(&self, x: &[f64]) -> Result<usize> {
        Ok(usize::from(self.predict_proba(x)?[1] >= 0.5))
    }

    /// Predictions for many rows: label units for regression, class-1
    /// probability for classification.
    pub fn predict_many(&self, rows: &[Vec<f64>]) -> Result<Vec<f64>> {
        rows.iter()
            .map(|x| match self.task {
                Task::Regression => self.predict(x),
                Task::Classification => Ok(self.predict_proba(x)?[1]),
            })
            .collect()
    }

    fn scaled_target(&self, y: f64) -> f64 {
        match self.target_scaler {
            Some((mean, scale)) => (y - mean) / scale,
            None => y,
        }
    }

    /// Mean loss over `(x, y)` pairs and its gradient with respect to
    /// [`MlpModel::parameters`], both measured against the scaled targets.
    pub fn loss_and_gradient(&self, xs: &[&[f64]], ys: &[f64], loss: Loss) -> (f64, Vec<f64>) {
        let mut grad = vec![0.0; self.num_parameters()];
        let mut total = 0.0;
        for (x, &y) in xs.iter().zip(ys) {
            total += self.accumulate(&self.scaled_input(x), self.scaled_target(y), y, loss, &mut grad);
        }
        let n = xs.len() as f64;
        grad.iter_mut().for_each(|g| *g /= n);
        (total / n, grad)
    }

    /// Adds one sample's gradient to `grad` and returns its loss.
    fn accumulate(&self, x: &[f64], y_scaled: f64, y: f64, loss: Loss, grad: &mut [f64]) -> f64 {
        let (pre, acts) = self.forward_trace(x);
        let out = acts.last().expect("output");
        let (value, mut delta) = match self.task {
            Task::Regression => {
                let e = out[0] - y_scaled;
                (loss.value(e), vec![loss.derivative(e)])
            }
            Task::Classification => {
                let p = softmax(out);
                let class = usize::from(y >= 0.5);
                let d: Vec<f64> = (0..p.len()).map(|k| p[k] - if k == class { 1.0 } else { 0.0 }).collect();
                (-(p[class].max(1e-300)).ln(), d)
            }
        };
        // Offsets of each layer's parameters in the flat vector.
        let mut offsets = Vec::with_capacity(self.layers.len());
        let mut off = 0;
        for l in &self.layers {
            offsets.push(off);
            off += l.weights.len() + l.bias.len();
        }
        for li in (0..self.layers.len()).rev() {
            let layer = &self.layers[li];
            let input = &acts[li];
            let base = offsets[li];
            for o in 0..layer.outputs {
                let d = delta[o];
                if d != 0.0 {
                    let row = &mut grad[base + o * layer.inputs..base + (o + 1) * layer.inputs];
                    for (g, a) in row.iter_mut().zip(input) {
                        *g += d * a;
                    }
                }
                grad[base + layer.weights.len() + o] += d;
            }
            if li > 0 {
                let z = &pre[li - 1];
                let mut next = vec![0.0; layer.inputs];
                for (&d, row) in delta.iter().zip(layer.weights.chunks(layer.inputs)) {
                    if d == 0.0 {
                        continue;
                    }
                    for (n, w) in next.iter_mut().zip(row) {
                        *n += d * w;
                    }
                }
                for (n, &zv) in next.iter_mut().zip(z) {
                    if zv < 0.0 {
                        *n *= self.alpha;
                    }
                }
                delta = next;
            }
        }
        value
    }

    /// Mean loss over a dataset, in label units for regression.
    pub fn mean_loss(&self, data: &Dataset, loss: Loss) -> Result<f64> {
        let mut total = 0.0;
        for (x, &y) in data.features.iter().zip(&data.labels) {
            total += match self.task {
                Task::Regression => loss.value(self.predict(x)? - y),
                Task::Classification => {
                    let p = self.predict_proba(x)?;
                    -(p[usize::from(y >= 0.5)].max(1e-300)).ln()
                }
            };
        }
        Ok(total / data.len() as f64)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let text = serde_json::to_string_pretty(self).map_err(|e| Error::Internal(e.to_string()))?;
        std::fs::write(path, text)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        serde_json::from_str(&text).map_err(|e| Error::Parse { line: e.line(), msg: e.to_string() })
    }
}

fn softmax(z: &[f64]) -> Vec<f64> {
    let m = z.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let e: Vec<f64> = z.iter().map(|v| (v - m).exp()).collect();
    let s: f64 = e.iter().sum();
    e.into_iter().map(|v| v / s).collect()
}

const SHUFFLE_STREAM: u64 = 0x9e37_79b9_7f4a_7c15;

/// Trains a fresh network. Returns the model and one log entry per epoch.
pub fn train_mlp(
    data: &Dataset,
    arch: &Architecture,
    task: Task,
    config: &TrainConfig,
    validation: Option<&Dataset>,
) -> Result<(MlpModel, Vec<EpochLog>)> {
    let mut model = MlpModel::new(data.dim(), arch, task, config.seed)?;
    if config.standardize {
        let rows: Vec<&[f64]> = data.features.iter().map(Vec::as_slice).collect();
        model.input_scaler = Some(Scaler::fit(&rows));
        if task == Task::Regression {
            let n = data.len() as f64;
            let mean = data.labels.iter().sum::<f64>() / n;
            let var = data.labels.iter().map(|y| (y - mean) * (y - mean)).sum::<f64>() / n;
            model.target_scaler = Some((mean, if var > 1e-12 { var.sqrt() } else { 1.0 }));
        }
    }
    let log = fit(&mut model, data, config, validation)?;
    Ok((model, log))
}

/// Continues training from the model's current weights with fresh
/// optimizer moments; the model's scalers are kept.
pub fn fine_tune(
    model: &MlpModel,
    data: &Dataset,
    config: &TrainConfig,
    validation: Option<&Dataset>,
) -> Result<(MlpModel, Vec<EpochLog>)> {
    let mut model = model.clone();
    if data.dim() != model.input_len() {
        return Err(Error::ShapeMismatch { expected: model.input_len(), got: data.dim() });
    }
    if config.epochs == 0 {
        return Ok((model, Vec::new()));
    }
    let log = fit(&mut model, data, config, validation)?;
    Ok((model, log))
}

fn fit(
    model: &mut MlpModel,
    data: &Dataset,
    config: &TrainConfig,
    validation: Option<&Dataset>,
) -> Result<Vec<EpochLog>> {
    config.validate(model.task)?;
    if data.dim() != model.input_len() {
        return Err(Error::ShapeMismatch { expected: model.input_len(), got: data.dim() });
    }
    let xs: Vec<Vec<f64>> = data.features.iter().map(|x| model.scaled_input(x)).collect();
    let ys: Vec<f64> = data.labels.iter().map(|&y| model.scaled_target(y)).collect();
    let mut params = model.parameters();
    let mut adam = Adam::new(config.adam, params.len());
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed ^ SHUFFLE_STREAM);
    let mut order: Vec<usize> = (0..data.len()).collect();
    let mut grad = vec![0.0; params.len()];
    let mut log = Vec::with_capacity(config.epochs);
    for epoch in 1..=config.epochs {
        order.shuffle(&mut rng);
        for batch in order.chunks(config.batch_size) {
            grad.iter_mut().for_each(|g| *g = 0.0);
            for &i in batch {
                model.accumulate(&xs[i], ys[i], data.labels[i], config.loss, &mut grad);
            }
            let n = batch.len() as f64;
            grad.iter_mut().for_each(|g| *g /= n);
            adam.step(&mut params, &grad);
            model.set_parameters(&params);
        }
        let train_loss = model.mean_loss(data, config.loss)?;
        if !train_loss.is_finite() || params.iter().any(|p| !p.is_finite()) {
            return Err(Error::Diverged { epoch });
        }
        let val_loss = validation.map(|v| model.mean_loss(v, config.loss)).transpose()?;
        log::debug!("epoch {epoch}: train {train_loss:.6} val {val_loss:?}");
        log.push(EpochLog { epoch, train_loss, val_loss });
    }
    Ok(log)
}

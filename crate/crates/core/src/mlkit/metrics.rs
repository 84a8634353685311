use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::mlp::logcosh;
use crate::error::{Error, Result};

/// Half-width of an accuracy bin centred on the true value.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Bin {
    /// Fixed half-width in label units.
    Absolute(f64),
    /// Fraction of the label range `max - min`.
    RangeFraction(f64),
}

impl Bin {
    pub fn half_width(&self, label_range: f64) -> f64 {
        match *self {
            Bin::Absolute(h) => h,
            Bin::RangeFraction(f) => f * label_range,
        }
    }
}

impl fmt::Display for Bin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bin::Absolute(h) => write!(f, "{h}"),
            Bin::RangeFraction(r) => write!(f, "{r}range"),
        }
    }
}

impl FromStr for Bin {
    type Err = Error;

    /// `0.5` is an absolute half-width, `0.05range` a fraction of the range.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Config(format!("bad bin {s:?}"));
        let (num, ctor): (&str, fn(f64) -> Bin) = match s.strip_suffix("range") {
            Some(n) => (n, Bin::RangeFraction),
            None => (s, Bin::Absolute),
        };
        let v: f64 = num.trim().parse().map_err(|_| bad())?;
        if !(v >= 0.0 && v.is_finite()) {
            return Err(bad());
        }
        Ok(ctor(v))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BinAccuracy {
    pub bin: Bin,
    pub half_width: f64,
    pub accuracy: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegressionMetrics {
    pub n: usize,
    pub mae: f64,
    /// Over rows with a nonzero true value; `None` if there are none.
    pub mape: Option<f64>,
    pub mse: f64,
    pub logcosh: f64,
    pub accuracies: Vec<BinAccuracy>,
    pub pmcc: f64,
    /// Set when either vector has zero variance and `pmcc` was reported as 0.
    pub pmcc_degenerate: bool,
}

fn check(pred: &[f64], truth: &[f64]) -> Result<()> {
    if pred.len() != truth.len() {
        return Err(Error::ShapeMismatch { expected: truth.len(), got: pred.len() });
    }
    if truth.is_empty() {
        return Err(Error::Config("no predictions to evaluate".into()));
    }
    Ok(())
}

pub fn mae(pred: &[f64], truth: &[f64]) -> f64 {
    pred.iter().zip(truth).map(|(p, t)| (p - t).abs()).sum::<f64>() / truth.len() as f64
}

pub fn mse(pred: &[f64], truth: &[f64]) -> f64 {
    pred.iter().zip(truth).map(|(p, t)| (p - t) * (p - t)).sum::<f64>() / truth.len() as f64
}

pub fn mape(pred: &[f64], truth: &[f64]) -> Option<f64> {
    let terms: Vec<f64> =
        pred.iter().zip(truth).filter(|(_, t)| **t != 0.0).map(|(p, t)| ((p - t) / t).abs()).collect();
    (!terms.is_empty()).then(|| 100.0 * terms.iter().sum::<f64>() / terms.len() as f64)
}

/// Fraction of predictions with `|pred - truth| <= half_width`.
pub fn bin_accuracy(pred: &[f64], truth: &[f64], half_width: f64) -> f64 {
    let hits = pred.iter().zip(truth).filter(|(p, t)| (*p - *t).abs() <= half_width + 1e-12).count();
    hits as f64 / truth.len() as f64
}

/// Pearson correlation; `(0, true)` when either side has zero variance.
pub fn pmcc(x: &[f64], y: &[f64]) -> (f64, bool) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx) * (a - mx);
        syy += (b - my) * (b - my);
    }
    if sxx <= 1e-300 || syy <= 1e-300 {
        return (0.0, true);
    }
    ((sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0), false)
}

/// All regression metrics. Range-relative bins use the range of `truth`.
pub fn evaluate_regression(pred: &[f64], truth: &[f64], bins: &[Bin]) -> Result<RegressionMetrics> {
    check(pred, truth)?;
    let (lo, hi) = truth.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &y| (lo.min(y), hi.max(y)));
    let accuracies = bins
        .iter()
        .map(|&bin| {
            let half_width = bin.half_width(hi - lo);
            BinAccuracy { bin, half_width, accuracy: bin_accuracy(pred, truth, half_width) }
        })
        .collect();
    let (r, degenerate) = pmcc(pred, truth);
    Ok(RegressionMetrics {
        n: truth.len(),
        mae: mae(pred, truth),
        mape: mape(pred, truth),
        mse: mse(pred, truth),
        logcosh: pred.iter().zip(truth).map(|(p, t)| logcosh(p - t)).sum::<f64>() / truth.len() as f64,
        accuracies,
        pmcc: r,
        pmcc_degenerate: degenerate,
    })
}

/// Fraction of matching 0/1 labels.
pub fn classification_accuracy(pred: &[usize], truth: &[f64]) -> Result<f64> {
    if pred.len() != truth.len() {
        return Err(Error::ShapeMismatch { expected: truth.len(), got: pred.len() });
    }
    if truth.is_empty() {
        return Err(Error::Config("no predictions to evaluate".into()));
    }
    let hits = pred.iter().zip(truth).filter(|(p, t)| **p == usize::from(**t >= 0.5)).count();
    Ok(hits as f64 / truth.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_metrics() {
        let truth = [1.0, 2.0, 0.0, 4.0];
        let pred = [1.5, 2.0, 1.0, 3.0];
        let m = evaluate_regression(&pred, &truth, &[Bin::Absolute(0.5), Bin::RangeFraction(0.1)]).unwrap();
        assert!((m.mae - 0.625).abs() < 1e-12);
        assert!((m.mse - (0.25 + 1.0 + 1.0) / 4.0).abs() < 1e-12);
        // zero true value skipped
        assert!((m.mape.unwrap() - 100.0 * (0.5 + 0.0 + 0.25) / 3.0).abs() < 1e-9);
        assert_eq!(m.accuracies[0].accuracy, 0.5);
        assert!((m.accuracies[1].half_width - 0.4).abs() < 1e-12);
        assert_eq!(m.accuracies[1].accuracy, 0.25);
        assert!(!m.pmcc_degenerate);
    }

    #[test]
    fn degenerate_pmcc() {
        assert_eq!(pmcc(&[1.0, 1.0, 1.0], &[1.0, 2.0, 3.0]), (0.0, true));
        let (r, d) = pmcc(&[1.0, 2.0, 3.0], &[2.0, 4.0, 6.0]);
        assert!((r - 1.0).abs() < 1e-12 && !d);
        assert_eq!(mape(&[1.0], &[0.0]), None);
    }

    #[test]
    fn bin_parsing() {
        assert_eq!("0.5".parse::<Bin>().unwrap(), Bin::Absolute(0.5));
        assert_eq!("0.05range".parse::<Bin>().unwrap(), Bin::RangeFraction(0.05));
        assert_eq!(Bin::RangeFraction(0.05).to_string().parse::<Bin>().unwrap(), Bin::RangeFraction(0.05));
        assert!("-1".parse::<Bin>().is_err());
    }

    #[test]
    fn logcosh_stable() {
        assert!(logcosh(0.0).abs() < 1e-15);
        assert!((logcosh(1000.0) - (1000.0 - std::f64::consts::LN_2)).abs() < 1e-9);
        assert!((logcosh(0.3) - 0.3f64.cosh().ln()).abs() < 1e-14);
    }
}

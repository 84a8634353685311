//! Metric multidimensional scaling by stress majorization (SMACOF).

use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_MAX_ITER: usize = 300;
pub const DEFAULT_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Embedding {
    /// One `k`-vector per input row.
    pub points: Vec<Vec<f64>>,
    /// `sqrt(sum_{i<j} (D_ij - d_ij)^2)` of the returned points.
    pub stress: f64,
    /// Stress after initialization and after every Guttman transform.
    pub stress_log: Vec<f64>,
    pub iterations: usize,
}

fn distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

fn raw_stress(target: &[f64], x: &[Vec<f64>]) -> f64 {
    let n = x.len();
    let mut s = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            let e = target[i * n + j] - distance(&x[i], &x[j]);
            s += e * e;
        }
    }
    s
}

/// Embeds `features` into `k` dimensions so that pairwise Euclidean distances
/// are preserved as well as possible.
///
/// Stops when the relative decrease of the squared stress drops below `tol`
/// or after `max_iter` transforms. The result is centered, and for `k = 2`
/// rotated so its first principal axis is axis 0.
pub fn mds_embed(features: &[Vec<f64>], k: usize, max_iter: usize, tol: f64, seed: u64) -> Result<Embedding> {
    let n = features.len();
    if n < 2 {
        return Err(Error::Config(format!("MDS needs at least two points, got {n}")));
    }
    if !(1..=2).contains(&k) {
        return Err(Error::Config(format!("MDS supports 1 or 2 components, got {k}")));
    }
    let dim = features[0].len();
    if let Some(r) = features.iter().find(|r| r.len() != dim) {
        return Err(Error::ShapeMismatch { expected: dim, got: r.len() });
    }
    let mut target = vec![0.0; n * n];
    for i in 0..n {
        for j in i + 1..n {
            let d = distance(&features[i], &features[j]);
            target[i * n + j] = d;
            target[j * n + i] = d;
        }
    }
    let max_d = target.iter().copied().fold(0.0, f64::max);
    if max_d == 0.0 {
        return Ok(Embedding { points: vec![vec![0.0; k]; n], stress: 0.0, stress_log: vec![0.0], iterations: 0 });
    }

    let mut x = classical_scaling(&target, n, k, seed);
    let mut sigma = raw_stress(&target, &x);
    let mut log = vec![sigma.sqrt()];
    let mut iterations = 0;
    let mut next = vec![vec![0.0; k]; n];
    while iterations < max_iter && sigma > 0.0 {
        // Guttman transform X <- B(X) X / n
        for i in 0..n {
            let row = &mut next[i];
            row.iter_mut().for_each(|v| *v = 0.0);
            let mut diag = 0.0;
            for j in 0..n {
                if i == j {
                    continue;
                }
                let d = distance(&x[i], &x[j]);
                if d > 0.0 {
                    let b = target[i * n + j] / d;
                    diag += b;
                    for c in 0..k {
                        row[c] -= b * x[j][c];
                    }
                }
            }
            for c in 0..k {
                row[c] = (row[c] + diag * x[i][c]) / n as f64;
            }
        }
        let new_sigma = raw_stress(&target, &next);
        if new_sigma >= sigma {
            // converged up to rounding
            break;
        }
        std::mem::swap(&mut x, &mut next);
        iterations += 1;
        log.push(new_sigma.sqrt());
        let decrease = sigma - new_sigma;
        sigma = new_sigma;
        if decrease < tol * log[log.len() - 2].powi(2) {
            break;
        }
    }

    center(&mut x);
    if k == 2 {
        align_principal_axis(&mut x);
    }
    Ok(Embedding { points: x, stress: sigma.sqrt(), stress_log: log, iterations })
}

/// Top-`k` classical scaling coordinates of the double-centered squared
/// distances, by shifted power iteration from seeded random vectors.
fn classical_scaling(target: &[f64], n: usize, k: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut b: Vec<f64> = target.iter().map(|d| -0.5 * d * d).collect();
    let row_mean: Vec<f64> = (0..n).map(|i| b[i * n..(i + 1) * n].iter().sum::<f64>() / n as f64).collect();
    let total = row_mean.iter().sum::<f64>() / n as f64;
    for i in 0..n {
        for j in 0..n {
            b[i * n + j] += total - row_mean[i] - row_mean[j];
        }
    }
    let shift = (0..n).map(|i| b[i * n..(i + 1) * n].iter().map(|v| v.abs()).sum::<f64>()).fold(0.0, f64::max);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut x = vec![vec![0.0; k]; n];
    let mut found: Vec<Vec<f64>> = Vec::new();
    for c in 0..k {
        let mut v: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        let mut lambda = 0.0;
        for _ in 0..2000 {
            for u in &found {
                let dot: f64 = u.iter().zip(&v).map(|(a, b)| a * b).sum();
                v.iter_mut().zip(u).for_each(|(a, b)| *a -= dot * b);
            }
            let norm = v.iter().map(|a| a * a).sum::<f64>().sqrt();
            if norm == 0.0 {
                break;
            }
            v.iter_mut().for_each(|a| *a /= norm);
            let w: Vec<f64> = (0..n)
                .map(|i| b[i * n..(i + 1) * n].iter().zip(&v).map(|(p, q)| p * q).sum::<f64>() + shift * v[i])
                .collect();
            let next: f64 = w.iter().zip(&v).map(|(a, b)| a * b).sum();
            v = w;
            let done = (next - lambda).abs() <= 1e-13 * next.abs().max(1.0);
            lambda = next;
            if done {
                break;
            }
        }
        let norm = v.iter().map(|a| a * a).sum::<f64>().sqrt();
        if norm > 0.0 {
            v.iter_mut().for_each(|a| *a /= norm);
        }
        let scale = (lambda - shift).max(0.0).sqrt();
        for (row, vi) in x.iter_mut().zip(&v) {
            row[c] = scale * vi;
        }
        found.push(v);
    }
    x
}

fn center(x: &mut [Vec<f64>]) {
    let n = x.len() as f64;
    for c in 0..x[0].len() {
        let mean = x.iter().map(|p| p[c]).sum::<f64>() / n;
        x.iter_mut().for_each(|p| p[c] -= mean);
    }
}

fn align_principal_axis(x: &mut [Vec<f64>]) {
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for p in x.iter() {
        sxx += p[0] * p[0];
        sxy += p[0] * p[1];
        syy += p[1] * p[1];
    }
    let theta = 0.5 * (2.0 * sxy).atan2(sxx - syy);
    let (s, c) = theta.sin_cos();
    for p in x.iter_mut() {
        let (a, b) = (p[0], p[1]);
        p[0] = c * a + s * b;
        p[1] = -s * a + c * b;
    }
}

impl Embedding {
    /// Euclidean norm of each embedded point.
    pub fn norms(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.iter().map(|v| v * v).sum::<f64>().sqrt()).collect()
    }

    /// CSV with header `index,x0[,x1],label`; `label` is empty when not given.
    pub fn write_csv<W: Write>(&self, out: W, labels: Option<&[f64]>) -> Result<()> {
        let k = self.points.first().map_or(0, Vec::len);
        let mut w = std::io::BufWriter::new(out);
        let header: Vec<String> = (0..k).map(|c| format!("x{c}")).collect();
        writeln!(w, "index,{},label", header.join(","))?;
        for (i, p) in self.points.iter().enumerate() {
            let coords: Vec<String> = p.iter().map(f64::to_string).collect();
            let label = labels.and_then(|l| l.get(i)).map(f64::to_string).unwrap_or_default();
            writeln!(w, "{i},{},{label}", coords.join(","))?;
        }
        w.flush()?;
        Ok(())
    }
}

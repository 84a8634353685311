use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::dataset::Dataset;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ForestConfig {
    pub trees: usize,
    /// Features tried per split; `None` means `floor(sqrt(F))`.
    pub max_features: Option<usize>,
    pub max_depth: Option<usize>,
    pub min_samples_split: usize,
    pub seed: u64,
}

impl Default for ForestConfig {
    fn default() -> Self {
        Self { trees: 70, max_features: None, max_depth: None, min_samples_split: 2, seed: 0 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
enum Node {
    Leaf { counts: [u32; 2] },
    Split { feature: usize, threshold: f64, left: usize, right: usize },
}

/// CART tree with Gini impurity over 0/1 labels.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecisionTree {
    nodes: Vec<Node>,
}

fn gini(c: [u32; 2]) -> f64 {
    let n = (c[0] + c[1]) as f64;
    if n == 0.0 {
        return 0.0;
    }
    let p = c[1] as f64 / n;
    2.0 * p * (1.0 - p)
}

struct Builder<'a> {
    x: &'a [Vec<f64>],
    y: &'a [usize],
    mtry: usize,
    config: &'a ForestConfig,
    rng: ChaCha8Rng,
    nodes: Vec<Node>,
}

impl Builder<'_> {
    fn build(&mut self, rows: &mut [usize], depth: usize) -> usize {
        let mut counts = [0u32; 2];
        for &r in rows.iter() {
            counts[self.y[r]] += 1;
        }
        let id = self.nodes.len();
        self.nodes.push(Node::Leaf { counts });
        let pure = counts[0] == 0 || counts[1] == 0;
        let deep = self.config.max_depth.is_some_and(|m| depth >= m);
        if pure || deep || rows.len() < self.config.min_samples_split.max(2) {
            return id;
        }
        let Some((feature, threshold)) = self.best_split(rows, counts) else {
            return id;
        };
        let mut mid = 0;
        for i in 0..rows.len() {
            if self.x[rows[i]][feature] <= threshold {
                rows.swap(i, mid);
                mid += 1;
            }
        }
        let (l, r) = rows.split_at_mut(mid);
        let left = self.build(l, depth + 1);
        let right = self.build(r, depth + 1);
        self.nodes[id] = Node::Split { feature, threshold, left, right };
        id
    }

    fn best_split(&mut self, rows: &[usize], total: [u32; 2]) -> Option<(usize, f64)> {
        let dim = self.x[0].len();
        let n = rows.len() as f64;
        let parent = gini(total);
        let mut best: Option<(f64, usize, f64)> = None;
        let mut sorted: Vec<(f64, usize)> = Vec::with_capacity(rows.len());
        for feature in sample(&mut self.rng, dim, self.mtry.min(dim)).iter() {
            sorted.clear();
            sorted.extend(rows.iter().map(|&r| (self.x[r][feature], self.y[r])));
            sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
            let mut left = [0u32; 2];
            for i in 0..sorted.len() - 1 {
                left[sorted[i].1] += 1;
                if sorted[i].0 == sorted[i + 1].0 {
                    continue;
                }
                let right = [total[0] - left[0], total[1] - left[1]];
                let nl = (i + 1) as f64;
                let impurity = (nl * gini(left) + (n - nl) * gini(right)) / n;
                if impurity < parent - 1e-12 && best.is_none_or(|(b, _, _)| impurity < b) {
                    best = Some((impurity, feature, 0.5 * (sorted[i].0 + sorted[i + 1].0)));
                }
            }
        }
        best.map(|(_, f, t)| (f, t))
    }
}

impl DecisionTree {
    fn leaf(&self, x: &[f64]) -> [u32; 2] {
        let mut i = 0;
        loop {
            match &self.nodes[i] {
                Node::Leaf { counts } => return *counts,
                Node::Split { feature, threshold, left, right } => {
                    i = if x[*feature] <= *threshold { *left } else { *right };
                }
            }
        }
    }

    /// Majority class of the leaf reached by `x`; ties go to class 0.
    pub fn predict(&self, x: &[f64]) -> usize {
        let c = self.leaf(x);
        usize::from(c[1] > c[0])
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }
}

/// Indices drawn with replacement for tree `tree`.
pub fn bootstrap_indices(n: usize, seed: u64, tree: usize) -> Vec<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(tree as u64 + 1);
    (0..n).map(|_| rng.random_range(0..n)).collect()
}

/// Rows not drawn by [`bootstrap_indices`] for tree `tree`.
pub fn out_of_bag_indices(n: usize, seed: u64, tree: usize) -> Vec<usize> {
    let mut drawn = vec![false; n];
    for i in bootstrap_indices(n, seed, tree) {
        drawn[i] = true;
    }
    (0..n).filter(|&i| !drawn[i]).collect()
}

/// Bagged CART trees for binary classification.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RandomForest {
    pub dim: usize,
    pub trees: Vec<DecisionTree>,
    /// Out-of-bag accuracy, if every row was out of bag for some tree.
    pub oob_accuracy: Option<f64>,
}

impl RandomForest {
    pub fn fit(data: &Dataset, config: &ForestConfig) -> Result<Self> {
        if config.trees == 0 {
            return Err(Error::Config("a forest needs at least one tree".into()));
        }
        let y: Vec<usize> = data
            .labels
            .iter()
            .map(|&v| match v {
                0.0 => Ok(0),
                1.0 => Ok(1),
                _ => Err(Error::Config(format!("forest labels must be 0 or 1, got {v}"))),
            })
            .collect::<Result<_>>()?;
        if y.iter().all(|&c| c == y[0]) {
            return Err(Error::DegenerateLabels("all training labels are equal".into()));
        }
        let dim = data.dim();
        let mtry = config.max_features.unwrap_or(((dim as f64).sqrt().floor() as usize).max(1));
        if mtry == 0 {
            return Err(Error::Config("max_features must be positive".into()));
        }
        let n = data.len();
        let trees: Vec<DecisionTree> = (0..config.trees)
            .into_par_iter()
            .map(|t| {
                let mut rows = bootstrap_indices(n, config.seed, t);
                let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
                rng.set_stream(u64::MAX - t as u64);
                let mut b = Builder { x: &data.features, y: &y, mtry, config, rng, nodes: Vec::new() };
                b.build(&mut rows, 0);
                DecisionTree { nodes: b.nodes }
            })
            .collect();
        let mut votes = vec![[0u32; 2]; n];
        for (t, tree) in trees.iter().enumerate() {
            for i in out_of_bag_indices(n, config.seed, t) {
                votes[i][tree.predict(&data.features[i])] += 1;
            }
        }
        let oob_accuracy = votes.iter().all(|v| v[0] + v[1] > 0).then(|| {
            let hits = votes.iter().zip(&y).filter(|(v, &c)| usize::from(v[1] > v[0]) == c).count();
            hits as f64 / n as f64
        });
        Ok(Self { dim, trees, oob_accuracy })
    }

    /// Fraction of trees voting for class 1.
    pub fn predict_proba(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.dim {
            return Err(Error::ShapeMismatch { expected: self.dim, got: x.len() });
        }
        let ones = self.trees.iter().filter(|t| t.predict(x) == 1).count();
        Ok(ones as f64 / self.trees.len() as f64)
    }

    /// Majority vote; ties go to class 1.
    pub fn predict(&self, x: &[f64]) -> Result<usize> {
        Ok(usize::from(self.predict_proba(x)? >= 0.5))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xor_like(n: usize) -> Dataset {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut f = Vec::new();
        let mut l = Vec::new();
        for _ in 0..n {
            let a: f64 = rng.random_range(-1.0..1.0);
            let b: f64 = rng.random_range(-1.0..1.0);
            f.push(vec![a, b, rng.random_range(-1.0..1.0)]);
            l.push(if (a > 0.0) == (b > 0.0) { 1.0 } else { 0.0 });
        }
        Dataset::new(f, l).unwrap()
    }

    #[test]
    fn learns_quadrants() {
        let train = xor_like(600);
        let test = xor_like(200);
        let forest = RandomForest::fit(&train, &ForestConfig { seed: 5, ..Default::default() }).unwrap();
        let hits =
            test.features.iter().zip(&test.labels).filter(|(x, &y)| forest.predict(x).unwrap() as f64 == y).count();
        assert!(hits as f64 / 200.0 > 0.85, "{hits}");
        assert!(forest.oob_accuracy.unwrap() > 0.8);
    }

    #[test]
    fn deterministic_and_oob_disjoint() {
        let d = xor_like(100);
        let c = ForestConfig { trees: 5, seed: 11, ..Default::default() };
        assert_eq!(RandomForest::fit(&d, &c).unwrap(), RandomForest::fit(&d, &c).unwrap());
        for t in 0..5 {
            let boot = bootstrap_indices(100, 11, t);
            for i in out_of_bag_indices(100, 11, t) {
                assert!(!boot.contains(&i));
            }
        }
    }

    #[test]
    fn single_class_errors() {
        let d = Dataset::new(vec![vec![0.0], vec![1.0]], vec![1.0, 1.0]).unwrap();
        assert!(matches!(RandomForest::fit(&d, &ForestConfig::default()), Err(Error::DegenerateLabels(_))));
    }
}

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// `(train, test)` row indices of one fold.
pub type Fold = (Vec<usize>, Vec<usize>);

fn check_k(n: usize, k: usize) -> Result<()> {
    if k < 2 {
        return Err(Error::Config(format!("k-fold needs k >= 2, got {k}")));
    }
    if k > n {
        return Err(Error::Config(format!("k = {k} exceeds the {n} available units")));
    }
    Ok(())
}

/// Shuffled k-fold split of `0..n`. Test folds partition `0..n` and differ in
/// size by at most one.
pub fn kfold_split(n: usize, k: usize, seed: u64) -> Result<Vec<Fold>> {
    check_k(n, k)?;
    let mut idx: Vec<usize> = (0..n).collect();
    idx.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    Ok((0..k)
        .map(|f| {
            let (mut train, mut test) = (Vec::new(), Vec::new());
            for (pos, &i) in idx.iter().enumerate() {
                if pos % k == f {
                    test.push(i);
                } else {
                    train.push(i);
                }
            }
            train.sort_unstable();
            test.sort_unstable();
            (train, test)
        })
        .collect())
}

/// k-fold split that never separates rows with the same group id.
pub fn group_kfold_split(groups: &[u64], k: usize, seed: u64) -> Result<Vec<Fold>> {
    let mut ids: Vec<u64> = groups.to_vec();
    ids.sort_unstable();
    ids.dedup();
    let folds = kfold_split(ids.len(), k, seed)?;
    Ok(folds
        .into_iter()
        .map(|(_, test_ids)| {
            let test_set: std::collections::HashSet<u64> = test_ids.iter().map(|&i| ids[i]).collect();
            let (mut train, mut test) = (Vec::new(), Vec::new());
            for (i, g) in groups.iter().enumerate() {
                if test_set.contains(g) {
                    test.push(i);
                } else {
                    train.push(i);
                }
            }
            (train, test)
        })
        .collect())
}

/// Random split keeping whole groups together; roughly `train_fraction` of
/// the groups go to the training side, and both sides are non-empty.
pub fn train_test_split(groups: &[u64], train_fraction: f64, seed: u64) -> Result<Fold> {
    if !(train_fraction > 0.0 && train_fraction < 1.0) {
        return Err(Error::Config(format!("train fraction {train_fraction} is not in (0, 1)")));
    }
    let mut ids: Vec<u64> = groups.to_vec();
    ids.sort_unstable();
    ids.dedup();
    if ids.len() < 2 {
        return Err(Error::Config("need at least two groups to split".into()));
    }
    ids.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let cut = ((ids.len() as f64 * train_fraction).round() as usize).clamp(1, ids.len() - 1);
    let train_ids: std::collections::HashSet<u64> = ids[..cut].iter().copied().collect();
    let (mut train, mut test) = (Vec::new(), Vec::new());
    for (i, g) in groups.iter().enumerate() {
        if train_ids.contains(g) {
            train.push(i);
        } else {
            test.push(i);
        }
    }
    Ok((train, test))
}

//! Plücker coordinates of the grading (integer kernel) of a vertex matrix.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{determinant, integer_kernel_basis, IntMatrix};
use crate::polytope::{LatticePolytope, Polytope};

/// Projectively normalized maximal minors of the saturated kernel, indexed
/// by the lexicographically ordered `(n - d)`-subsets of vertex columns.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PlueckerCoordinates {
    pub n: usize,
    pub d: usize,
    pub coords: Vec<BigInt>,
}

impl PlueckerCoordinates {
    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    /// Coordinates as `i64`; fails only for enormous minors.
    pub fn to_i64(&self) -> Result<Vec<i64>> {
        self.coords.iter().map(crate::lattice::to_i64).collect()
    }

    /// Coordinates as `f64` (lossy for very large minors).
    pub fn to_f64(&self) -> Vec<f64> {
        use num_traits::ToPrimitive;
        self.coords.iter().map(|c| c.to_f64().unwrap_or(f64::NAN)).collect()
    }
}

/// Checks that `order` is a permutation of `0..n`.
pub fn validate_permutation(order: &[usize], n: usize) -> Result<()> {
    if order.len() != n {
        return Err(Error::InvalidPermutation(format!("length {} for {n} vertices", order.len())));
    }
    let mut seen = vec![false; n];
    for &i in order {
        if i >= n || seen[i] {
            return Err(Error::InvalidPermutation(format!("{order:?} is not a bijection on 0..{n}")));
        }
        seen[i] = true;
    }
    Ok(())
}

/// The `d x n` matrix whose column `i` is vertex `order[i]`.
pub fn vertex_matrix(p: &LatticePolytope, order: &[usize]) -> Result<IntMatrix> {
    let v = p.vertices();
    validate_permutation(order, v.len())?;
    IntMatrix::from_columns(&order.iter().map(|&i| v[i].clone()).collect::<Vec<_>>())
}

/// Identity order `0..n`.
pub fn identity_order(p: &LatticePolytope) -> Vec<usize> {
    (0..p.num_vertices()).collect()
}

/// Order listing the vertices of `p` as in `listed`, if `listed` is a
/// rearrangement of the vertex set.
pub fn order_of(p: &LatticePolytope, listed: &[Vec<BigInt>]) -> Option<Vec<usize>> {
    let v = p.vertices();
    let order: Option<Vec<usize>> = listed.iter().map(|x| v.iter().position(|y| y == x)).collect();
    order.filter(|o| validate_permutation(o, v.len()).is_ok())
}

/// Plücker coordinates of `p` with vertex columns in `order`.
///
/// Requires the vertices to generate `Z^d`; otherwise the minors describe a
/// quotient grading and [`Error::NonSaturatedLattice`] is returned.
pub fn pluecker(p: &LatticePolytope, order: &[usize]) -> Result<PlueckerCoordinates> {
    let index = p.vertex_lattice_index();
    if !index.is_one() {
        return Err(Error::NonSaturatedLattice(index));
    }
    pluecker_unchecked(p, order)
}

/// Like [`pluecker`] but without the lattice-generation check.
pub fn pluecker_unchecked(p: &LatticePolytope, order: &[usize]) -> Result<PlueckerCoordinates> {
    let v = vertex_matrix(p, order)?;
    let (d, n) = (v.rows(), v.cols());
    let kernel = integer_kernel_basis(&v);
    let k = kernel.rows();
    if k != n - d {
        return Err(Error::Internal(format!("kernel rank {k}, expected {}", n - d)));
    }
    let coords = maximal_minors(&kernel)?;
    Ok(PlueckerCoordinates { n, d, coords: normalize(coords)? })
}

/// All `k x k` minors of a `k x n` matrix, columns chosen lexicographically.
pub fn maximal_minors(m: &IntMatrix) -> Result<Vec<BigInt>> {
    let (k, n) = (m.rows(), m.cols());
    let small: Option<Vec<Vec<i128>>> =
        m.to_rows().iter().map(|r| r.iter().map(|x| i64::try_from(x).ok().map(i128::from)).collect()).collect();
    let fits = small.as_ref().is_some_and(|rows| rows.iter().flatten().all(|x| x.abs() < 1 << 12) && k <= 6);
    combinations(n, k)
        .into_iter()
        .map(|cols| {
            if fits {
                let rows = small.as_ref().expect("checked");
                let sub: Vec<Vec<i128>> = rows.iter().map(|r| cols.iter().map(|&c| r[c]).collect()).collect();
                Ok(BigInt::from(crate::lattice::det_small(&sub)))
            } else {
                determinant(&m.select_columns(&cols))
            }
        })
        .collect()
}

/// Divides by the content and makes the first non-zero entry positive.
fn normalize(mut coords: Vec<BigInt>) -> Result<Vec<BigInt>> {
    let g = coords.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if g.is_zero() {
        return Err(Error::Internal("all maximal minors vanish".into()));
    }
    let sign = if coords.iter().find(|x| !x.is_zero()).expect("non-zero").is_negative() {
        -BigInt::one()
    } else {
        BigInt::one()
    };
    let f = g * sign;
    for c in &mut coords {
        *c = &*c / &f;
    }
    Ok(coords)
}

/// Lexicographically ordered `k`-subsets of `0..n`.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] < n - k + i {
                idx[i] += 1;
                for j in i + 1..k {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Up to `k` distinct coordinate vectors: the identity order first, then
/// uniformly random vertex permutations drawn from a seeded generator.
pub fn sample_permutation_variants(p: &LatticePolytope, k: usize, seed: u64) -> Result<Vec<PlueckerCoordinates>> {
    if k == 0 {
        return Err(Error::Config("variant count must be at least 1".into()));
    }
    let mut out = vec![pluecker(p, &identity_order(p))?];
    let n = p.num_vertices();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order = identity_order(p);
    let attempts = 30 * k + 30;
    for _ in 0..attempts {
        if out.len() >= k {
            break;
        }
        order.shuffle(&mut rng);
        let c = pluecker(p, &order)?;
        if !out.contains(&c) {
            out.push(c);
        }
    }
    debug_assert!(out.len() <= k && n >= 1);
    Ok(out)
}

/// Indices of a subset of `values` summing to `target`, found by exhaustive
/// meet-in-the-middle search; `None` if there is none.
pub fn subset_summing_to(values: &[i64], target: i64) -> Option<Vec<usize>> {
    let n = values.len();
    let half = n / 2;
    let (left, right) = (&values[..half], &values[half..]);
    let sums = |part: &[i64]| -> Vec<(i64, u32)> {
        (0u32..1 << part.len())
            .map(|mask| {
                let s = (0..part.len()).filter(|&i| mask >> i & 1 == 1).map(|i| part[i]).sum();
                (s, mask)
            })
            .collect()
    };
    let mut r: Vec<(i64, u32)> = sums(right);
    r.sort();
    for (s, lmask) in sums(left) {
        let want = target - s;
        if let Ok(pos) = r.binary_search_by(|(x, _)| x.cmp(&want)) {
            let rmask = r[pos].1;
            let mut idx: Vec<usize> = (0..half).filter(|&i| lmask >> i & 1 == 1).collect();
            idx.extend((0..n - half).filter(|&i| rmask >> i & 1 == 1).map(|i| i + half));
            return Some(idx);
        }
    }
    None
}

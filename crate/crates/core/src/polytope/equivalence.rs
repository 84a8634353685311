use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::{LatticePolytope, Polytope};
use crate::lattice::{determinant, IntMatrix};

/// Searches for `M` in `GL(d, Z)` with `M . vert(P) = vert(Q)`.
///
/// A frame of `d` linearly independent vertices of `P` is fixed; every
/// ordered `d`-tuple of vertices of `Q` with the same absolute determinant
/// determines at most one candidate map, which is then checked on all
/// vertices.
pub fn is_unimodular_equivalent(p: &LatticePolytope, q: &LatticePolytope) -> Option<IntMatrix> {
    let d = p.dim();
    if d != q.dim() || p.num_vertices() != q.num_vertices() {
        return None;
    }
    if p.normalized_volume() != q.normalized_volume() {
        return None;
    }
    let pv = p.vertices();
    let qv = q.vertices();
    let frame = independent_frame(pv)?;
    let b_p = IntMatrix::from_columns(&frame.iter().map(|&i| pv[i].clone()).collect::<Vec<_>>()).ok()?;
    let det_p = determinant(&b_p).ok()?;
    let adj_p = adjugate(&b_p);
    let target: BTreeSet<&Vec<BigInt>> = qv.iter().collect();

    let n = qv.len();
    let mut tuple = vec![0usize; d];
    loop {
        if distinct(&tuple) {
            let b_q = IntMatrix::from_columns(&tuple.iter().map(|&i| qv[i].clone()).collect::<Vec<_>>()).ok()?;
            let det_q = determinant(&b_q).ok()?;
            if det_q.abs() == det_p.abs() {
                if let Some(m) = exact_quotient(&b_q.mul(&adj_p).ok()?, &det_p) {
                    let image: Option<BTreeSet<Vec<BigInt>>> = pv.iter().map(|v| m.apply(v).ok()).collect();
                    if image.is_some_and(|img| img.iter().eq(target.iter().copied())) {
                        return Some(m);
                    }
                }
            }
        }
        // next tuple
        let mut k = d;
        loop {
            if k == 0 {
                return None;
            }
            k -= 1;
            tuple[k] += 1;
            if tuple[k] < n {
                break;
            }
            tuple[k] = 0;
        }
    }
}

fn distinct(t: &[usize]) -> bool {
    t.iter().enumerate().all(|(i, a)| t[..i].iter().all(|b| a != b))
}

/// First lexicographic `d`-subset of vertices with non-zero determinant.
fn independent_frame(v: &[Vec<BigInt>]) -> Option<Vec<usize>> {
    let d = v[0].len();
    let n = v.len();
    let mut idx: Vec<usize> = (0..d).collect();
    loop {
        let m = IntMatrix::from_columns(&idx.iter().map(|&i| v[i].clone()).collect::<Vec<_>>()).ok()?;
        if !determinant(&m).ok()?.is_zero() {
            return Some(idx);
        }
        // next combination
        let mut k = d;
        loop {
            if k == 0 {
                return None;
            }
            k -= 1;
            if idx[k] < n - d + k {
                idx[k] += 1;
                for j in k + 1..d {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

fn adjugate(m: &IntMatrix) -> IntMatrix {
    let n = m.rows();
    let mut adj = IntMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let rows: Vec<Vec<BigInt>> = (0..n)
                .filter(|&r| r != j)
                .map(|r| (0..n).filter(|&c| c != i).map(|c| m[(r, c)].clone()).collect())
                .collect();
            let minor = if rows.is_empty() {
                BigInt::from(1)
            } else {
                determinant(&IntMatrix::from_rows(&rows).expect("square")).expect("square")
            };
            adj[(i, j)] = if (i + j) % 2 == 0 { minor } else { -minor };
        }
    }
    adj
}

fn exact_quotient(m: &IntMatrix, d: &BigInt) -> Option<IntMatrix> {
    let mut out = m.clone();
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            let (q, r) = m[(i, j)].div_rem(d);
            if !r.is_zero() {
                return None;
            }
            out[(i, j)] = q;
        }
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn adjugate_inverts() {
        let m = IntMatrix::from_rows(&[vec![2i64, 1], vec![7, 4]]).unwrap();
        let prod = m.mul(&adjugate(&m)).unwrap();
        assert_eq!(prod, IntMatrix::from_rows(&[vec![1i64, 0], vec![0, 1]]).unwrap());
    }
}

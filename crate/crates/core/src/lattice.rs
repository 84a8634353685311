//! Exact integer linear algebra.
//!
//! Everything here works over arbitrary-precision integers: content gcds,
//! row-style Hermite normal forms with their unimodular transforms,
//! saturated integer kernels and fraction-free determinants.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision signed integer.
pub type BigInteger = BigInt;

/// Reduced fraction of [`BigInteger`]s with a positive denominator.
pub type Rational = BigRational;

/// Gcd of the absolute values of `v`. The all-zero vector has gcd 0.
pub fn gcd_of_vector(v: &[BigInt]) -> Result<BigInt> {
    if v.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut g = BigInt::zero();
    for x in v {
        g = g.gcd(x);
        if g.is_one() {
            break;
        }
    }
    Ok(g)
}

/// A vector is primitive when its content gcd is exactly 1.
pub fn is_primitive(v: &[BigInt]) -> Result<bool> {
    Ok(gcd_of_vector(v)?.is_one())
}

/// Divides `v` by its content and returns the primitive vector.
/// The zero vector is returned unchanged.
pub fn primitive_part(v: &[BigInt]) -> Vec<BigInt> {
    let g = v.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if g.is_zero() || g.is_one() {
        return v.to_vec();
    }
    v.iter().map(|x| x / &g).collect()
}

/// Least common multiple of a collection of positive integers (1 when empty).
pub fn lcm_all<'a>(values: impl IntoIterator<Item = &'a BigInt>) -> BigInt {
    values.into_iter().fold(BigInt::one(), |acc, x| if x.is_zero() { acc } else { acc.lcm(x) })
}

pub(crate) fn to_i64(x: &BigInt) -> Result<i64> {
    x.to_i64().ok_or(Error::Overflow("integer exceeds 64 bits"))
}

/// Dense integer matrix in row-major order.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from rows; all rows must have the same length.
    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != cols {
                return Err(Error::DimensionMismatch(format!("row {i} has {} entries, expected {cols}", r.len())));
            }
            data.extend(r.iter().cloned().map(Into::into));
        }
        Ok(Self { rows: rows.len(), cols, data })
    }

    /// Builds a `d x n` matrix whose columns are the given vectors.
    pub fn from_columns(columns: &[Vec<BigInt>]) -> Result<Self> {
        Ok(Self::from_rows(columns)?.transpose())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_empty(&self) -> bool {
        self.rows == 0 || self.cols == 0
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * &other[(k, j)];
                }
            }
        }
        Ok(out)
    }

    /// Matrix-vector product `self * v`.
    pub fn apply(&self, v: &[BigInt]) -> Result<Vec<BigInt>> {
        if v.len() != self.cols {
            return Err(Error::ShapeMismatch { expected: self.cols, got: v.len() });
        }
        Ok((0..self.rows).map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum()).collect())
    }

    /// Submatrix made of the given columns, in the given order.
    pub fn select_columns(&self, cols: &[usize]) -> IntMatrix {
        let mut out = Self::zeros(self.rows, cols.len());
        for i in 0..self.rows {
            for (jj, &j) in cols.iter().enumerate() {
                out[(i, jj)] = self[(i, j)].clone();
            }
        }
        out
    }

    fn row_is_zero(&self, i: usize) -> bool {
        self.row(i).iter().all(Zero::is_zero)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// row[target] -= factor * row[source]
    fn sub_row_multiple(&mut self, target: usize, source: usize, factor: &BigInt) {
        if factor.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let delta = factor * &self.data[source * self.cols + j];
            self.data[target * self.cols + j] -= delta;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let x = &mut self.data[i * self.cols + j];
            *x = -std::mem::take(x);
        }
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;

    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.to_rows()).finish()
    }
}

/// Row-style Hermite normal form.
///
/// Returns `(H, U)` with `H = U * M`, `U` unimodular, and `H` in echelon form:
/// every pivot is positive and the entries above a pivot lie in `[0, pivot)`.
/// Zero rows of `H` are at the bottom.
pub fn hermite_normal_form(m: &IntMatrix) -> Result<(IntMatrix, IntMatrix)> {
    if m.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut h = m.clone();
    let mut u = IntMatrix::identity(m.rows);
    let mut pivot_row = 0;
    for col in 0..m.cols {
        if pivot_row == m.rows {
            break;
        }
        // Euclid on the column below the pivot row.
        loop {
            let best = (pivot_row..m.rows)
                .filter(|&i| !h[(i, col)].is_zero())
                .min_by(|&a, &b| h[(a, col)].abs().cmp(&h[(b, col)].abs()));
            let Some(best) = best else { break };
            h.swap_rows(pivot_row, best);
            u.swap_rows(pivot_row, best);
            let mut done = true;
            for i in pivot_row + 1..m.rows {
                if h[(i, col)].is_zero() {
                    continue;
                }
                let q = h[(i, col)].div_floor(&h[(pivot_row, col)]);
                h.sub_row_multiple(i, pivot_row, &q);
                u.sub_row_multiple(i, pivot_row, &q);
                if !h[(i, col)].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if h[(pivot_row, col)].is_zero() {
            continue;
        }
        if h[(pivot_row, col)].is_negative() {
            h.negate_row(pivot_row);
            u.negate_row(pivot_row);
        }
        for i in 0..pivot_row {
            let q = h[(i, col)].div_floor(&h[(pivot_row, col)]);
            h.sub_row_multiple(i, pivot_row, &q);
            u.sub_row_multiple(i, pivot_row, &q);
        }
        pivot_row += 1;
    }
    Ok((h, u))
}

/// Rank of an integer matrix.
pub fn rank(m: &IntMatrix) -> usize {
    if m.is_empty() {
        return 0;
    }
    let (h, _) = hermite_normal_form(m).expect("non-empty");
    (0..h.rows).filter(|&i| !h.row_is_zero(i)).count()
}

/// Basis of the saturated lattice `{x in Z^c : M x = 0}`, one vector per row.
///
/// The basis comes from the unimodular transform of the Hermite normal form
/// of `M^T`, so it generates the full kernel lattice. It is returned itself in
/// Hermite normal form, which makes the result canonical.
pub fn integer_kernel_basis(m: &IntMatrix) -> IntMatrix {
    let c = m.cols;
    if c == 0 {
        return IntMatrix::zeros(0, 0);
    }
    if m.rows == 0 {
        return IntMatrix::identity(c);
    }
    let (h, u) = hermite_normal_form(&m.transpose()).expect("non-empty");
    let kernel_rows: Vec<Vec<BigInt>> = (0..c).filter(|&i| h.row_is_zero(i)).map(|i| u.row(i).to_vec()).collect();
    if kernel_rows.is_empty() {
        return IntMatrix::zeros(0, c);
    }
    let k = IntMatrix::from_rows(&kernel_rows).expect("rectangular");
    let (kh, _) = hermite_normal_form(&k).expect("non-empty");
    let rows: Vec<Vec<BigInt>> = (0..kh.rows).filter(|&i| !kh.row_is_zero(i)).map(|i| kh.row(i).to_vec()).collect();
    IntMatrix::from_rows(&rows).expect("rectangular")
}

/// Whether `v` is an integer combination of the rows of `basis`.
pub fn lattice_contains(basis: &IntMatrix, v: &[BigInt]) -> Result<bool> {
    if v.len() != basis.cols {
        return Err(Error::ShapeMismatch { expected: basis.cols, got: v.len() });
    }
    if basis.rows == 0 {
        return Ok(v.iter().all(Zero::is_zero));
    }
    let (h, _) = hermite_normal_form(basis)?;
    let mut rest = v.to_vec();
    for i in 0..h.rows {
        let Some(p) = h.row(i).iter().position(|x| !x.is_zero()) else { break };
        let pivot = &h[(i, p)];
        let (q, r) = rest[p].div_rem(pivot);
        if !r.is_zero() {
            return Ok(false);
        }
        for (x, hx) in rest.iter_mut().zip(h.row(i)) {
            *x -= &q * hx;
        }
    }
    Ok(rest.iter().all(Zero::is_zero))
}

/// Index of the lattice generated by the columns of `m` inside `Z^rows`,
/// or `None` when the columns do not span a full-rank lattice.
pub fn column_lattice_index(m: &IntMatrix) -> Option<BigInt> {
    if m.is_empty() {
        return None;
    }
    let (h, _) = hermite_normal_form(&m.transpose()).ok()?;
    let mut index = BigInt::one();
    let mut found = 0;
    for i in 0..h.rows {
        if let Some(p) = h.row(i).iter().find(|x| !x.is_zero()) {
            index *= p;
            found += 1;
        }
    }
    (found == m.rows).then_some(index)
}

/// Exact determinant by fraction-free (Bareiss) elimination.
pub fn determinant(m: &IntMatrix) -> Result<BigInt> {
    if m.rows != m.cols {
        return Err(Error::NotSquare { rows: m.rows, cols: m.cols });
    }
    let n = m.rows;
    if n == 0 {
        return Ok(BigInt::one());
    }
    let mut a = m.clone();
    let mut sign = 1;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[(k, k)].is_zero() {
            match (k + 1..n).find(|&i| !a[(i, k)].is_zero()) {
                Some(i) => {
                    a.swap_rows(k, i);
                    sign = -sign;
                }
                None => return Ok(BigInt::zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)];
                a[(i, j)] = v / &prev;
            }
        }
        prev = a[(k, k)].clone();
    }
    let det = a[(n - 1, n - 1)].clone();
    Ok(if sign < 0 { -det } else { det })
}

/// Determinant of a small square matrix given by rows of `i128`s.
/// Used on the hot paths of lattice-point and Hilbert-basis enumeration.
pub(crate) fn det_small(rows: &[Vec<i128>]) -> i128 {
    match rows.len() {
        0 => 1,
        1 => rows[0][0],
        2 => rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0],
        3 => {
            let r = rows;
            r[0][0] * (r[1][1] * r[2][2] - r[1][2] * r[2][1]) - r[0][1] * (r[1][0] * r[2][2] - r[1][2] * r[2][0])
                + r[0][2] * (r[1][0] * r[2][1] - r[1][1] * r[2][0])
        }
        n => {
            // cofactor expansion along the first row
            let mut total = 0i128;
            for j in 0..n {
                let minor: Vec<Vec<i128>> = rows[1..]
                    .iter()
                    .map(|r| r.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, &x)| x).collect())
                    .collect();
                let term = rows[0][j] * det_small(&minor);
                if j % 2 == 0 {
                    total += term;
                } else {
                    total -= term;
                }
            }
            total
        }
    }
}

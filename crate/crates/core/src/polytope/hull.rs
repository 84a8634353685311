//! Exact convex hulls of integer point sets in dimensions 2 and 3.

use std::collections::{BTreeMap, HashSet};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::lattice::{primitive_part, rank, IntMatrix};

/// A facet `normal . x >= offset` with a primitive inward normal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct FacetData {
    pub normal: Vec<BigInt>,
    pub offset: BigInt,
    /// Indices of the facet's vertices; cyclically ordered in dimension 3.
    pub vertices: Vec<usize>,
}

pub(crate) struct Hull {
    pub vertices: Vec<Vec<BigInt>>,
    pub facets: Vec<FacetData>,
}

pub(crate) fn sub(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub(crate) fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn cross(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    vec![&a[1] * &b[2] - &a[2] * &b[1], &a[2] * &b[0] - &a[0] * &b[2], &a[0] * &b[1] - &a[1] * &b[0]]
}

fn cross2(o: &[BigInt], a: &[BigInt], b: &[BigInt]) -> BigInt {
    (&a[0] - &o[0]) * (&b[1] - &o[1]) - (&a[1] - &o[1]) * (&b[0] - &o[0])
}

/// Sign-carrying volume of the tetrahedron `(a, b, c, d)` (times 6).
fn orient3(a: &[BigInt], b: &[BigInt], c: &[BigInt], d: &[BigInt]) -> BigInt {
    dot(&cross(&sub(b, a), &sub(c, a)), &sub(d, a))
}

pub(crate) fn hull(points: &[Vec<BigInt>]) -> Result<Hull> {
    let dim = points.first().ok_or(Error::EmptyInput)?.len();
    if let Some(p) = points.iter().find(|p| p.len() != dim) {
        return Err(Error::DimensionMismatch(format!("point of dimension {} in a {dim}-dimensional set", p.len())));
    }
    match dim {
        2 => hull2(points),
        3 => hull3(points),
        d => Err(Error::UnsupportedDimension(d)),
    }
}

/// Andrew's monotone chain. The result starts at the lexicographic minimum
/// and runs counterclockwise; collinear boundary points are dropped.
fn hull2(points: &[Vec<BigInt>]) -> Result<Hull> {
    let mut pts: Vec<Vec<BigInt>> = points.to_vec();
    pts.sort();
    pts.dedup();
    if pts.len() < 3 {
        return Err(Error::Degenerate);
    }
    let mut chain: Vec<Vec<BigInt>> = Vec::with_capacity(2 * pts.len());
    for p in pts.iter() {
        while chain.len() >= 2 && !cross2(&chain[chain.len() - 2], &chain[chain.len() - 1], p).is_positive() {
            chain.pop();
        }
        chain.push(p.clone());
    }
    let lower_len = chain.len() + 1;
    for p in pts.iter().rev().skip(1) {
        while chain.len() >= lower_len && !cross2(&chain[chain.len() - 2], &chain[chain.len() - 1], p).is_positive() {
            chain.pop();
        }
        chain.push(p.clone());
    }
    chain.pop();
    if chain.len() < 3 {
        return Err(Error::Degenerate);
    }
    let n = chain.len();
    let facets = (0..n)
        .map(|i| {
            let j = (i + 1) % n;
            let e = sub(&chain[j], &chain[i]);
            let normal = primitive_part(&[-e[1].clone(), e[0].clone()]);
            let offset = dot(&normal, &chain[i]);
            FacetData { normal, offset, vertices: vec![i, j] }
        })
        .collect();
    Ok(Hull { vertices: chain, facets })
}

/// Incremental hull with exact orientation tests, followed by merging of
/// coplanar triangles into polygonal facets.
fn hull3(points: &[Vec<BigInt>]) -> Result<Hull> {
    let mut pts: Vec<Vec<BigInt>> = points.to_vec();
    pts.sort();
    pts.dedup();
    let n = pts.len();
    if n < 4 {
        return Err(Error::Degenerate);
    }
    let i0 = 0;
    let i1 = 1;
    let d01 = sub(&pts[i1], &pts[i0]);
    let i2 =
        (2..n).find(|&j| cross(&d01, &sub(&pts[j], &pts[i0])).iter().any(|x| !x.is_zero())).ok_or(Error::Degenerate)?;
    let i3 = (2..n).find(|&j| !orient3(&pts[i0], &pts[i1], &pts[i2], &pts[j]).is_zero()).ok_or(Error::Degenerate)?;

    // Faces are stored so that interior points have negative orientation.
    let tetra = [i0, i1, i2, i3];
    let mut faces: Vec<[usize; 3]> = Vec::new();
    for skip in 0..4 {
        let mut f: Vec<usize> = tetra.iter().copied().filter(|&k| k != tetra[skip]).collect();
        if orient3(&pts[f[0]], &pts[f[1]], &pts[f[2]], &pts[tetra[skip]]).is_positive() {
            f.swap(1, 2);
        }
        faces.push([f[0], f[1], f[2]]);
    }

    for p in 0..n {
        if tetra.contains(&p) {
            continue;
        }
        let visible: Vec<bool> =
            faces.iter().map(|f| orient3(&pts[f[0]], &pts[f[1]], &pts[f[2]], &pts[p]).is_positive()).collect();
        if !visible.iter().any(|&v| v) {
            continue;
        }
        let edges: HashSet<(usize, usize)> = faces
            .iter()
            .zip(&visible)
            .filter(|(_, &v)| v)
            .flat_map(|(f, _)| [(f[0], f[1]), (f[1], f[2]), (f[2], f[0])])
            .collect();
        let horizon: Vec<(usize, usize)> = edges.iter().copied().filter(|&(a, b)| !edges.contains(&(b, a))).collect();
        let mut kept: Vec<[usize; 3]> = faces.iter().zip(&visible).filter(|(_, &v)| !v).map(|(f, _)| *f).collect();
        kept.extend(horizon.into_iter().map(|(a, b)| [a, b, p]));
        faces = kept;
    }

    // Group triangles by supporting plane.
    let mut planes: BTreeMap<Vec<BigInt>, BigInt> = BTreeMap::new();
    for f in &faces {
        let outward = cross(&sub(&pts[f[1]], &pts[f[0]]), &sub(&pts[f[2]], &pts[f[0]]));
        let normal: Vec<BigInt> = primitive_part(&outward).into_iter().map(|x| -x).collect();
        let offset = dot(&normal, &pts[f[0]]);
        planes.insert(normal, offset);
    }

    // A point is a vertex iff the normals of the facets through it have rank 3.
    let mut vertices: Vec<Vec<BigInt>> = Vec::new();
    for p in &pts {
        let through: Vec<Vec<BigInt>> =
            planes.iter().filter(|(u, b)| dot(u, p) == **b).map(|(u, _)| u.clone()).collect();
        if through.len() >= 3 && rank(&IntMatrix::from_rows(&through)?) == 3 {
            vertices.push(p.clone());
        }
    }
    vertices.sort();

    let facets = planes
        .into_iter()
        .map(|(normal, offset)| {
            let on: Vec<usize> = (0..vertices.len()).filter(|&i| dot(&normal, &vertices[i]) == offset).collect();
            let vertices_cyclic = cyclic_order(&vertices, &on, &normal);
            FacetData { normal, offset, vertices: vertices_cyclic }
        })
        .collect();
    Ok(Hull { vertices, facets })
}

/// Orders the vertices of a planar convex polygon counterclockwise as seen
/// from the side the outward normal (`-inward`) points to.
fn cyclic_order(vertices: &[Vec<BigInt>], on: &[usize], inward: &[BigInt]) -> Vec<usize> {
    let Some((&first, rest)) = on.split_first() else { return Vec::new() };
    let base = &vertices[first];
    let mut rest = rest.to_vec();
    rest.sort_by(|&a, &b| {
        let s = dot(&cross(&sub(&vertices[a], base), &sub(&vertices[b], base)), inward);
        // Positive along the inward normal means b comes first (clockwise from outside).
        s.sign().cmp(&num_bigint::Sign::NoSign)
    });
    let mut out = vec![first];
    out.extend(rest);
    out
}

//! Lattice and rational polytopes in dimensions 2 and 3.
//!
//! Both [`LatticePolytope`] and [`RationalPolytope`] keep their vertices in a
//! canonical order: counterclockwise from the lexicographic minimum in the
//! plane, lexicographically sorted in space. Facets are stored as
//! `u . x >= b` with primitive integer inward normals `u`.

mod equivalence;
mod hull;

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::lattice::{determinant, is_primitive, lcm_all, to_i64, IntMatrix};

pub use equivalence::is_unimodular_equivalent;

use hull::{dot, sub, FacetData};

/// Irredundant inequality description `normals[f] . x >= offsets[f]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HalfspaceSystem {
    pub normals: Vec<Vec<BigInt>>,
    pub offsets: Vec<BigRational>,
}

impl HalfspaceSystem {
    pub fn len(&self) -> usize {
        self.normals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.normals.is_empty()
    }
}

/// Shared exact representation: vertices scaled by a common positive
/// denominator so that all arithmetic stays integral.
#[derive(Clone, PartialEq, Eq)]
pub struct Geometry {
    dim: usize,
    scale: BigInt,
    points: Vec<Vec<BigInt>>,
    facets: Vec<FacetData>,
}

impl Geometry {
    fn from_scaled(points: &[Vec<BigInt>], scale: BigInt) -> Result<Self> {
        let h = hull::hull(points)?;
        let dim = h.vertices[0].len();
        Ok(Self { dim, scale, points: h.vertices, facets: h.facets })
    }

    fn rational_vertices(&self) -> Vec<Vec<BigRational>> {
        self.points
            .iter()
            .map(|p| p.iter().map(|x| BigRational::new(x.clone(), self.scale.clone())).collect())
            .collect()
    }

    fn facet_system(&self) -> HalfspaceSystem {
        HalfspaceSystem {
            normals: self.facets.iter().map(|f| f.normal.clone()).collect(),
            offsets: self.facets.iter().map(|f| BigRational::new(f.offset.clone(), self.scale.clone())).collect(),
        }
    }

    fn contains_origin_interior(&self) -> bool {
        self.facets.iter().all(|f| f.offset.is_negative())
    }

    /// Simplices of the boundary: each facet split into a fan of
    /// `(dim - 1)`-simplices, given as vertex indices.
    fn boundary_simplices(&self) -> Vec<(usize, Vec<usize>)> {
        let mut out = Vec::new();
        for (fi, f) in self.facets.iter().enumerate() {
            if self.dim == 2 {
                out.push((fi, f.vertices.clone()));
            } else {
                for k in 1..f.vertices.len() - 1 {
                    out.push((fi, vec![f.vertices[0], f.vertices[k], f.vertices[k + 1]]));
                }
            }
        }
        out
    }

    /// `d!` times the volume, measured by coning the boundary from `apex`
    /// (given in scaled coordinates, and assumed to lie in the polytope).
    fn scaled_volume_from(&self, apex: &[BigInt]) -> BigInt {
        self.boundary_simplices()
            .iter()
            .map(|(_, s)| {
                let rows: Vec<Vec<BigInt>> = s.iter().map(|&i| sub(&self.points[i], apex)).collect();
                determinant(&IntMatrix::from_rows(&rows).expect("square")).expect("square").abs()
            })
            .sum()
    }

    fn normalized_volume(&self) -> BigRational {
        let apex =
            if self.contains_origin_interior() { vec![BigInt::zero(); self.dim] } else { self.points[0].clone() };
        self.normalized_volume_from(&apex)
    }

    fn normalized_volume_from(&self, apex: &[BigInt]) -> BigRational {
        let denom = num_traits::pow(self.scale.clone(), self.dim);
        BigRational::new(self.scaled_volume_from(apex), denom)
    }

    /// Pulling triangulation from vertex 0: every full-dimensional simplex
    /// uses vertex 0 and a boundary simplex of a facet not containing it.
    fn triangulation(&self) -> Vec<Vec<usize>> {
        self.boundary_simplices()
            .into_iter()
            .filter(|(fi, _)| !self.facets[*fi].vertices.contains(&0))
            .map(|(_, s)| {
                let mut simplex = vec![0];
                simplex.extend(s);
                simplex
            })
            .collect()
    }

    fn lattice_points(&self, strict: bool) -> Vec<Vec<BigInt>> {
        match self.lattice_points_small(strict) {
            Ok(points) => points,
            Err(_) => self.lattice_points_big(strict),
        }
    }

    /// Integer bounds `lo_f` with `u_f . x >= lo_f` (or `> ` when strict,
    /// folded into `>= lo_f + 1`) for integer points `x`.
    fn integer_bounds(&self, strict: bool) -> Vec<BigInt> {
        self.facets
            .iter()
            .map(|f| if strict { f.offset.div_floor(&self.scale) + 1 } else { f.offset.div_ceil(&self.scale) })
            .collect()
    }

    fn bounding_box(&self) -> (Vec<BigInt>, Vec<BigInt>) {
        let lo = (0..self.dim)
            .map(|k| self.points.iter().map(|p| p[k].div_ceil(&self.scale)).min().expect("non-empty"))
            .collect();
        let hi = (0..self.dim)
            .map(|k| self.points.iter().map(|p| p[k].div_floor(&self.scale)).max().expect("non-empty"))
            .collect();
        (lo, hi)
    }

    fn lattice_points_small(&self, strict: bool) -> Result<Vec<Vec<BigInt>>> {
        let (lo, hi) = self.bounding_box();
        let lo: Vec<i64> = lo.iter().map(to_i64).collect::<Result<_>>()?;
        let hi: Vec<i64> = hi.iter().map(to_i64).collect::<Result<_>>()?;
        let normals: Vec<Vec<i64>> = self
            .facets
            .iter()
            .map(|f| f.normal.iter().map(to_i64).collect::<Result<Vec<_>>>())
            .collect::<Result<_>>()?;
        let bounds: Vec<i64> = self.integer_bounds(strict).iter().map(to_i64).collect::<Result<_>>()?;
        let span: i64 = lo.iter().zip(&hi).map(|(a, b)| (b - a + 1).max(0)).product();
        if span > 50_000_000 {
            return Err(Error::Overflow("bounding box too large for enumeration"));
        }
        let mut out = Vec::new();
        let mut x = lo.clone();
        if lo.iter().zip(&hi).any(|(a, b)| a > b) {
            return Ok(out);
        }
        loop {
            let inside = normals.iter().zip(&bounds).all(|(u, &b)| {
                let s: i128 = u.iter().zip(&x).map(|(&a, &c)| a as i128 * c as i128).sum();
                s >= b as i128
            });
            if inside {
                out.push(x.iter().map(|&c| BigInt::from(c)).collect());
            }
            // odometer increment, last coordinate fastest
            let mut k = self.dim;
            loop {
                if k == 0 {
                    return Ok(out);
                }
                k -= 1;
                if x[k] < hi[k] {
                    x[k] += 1;
                    x[k + 1..].copy_from_slice(&lo[k + 1..]);
                    break;
                }
            }
        }
    }

    fn lattice_points_big(&self, strict: bool) -> Vec<Vec<BigInt>> {
        let (lo, hi) = self.bounding_box();
        let bounds = self.integer_bounds(strict);
        let mut out = Vec::new();
        if lo.iter().zip(&hi).any(|(a, b)| a > b) {
            return out;
        }
        let mut x = lo.clone();
        loop {
            if self.facets.iter().zip(&bounds).all(|(f, b)| &dot(&f.normal, &x) >= b) {
                out.push(x.clone());
            }
            let mut k = self.dim;
            loop {
                if k == 0 {
                    return out;
                }
                k -= 1;
                if x[k] < hi[k] {
                    x[k] += 1;
                    x[k + 1..].clone_from_slice(&lo[k + 1..]);
                    break;
                }
            }
        }
    }

    fn dual(&self) -> Result<RationalPolytope> {
        if !self.contains_origin_interior() {
            return Err(Error::DualUnbounded);
        }
        // Facet u.x >= b (b < 0) of P gives the dual vertex u / |b|; offsets are
        // in scaled coordinates, so |b| = |offset| / scale.
        let verts: Vec<Vec<BigRational>> = self
            .facets
            .iter()
            .map(|f| {
                let h = -f.offset.clone();
                f.normal.iter().map(|u| BigRational::new(u * &self.scale, h.clone())).collect()
            })
            .collect();
        RationalPolytope::hull(&verts)
    }
}

/// Common read-only interface of lattice and rational polytopes.
pub trait Polytope {
    #[doc(hidden)]
    fn geometry(&self) -> &Geometry;

    fn dim(&self) -> usize {
        self.geometry().dim
    }

    fn num_vertices(&self) -> usize {
        self.geometry().points.len()
    }

    fn rational_vertices(&self) -> Vec<Vec<BigRational>> {
        self.geometry().rational_vertices()
    }

    /// Irredundant facet inequalities with primitive integer normals.
    fn facet_system(&self) -> HalfspaceSystem {
        self.geometry().facet_system()
    }

    /// Vertex indices of each facet (cyclically ordered in dimension 3).
    fn facet_vertices(&self) -> Vec<Vec<usize>> {
        self.geometry().facets.iter().map(|f| f.vertices.clone()).collect()
    }

    /// True iff every facet offset is strictly negative.
    fn contains_origin_interior(&self) -> bool {
        self.geometry().contains_origin_interior()
    }

    /// All integer points, boundary included.
    fn lattice_points(&self) -> Vec<Vec<BigInt>> {
        self.geometry().lattice_points(false)
    }

    /// Integer points in the topological interior.
    fn interior_lattice_points(&self) -> Vec<Vec<BigInt>> {
        self.geometry().lattice_points(true)
    }

    /// `d!` times the Euclidean volume, exactly.
    fn rational_volume(&self) -> BigRational {
        self.geometry().normalized_volume()
    }

    /// Normalized volume computed by coning from an arbitrary point of the
    /// polytope; equal to [`Polytope::rational_volume`] for every valid apex.
    fn rational_volume_from(&self, apex: &[BigRational]) -> BigRational {
        let g = self.geometry();
        let verts = g.rational_vertices();
        g.boundary_simplices()
            .iter()
            .map(|(_, s)| {
                let rows: Vec<Vec<BigRational>> =
                    s.iter().map(|&i| verts[i].iter().zip(apex).map(|(x, a)| x - a).collect()).collect();
                det_rational(&rows).abs()
            })
            .sum()
    }

    /// Pulling triangulation from vertex 0, as vertex-index simplices.
    fn triangulation(&self) -> Vec<Vec<usize>> {
        self.geometry().triangulation()
    }

    /// Polar dual `{v : u . v >= -1 for all u in P}`.
    fn dual(&self) -> Result<RationalPolytope> {
        self.geometry().dual()
    }
}

/// Full-dimensional convex hull of integer points.
#[derive(Clone, PartialEq, Eq)]
pub struct LatticePolytope {
    geometry: Geometry,
}

impl Polytope for LatticePolytope {
    fn geometry(&self) -> &Geometry {
        &self.geometry
    }
}

impl LatticePolytope {
    /// Convex hull of integer points; keeps only the extreme points.
    pub fn hull(points: &[Vec<BigInt>]) -> Result<Self> {
        Ok(Self { geometry: Geometry::from_scaled(points, BigInt::one())? })
    }

    /// Convenience constructor from machine integers.
    pub fn from_i64(points: &[Vec<i64>]) -> Result<Self> {
        let pts: Vec<Vec<BigInt>> = points.iter().map(|p| p.iter().map(|&x| BigInt::from(x)).collect()).collect();
        Self::hull(&pts)
    }

    pub fn vertices(&self) -> &[Vec<BigInt>] {
        &self.geometry.points
    }

    /// Vertex coordinates as `i64`; fails only for enormous coordinates.
    pub fn vertices_i64(&self) -> Result<Vec<Vec<i64>>> {
        self.vertices().iter().map(|v| v.iter().map(to_i64).collect()).collect()
    }

    /// Normalized volume, an integer for lattice polytopes.
    pub fn normalized_volume(&self) -> BigInt {
        self.rational_volume().to_integer()
    }

    /// The `r`-dilation. `r = 0` collapses to a point, which is not a
    /// full-dimensional polytope and is reported as degenerate; use
    /// [`LatticePolytope::dilation_point_count`] for Ehrhart-style counting.
    pub fn dilate(&self, r: i64) -> Result<Self> {
        if r < 0 {
            return Err(Error::NegativeDilation(r));
        }
        if r == 0 {
            return Err(Error::Degenerate);
        }
        let r = BigInt::from(r);
        let pts: Vec<Vec<BigInt>> = self.vertices().iter().map(|p| p.iter().map(|x| x * &r).collect()).collect();
        Self::hull(&pts)
    }

    /// Number of lattice points of the `k`-th dilation, with `L(0) = 1`.
    pub fn dilation_point_count(&self, k: i64) -> Result<usize> {
        match k {
            0 => Ok(1),
            _ => Ok(self.dilate(k)?.lattice_points().len()),
        }
    }

    /// Image of the polytope under the linear map `m` (acting on columns).
    pub fn transform(&self, m: &IntMatrix) -> Result<Self> {
        let pts: Vec<Vec<BigInt>> = self.vertices().iter().map(|v| m.apply(v)).collect::<Result<_>>()?;
        Self::hull(&pts)
    }

    /// Origin strictly interior and every vertex primitive.
    pub fn is_fano(&self) -> bool {
        self.contains_origin_interior() && self.vertices().iter().all(|v| is_primitive(v).unwrap_or(false))
    }

    /// Fano with the origin as the only interior lattice point.
    pub fn is_canonical_fano(&self) -> bool {
        self.is_fano() && {
            let interior = self.interior_lattice_points();
            interior.len() == 1 && interior[0].iter().all(Zero::is_zero)
        }
    }

    /// Smallest `r > 0` with `r P°` a lattice polytope: the lcm of all
    /// denominators of the dual vertices.
    pub fn gorenstein_index(&self) -> Result<BigInt> {
        if !self.is_fano() {
            return Err(Error::NotFano);
        }
        let dual = self.dual()?;
        Ok(lcm_all(dual.vertices().iter().flatten().map(|x| x.denom())))
    }

    /// Fano with Gorenstein index 1.
    pub fn is_reflexive(&self) -> bool {
        self.gorenstein_index().is_ok_and(|r| r.is_one())
    }

    /// Whether the vertices generate `Z^d`, and the sublattice index otherwise.
    pub fn vertex_lattice_index(&self) -> BigInt {
        let v = IntMatrix::from_columns(self.vertices()).expect("rectangular");
        crate::lattice::column_lattice_index(&v).unwrap_or_else(BigInt::zero)
    }
}

impl fmt::Debug for LatticePolytope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LatticePolytope").field("vertices", &self.vertices()).finish()
    }
}

/// Full-dimensional polytope with rational vertices, e.g. a polar dual.
#[derive(Clone, PartialEq, Eq)]
pub struct RationalPolytope {
    geometry: Geometry,
    vertices: Vec<Vec<BigRational>>,
}

impl Polytope for RationalPolytope {
    fn geometry(&self) -> &Geometry {
        &self.geometry
    }
}

impl RationalPolytope {
    pub fn hull(points: &[Vec<BigRational>]) -> Result<Self> {
        let scale = lcm_all(points.iter().flatten().map(|x| x.denom()));
        let scaled: Vec<Vec<BigInt>> = points
            .iter()
            .map(|p| p.iter().map(|x| (x * BigRational::from(scale.clone())).to_integer()).collect())
            .collect();
        let geometry = Geometry::from_scaled(&scaled, scale)?;
        // Re-derive the common denominator from the extreme points alone.
        let vertices = geometry.rational_vertices();
        let tight = lcm_all(vertices.iter().flatten().map(|x| x.denom()));
        let geometry = if tight != geometry.scale {
            let pts: Vec<Vec<BigInt>> = vertices
                .iter()
                .map(|p| p.iter().map(|x| (x * BigRational::from(tight.clone())).to_integer()).collect())
                .collect();
            Geometry::from_scaled(&pts, tight)?
        } else {
            geometry
        };
        Ok(Self { vertices, geometry })
    }

    pub fn from_lattice(p: &LatticePolytope) -> Self {
        Self { vertices: p.rational_vertices(), geometry: p.geometry.clone() }
    }

    pub fn vertices(&self) -> &[Vec<BigRational>] {
        &self.vertices
    }

    pub fn normalized_volume(&self) -> BigRational {
        self.rational_volume()
    }

    /// Whether every vertex is integral.
    pub fn is_lattice(&self) -> bool {
        self.geometry.scale.is_one()
    }

    /// The lattice polytope with the same vertices, if they are all integral.
    pub fn to_lattice(&self) -> Option<LatticePolytope> {
        self.is_lattice().then(|| LatticePolytope { geometry: self.geometry.clone() })
    }

    pub fn dilate(&self, r: i64) -> Result<Self> {
        if r < 0 {
            return Err(Error::NegativeDilation(r));
        }
        if r == 0 {
            return Err(Error::Degenerate);
        }
        let r = BigRational::from(BigInt::from(r));
        let pts: Vec<Vec<BigRational>> = self.vertices.iter().map(|p| p.iter().map(|x| x * &r).collect()).collect();
        Self::hull(&pts)
    }

    /// Common denominator of the vertex coordinates.
    pub fn denominator(&self) -> &BigInt {
        &self.geometry.scale
    }
}

impl fmt::Debug for RationalPolytope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v: Vec<Vec<String>> = self.vertices.iter().map(|p| p.iter().map(ToString::to_string).collect()).collect();
        f.debug_struct("RationalPolytope").field("vertices", &v).finish()
    }
}

fn det_rational(rows: &[Vec<BigRational>]) -> BigRational {
    match rows.len() {
        2 => &rows[0][0] * &rows[1][1] - &rows[0][1] * &rows[1][0],
        3 => {
            let r = rows;
            &r[0][0] * (&r[1][1] * &r[2][2] - &r[1][2] * &r[2][1])
                - &r[0][1] * (&r[1][0] * &r[2][2] - &r[1][2] * &r[2][0])
                + &r[0][2] * (&r[1][0] * &r[2][1] - &r[1][1] * &r[2][0])
        }
        _ => unreachable!("dimensions 2 and 3 only"),
    }
}

/// Convex hull of integer points.
pub fn hull(points: &[Vec<BigInt>]) -> Result<LatticePolytope> {
    LatticePolytope::hull(points)
}

/// Polar dual of a lattice polytope with the origin in its interior.
pub fn dual_polytope(p: &LatticePolytope) -> Result<RationalPolytope> {
    p.dual()
}

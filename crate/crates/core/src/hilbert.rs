//! Hilbert bases of the graded cone over the polar dual, and codimension.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::lattice::{determinant, hermite_normal_form, lcm_all, primitive_part, IntMatrix};
use crate::polytope::{LatticePolytope, Polytope};

/// Rational cone in `Z^(d+1)` graded by the last coordinate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedCone {
    pub dim: usize,
    /// Primitive ray generators.
    pub generators: Vec<Vec<BigInt>>,
    /// Membership is `u . x >= 0` for every `u` here.
    pub facet_normals: Vec<Vec<BigInt>>,
    /// Simplicial subcones covering the cone, as generator indices.
    simplices: Vec<Vec<usize>>,
}

impl GradedCone {
    pub fn contains(&self, x: &[BigInt]) -> bool {
        self.facet_normals.iter().all(|u| !dot(u, x).is_negative())
    }

    pub fn degree(x: &[BigInt]) -> &BigInt {
        x.last().expect("non-empty")
    }
}

/// Minimal generating set of the cone's lattice points, sorted
/// lexicographically; the degree of an element is its last coordinate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HilbertBasis {
    pub elements: Vec<Vec<BigInt>>,
}

impl HilbertBasis {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn degrees(&self) -> Vec<BigInt> {
        self.elements.iter().map(|x| GradedCone::degree(x).clone()).collect()
    }
}

fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// The cone spanned by `(v, 1)` for the vertices `v` of the polar dual.
pub fn cone_over_dual(p: &LatticePolytope) -> Result<GradedCone> {
    if !p.is_fano() {
        return Err(Error::NotFano);
    }
    let dual = p.dual()?;
    let generators: Vec<Vec<BigInt>> = dual
        .vertices()
        .iter()
        .map(|v| {
            let den = lcm_all(v.iter().map(|x| x.denom()));
            let mut g: Vec<BigInt> = v.iter().map(|x| (x * &den).numer().clone()).collect();
            g.push(den);
            primitive_part(&g)
        })
        .collect();
    // Facets of the dual correspond to vertices of P.
    let facet_normals = p
        .vertices()
        .iter()
        .map(|v| {
            let mut u = v.clone();
            u.push(BigInt::from(1));
            u
        })
        .collect();
    Ok(GradedCone { dim: p.dim() + 1, generators, facet_normals, simplices: dual.triangulation() })
}

/// Hilbert basis via fundamental parallelepipeds of a triangulation.
///
/// Every irreducible lattice point of the cone is a ray generator or lies in
/// the half-open fundamental parallelepiped of some simplicial subcone. The
/// candidates are reduced in ascending degree: `x` is kept iff no kept `y`
/// has `x - y` in the cone.
pub fn hilbert_basis(cone: &GradedCone) -> Result<HilbertBasis> {
    if cone.generators.iter().any(|g| !GradedCone::degree(g).is_positive()) {
        return Err(Error::NotPointed);
    }
    let mut candidates: BTreeSet<(BigInt, Vec<BigInt>)> = BTreeSet::new();
    for g in &cone.generators {
        candidates.insert((GradedCone::degree(g).clone(), g.clone()));
    }
    for simplex in &cone.simplices {
        let gens: Vec<Vec<BigInt>> = simplex.iter().map(|&i| cone.generators[i].clone()).collect();
        for x in parallelepiped_points(&gens)? {
            candidates.insert((GradedCone::degree(&x).clone(), x));
        }
    }
    Ok(HilbertBasis { elements: reduce(cone, candidates.into_iter().map(|(_, x)| x)) })
}

/// Irreducible elements of a candidate list given in ascending degree.
fn reduce(cone: &GradedCone, sorted: impl Iterator<Item = Vec<BigInt>>) -> Vec<Vec<BigInt>> {
    let mut kept: Vec<Vec<BigInt>> = Vec::new();
    for x in sorted {
        let reducible = kept.iter().any(|y| {
            GradedCone::degree(y) < GradedCone::degree(&x) && {
                let diff: Vec<BigInt> = x.iter().zip(y).map(|(a, b)| a - b).collect();
                cone.contains(&diff)
            }
        });
        if !reducible {
            kept.push(x);
        }
    }
    kept.sort();
    kept
}

/// Non-zero lattice points `sum l_i g_i` with `0 <= l_i < 1`.
fn parallelepiped_points(gens: &[Vec<BigInt>]) -> Result<Vec<Vec<BigInt>>> {
    let g = IntMatrix::from_rows(gens)?;
    let det = determinant(&g)?;
    if det.is_zero() {
        return Err(Error::Internal("degenerate simplicial cone".into()));
    }
    let m = g.rows();
    let abs_det = det.abs();
    // Adjugate scaled so that x * adj / |det| = x * G^-1.
    let inv_num = signed_adjugate(&g, &det);
    let (h, _) = hermite_normal_form(&g)?;
    let diag: Vec<BigInt> = (0..m).map(|i| h[(i, i)].clone()).collect();
    let mut out = Vec::new();
    let mut x = vec![BigInt::zero(); m];
    loop {
        if x.iter().any(|c| !c.is_zero()) {
            // Coefficients of x in the generator basis, reduced mod 1.
            let point: Vec<BigInt> = {
                let r: Vec<BigInt> = (0..m)
                    .map(|j| {
                        let mu: BigInt = (0..m).map(|i| &x[i] * &inv_num[(i, j)]).sum();
                        num_integer::Integer::mod_floor(&mu, &abs_det)
                    })
                    .collect();
                (0..m)
                    .map(|k| {
                        let s: BigInt = (0..m).map(|j| &r[j] * &gens[j][k]).sum();
                        s / &abs_det
                    })
                    .collect()
            };
            if point.iter().any(|c| !c.is_zero()) {
                out.push(point);
            }
        }
        let mut k = m;
        loop {
            if k == 0 {
                return Ok(out);
            }
            k -= 1;
            x[k] += 1;
            if x[k] < diag[k] {
                break;
            }
            x[k] = BigInt::zero();
        }
    }
}

/// `adj(G) * sign(det)`, so that `G^-1 = result / |det|`.
fn signed_adjugate(g: &IntMatrix, det: &BigInt) -> IntMatrix {
    let n = g.rows();
    let mut adj = IntMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let rows: Vec<Vec<BigInt>> = (0..n)
                .filter(|&r| r != j)
                .map(|r| (0..n).filter(|&c| c != i).map(|c| g[(r, c)].clone()).collect())
                .collect();
            let minor = if rows.is_empty() {
                BigInt::from(1)
            } else {
                determinant(&IntMatrix::from_rows(&rows).expect("square")).expect("square")
            };
            let cof = if (i + j) % 2 == 0 { minor } else { -minor };
            adj[(i, j)] = if det.is_negative() { -cof } else { cof };
        }
    }
    adj
}

/// `|HB| - dim(P) - 1` for the cone over the polar dual.
pub fn codimension(p: &LatticePolytope) -> Result<usize> {
    let hb = hilbert_basis(&cone_over_dual(p)?)?;
    Ok(hb.len() - p.dim() - 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::is_unimodular_equivalent;
    use num_rational::BigRational;
    use num_traits::ToPrimitive;
    use proptest::prelude::*;

    fn poly(v: &[[i64; 2]]) -> LatticePolytope {
        LatticePolytope::from_i64(&v.iter().map(|p| p.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn pentagon() -> LatticePolytope {
        poly(&[[1, 0], [0, -1], [-1, -1], [-1, 0], [0, 1]])
    }

    fn dual_pentagon() -> LatticePolytope {
        poly(&[[1, 0], [1, -1], [0, -1], [-1, 0], [-1, 2]])
    }

    fn triangle() -> LatticePolytope {
        poly(&[[1, 0], [0, 1], [-1, -1]])
    }

    /// All cone lattice points of degree `1..=D`, from the dilated slices of
    /// the dual, ordered by degree then lexicographically.
    fn slab(p: &LatticePolytope, cone: &GradedCone) -> Vec<Vec<BigInt>> {
        let bound: i64 = cone.generators.iter().map(|g| GradedCone::degree(g).to_i64().unwrap()).sum();
        let dual = p.dual().unwrap();
        let mut out = Vec::new();
        for k in 1..=bound {
            let mut slice = dual.dilate(k).unwrap().lattice_points();
            slice.sort();
            for mut x in slice {
                x.push(BigInt::from(k));
                out.push(x);
            }
        }
        out
    }

    /// Slab enumeration followed by the irreducibility filter against all
    /// lower-degree cone points.
    fn slab_oracle(p: &LatticePolytope) -> Vec<Vec<BigInt>> {
        let cone = cone_over_dual(p).unwrap();
        let pts = slab(p, &cone);
        let mut hb: Vec<Vec<BigInt>> = pts
            .iter()
            .filter(|x| {
                !pts.iter().any(|y| {
                    GradedCone::degree(y) < GradedCone::degree(x) && {
                        let diff: Vec<BigInt> = x.iter().zip(y.iter()).map(|(a, b)| a - b).collect();
                        cone.contains(&diff)
                    }
                })
            })
            .cloned()
            .collect();
        hb.sort();
        hb
    }

    /// Whether every slab point is a non-negative combination of the basis,
    /// by dynamic programming over the slab in ascending degree.
    fn generates(p: &LatticePolytope, basis: &[Vec<BigInt>]) -> bool {
        let cone = cone_over_dual(p).unwrap();
        let pts = slab(p, &cone);
        let mut reachable: BTreeSet<Vec<BigInt>> = BTreeSet::new();
        reachable.insert(vec![BigInt::zero(); cone.dim]);
        for x in &pts {
            let ok = basis.iter().any(|b| {
                let diff: Vec<BigInt> = x.iter().zip(b).map(|(a, c)| a - c).collect();
                reachable.contains(&diff)
            });
            if !ok {
                return false;
            }
            reachable.insert(x.clone());
        }
        true
    }

    #[test]
    fn cone_examples() {
        let c = cone_over_dual(&pentagon()).unwrap();
        assert_eq!(c.generators.len(), 5);
        assert!(c.generators.iter().all(|g| g[2] == BigInt::from(1)));

        let c = cone_over_dual(&triangle()).unwrap();
        let mut g = c.generators.clone();
        g.sort();
        assert_eq!(g, vec![ints(&[-1, -1, 1]), ints(&[-1, 2, 1]), ints(&[2, -1, 1])]);

        assert!(matches!(cone_over_dual(&poly(&[[2, 0], [0, 2], [-2, -2]])), Err(Error::NotFano)));
    }

    #[test]
    fn rational_dual_generators_are_primitive() {
        // dual vertices (1,0), (-1,-2/3), (-1,2/3)
        let c = cone_over_dual(&poly(&[[1, 0], [-1, 3], [-1, -3]])).unwrap();
        let mut g = c.generators.clone();
        g.sort();
        assert_eq!(g, vec![ints(&[-3, -2, 3]), ints(&[-3, 2, 3]), ints(&[1, 0, 1])]);
        for x in &g {
            assert!(c.contains(x));
        }
    }

    #[test]
    fn basis_examples() {
        let hb = hilbert_basis(&cone_over_dual(&dual_pentagon()).unwrap()).unwrap();
        assert_eq!(hb.len(), 6);
        let hb = hilbert_basis(&cone_over_dual(&pentagon()).unwrap()).unwrap();
        assert_eq!(hb.len(), 8);
        assert!(hb.degrees().iter().all(|d| *d == BigInt::from(1)));
        // the dual triangle has 10 lattice points, all of degree 1
        let hb = hilbert_basis(&cone_over_dual(&triangle()).unwrap()).unwrap();
        assert_eq!(hb.len(), 10);
        assert!(hb.elements.contains(&ints(&[0, 0, 1])));
        let big = poly(&[[-1, -1], [2, -1], [-1, 2]]);
        let hb = hilbert_basis(&cone_over_dual(&big).unwrap()).unwrap();
        assert_eq!(hb.elements, vec![ints(&[-1, -1, 1]), ints(&[0, 0, 1]), ints(&[0, 1, 1]), ints(&[1, 0, 1])]);
    }

    #[test]
    fn codimension_examples() {
        assert_eq!(codimension(&pentagon()).unwrap(), 5);
        assert_eq!(codimension(&dual_pentagon()).unwrap(), 3);
        assert_eq!(codimension(&triangle()).unwrap(), 7);
        assert_eq!(codimension(&poly(&[[-1, -1], [2, -1], [-1, 2]])).unwrap(), 1);
        assert!(codimension(&poly(&[[0, 0], [1, 0], [0, 1]])).is_err());
    }

    #[test]
    fn matches_slab_oracle() {
        for p in [
            pentagon(),
            dual_pentagon(),
            triangle(),
            poly(&[[1, 0], [-1, 3], [-1, -3]]),
            poly(&[[-3, -2], [-1, -2], [1, 1]]),
            poly(&[[2, 1], [-1, 1], [-1, -2], [1, -1]]),
        ] {
            let hb = hilbert_basis(&cone_over_dual(&p).unwrap()).unwrap();
            assert_eq!(hb.elements, slab_oracle(&p), "{p:?}");
            assert!(generates(&p, &hb.elements));
        }
    }

    #[test]
    fn three_dimensional_examples() {
        let oct = LatticePolytope::from_i64(&[
            vec![1, 0, 0],
            vec![-1, 0, 0],
            vec![0, 1, 0],
            vec![0, -1, 0],
            vec![0, 0, 1],
            vec![0, 0, -1],
        ])
        .unwrap();
        // dual is the cube [-1,1]^3 with 27 lattice points, all in degree 1
        let hb = hilbert_basis(&cone_over_dual(&oct).unwrap()).unwrap();
        assert_eq!(hb.len(), 27);
        assert_eq!(codimension(&oct).unwrap(), 23);

        let simplex =
            LatticePolytope::from_i64(&[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1], vec![-1, -1, -1]]).unwrap();
        let hb = hilbert_basis(&cone_over_dual(&simplex).unwrap()).unwrap();
        assert_eq!(hb.elements, slab_oracle(&simplex));
        assert_eq!(hb.len(), 35);
    }

    /// All reflexive polygons up to equivalence, by exhaustive search over
    /// primitive points in a small box.
    fn reflexive_polygons() -> Vec<LatticePolytope> {
        let pts: Vec<Vec<i64>> = (-2..=2)
            .flat_map(|x| (-2..=2).map(move |y| vec![x, y]))
            .filter(|p| num_integer::gcd(p[0], p[1]) == 1)
            .collect();
        let mut classes: Vec<LatticePolytope> = Vec::new();
        for k in 3..=6 {
            for subset in crate::pluecker::combinations(pts.len(), k) {
                let chosen: Vec<Vec<i64>> = subset.iter().map(|&i| pts[i].clone()).collect();
                let Ok(p) = LatticePolytope::from_i64(&chosen) else { continue };
                if p.num_vertices() != k || !p.is_reflexive() {
                    continue;
                }
                if !classes.iter().any(|q| is_unimodular_equivalent(q, &p).is_some()) {
                    classes.push(p);
                }
            }
        }
        classes
    }

    #[test]
    fn reflexive_polygons_are_degree_one_generated() {
        let classes = reflexive_polygons();
        assert_eq!(classes.len(), 16);
        for p in &classes {
            let hb = hilbert_basis(&cone_over_dual(p).unwrap()).unwrap();
            let mut slice: Vec<Vec<BigInt>> = p
                .dual()
                .unwrap()
                .lattice_points()
                .into_iter()
                .map(|mut x| {
                    x.push(BigInt::from(1));
                    x
                })
                .collect();
            slice.sort();
            assert_eq!(hb.elements, slice);
            // codimension is the number of boundary points of the dual minus 2
            let dual_points = p.dual().unwrap().lattice_points().len();
            assert_eq!(codimension(p).unwrap(), dual_points - 3);
        }
        let total: BigRational = classes.iter().map(|p| BigRational::from(p.normalized_volume())).sum();
        assert_eq!(total, BigRational::from(BigInt::from(16 * 6)));
    }

    fn arb_fano_polygon() -> impl Strategy<Value = LatticePolytope> {
        prop::collection::vec(prop::collection::vec(-3i64..=3, 2), 3..7).prop_filter_map("not Fano", |pts| {
            LatticePolytope::from_i64(&pts)
                .ok()
                .filter(|p| p.is_fano() && p.gorenstein_index().unwrap() <= BigInt::from(6))
        })
    }

    fn arb_unimodular() -> impl Strategy<Value = IntMatrix> {
        prop::collection::vec((0usize..2, -2i64..=2, any::<bool>()), 1..5).prop_map(|ops| {
            let mut m = IntMatrix::identity(2);
            for (i, c, neg) in ops {
                let j = 1 - i;
                for k in 0..2 {
                    let delta = &m[(j, k)] * BigInt::from(c);
                    m[(i, k)] += delta;
                }
                if neg {
                    for k in 0..2 {
                        let x = -m[(i, k)].clone();
                        m[(i, k)] = x;
                    }
                }
            }
            m
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn agrees_with_slab_oracle(p in arb_fano_polygon()) {
            let hb = hilbert_basis(&cone_over_dual(&p).unwrap()).unwrap();
            prop_assert_eq!(&hb.elements, &slab_oracle(&p));
            prop_assert!(generates(&p, &hb.elements));
        }

        #[test]
        fn codimension_is_invariant(p in arb_fano_polygon(), u in arb_unimodular()) {
            prop_assert_eq!(codimension(&p).unwrap(), codimension(&p.transform(&u).unwrap()).unwrap());
        }
    }
}

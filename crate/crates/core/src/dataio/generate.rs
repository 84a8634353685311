use std::collections::{BTreeSet, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polytope::{is_unimodular_equivalent, LatticePolytope, Polytope};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneratorConfig {
    pub dim: usize,
    pub count: usize,
    pub max_coord: i64,
    /// Upper bound on the Gorenstein index (2d only).
    pub max_gorenstein: u64,
    pub seed: u64,
    /// Keep only polytopes with one of these vertex counts.
    pub vertex_counts: Option<Vec<usize>>,
    /// Keep only reflexive (`Some(true)`) or non-reflexive polytopes.
    pub reflexive: Option<bool>,
    /// Consecutive rejected draws before giving up.
    pub max_failed_attempts: usize,
}

impl GeneratorConfig {
    pub fn polygons(count: usize, max_coord: i64, max_gorenstein: u64, seed: u64) -> Self {
        Self {
            dim: 2,
            count,
            max_coord,
            max_gorenstein,
            seed,
            vertex_counts: None,
            reflexive: None,
            max_failed_attempts: 200_000,
        }
    }

    pub fn canonical_3d(count: usize, max_coord: i64, seed: u64) -> Self {
        Self { dim: 3, max_gorenstein: u64::MAX, ..Self::polygons(count, max_coord, 0, seed) }
    }
}

/// Fano polygons whose vertices generate the lattice, pairwise inequivalent,
/// drawn as hulls of 3..=8 random primitive points.
pub fn generate_fano_polygons(
    count: usize,
    max_coord: i64,
    max_gorenstein: u64,
    seed: u64,
) -> Result<Vec<LatticePolytope>> {
    generate_with(&GeneratorConfig::polygons(count, max_coord, max_gorenstein, seed))
}

/// Canonical Fano 3-polytopes whose vertices generate the lattice, pairwise
/// inequivalent, drawn as hulls of 4..=8 random primitive points in a box
/// `[-r, r]^3` with `r` uniform in `1..=max_coord`.
pub fn generate_canonical_fano_3d(count: usize, max_coord: i64, seed: u64) -> Result<Vec<LatticePolytope>> {
    generate_with(&GeneratorConfig::canonical_3d(count, max_coord, seed))
}

/// Invariants shared by equivalent polytopes: vertex count, volume, lattice
/// point count, Gorenstein index and the sorted `|det|` of all `d`-subsets
/// of vertices.
type Key = (usize, BigInt, usize, BigInt, Vec<i64>);

fn subset_dets(p: &LatticePolytope) -> Vec<i64> {
    let v = p.vertices_i64().unwrap_or_default();
    let n = v.len();
    let mut dets = Vec::new();
    if p.dim() == 2 {
        for i in 0..n {
            for j in i + 1..n {
                dets.push((v[i][0] * v[j][1] - v[i][1] * v[j][0]).abs());
            }
        }
    } else {
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let (a, b, c) = (&v[i], &v[j], &v[k]);
                    let det = a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0])
                        + a[2] * (b[0] * c[1] - b[1] * c[0]);
                    dets.push(det.abs());
                }
            }
        }
    }
    dets.sort_unstable();
    dets
}

#[derive(Default)]
struct Rejections {
    hull: usize,
    vertex_count: usize,
    not_fano: usize,
    sublattice: usize,
    predicate: usize,
    duplicate: usize,
}

pub fn generate_with(config: &GeneratorConfig) -> Result<Vec<LatticePolytope>> {
    if config.count == 0 {
        return Err(Error::Config("count must be at least 1".into()));
    }
    if config.max_coord < 1 {
        return Err(Error::Config("max_coord must be at least 1".into()));
    }
    if config.dim != 2 && config.dim != 3 {
        return Err(Error::UnsupportedDimension(config.dim));
    }
    let d = config.dim;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut out: Vec<LatticePolytope> = Vec::new();
    let mut buckets: HashMap<Key, Vec<usize>> = HashMap::new();
    let mut failed = 0usize;
    let mut why = Rejections::default();
    let one = BigInt::one();
    while out.len() < config.count {
        if failed >= config.max_failed_attempts {
            return Err(Error::Starvation {
                attempts: failed,
                diagnostics: format!(
                    "{} accepted; rejected: {} degenerate, {} vertex count, {} not Fano, {} sublattice, {} predicate, {} duplicate",
                    out.len(),
                    why.hull,
                    why.vertex_count,
                    why.not_fano,
                    why.sublattice,
                    why.predicate,
                    why.duplicate
                ),
            });
        }
        failed += 1;
        let k = rng.random_range(d + 1..=8);
        let radius = if d == 3 { rng.random_range(1..=config.max_coord) } else { config.max_coord };
        let points: Vec<Vec<i64>> = (0..k).map(|_| primitive_point(&mut rng, d, radius)).collect();
        let Ok(p) = LatticePolytope::from_i64(&points) else {
            why.hull += 1;
            continue;
        };
        if config.vertex_counts.as_ref().is_some_and(|v| !v.contains(&p.num_vertices())) {
            why.vertex_count += 1;
            continue;
        }
        if !p.is_fano() {
            why.not_fano += 1;
            continue;
        }
        if p.vertex_lattice_index() != one {
            why.sublattice += 1;
            continue;
        }
        let gi = p.gorenstein_index()?;
        let accepted = match d {
            2 => gi <= BigInt::from(config.max_gorenstein),
            _ => p.is_canonical_fano(),
        } && config.reflexive.is_none_or(|r| r == (gi == one));
        if !accepted {
            why.predicate += 1;
            continue;
        }
        let key: Key = (p.num_vertices(), p.normalized_volume(), p.lattice_points().len(), gi, subset_dets(&p));
        let bucket = buckets.entry(key).or_default();
        if bucket.iter().any(|&i| is_unimodular_equivalent(&out[i], &p).is_some()) {
            why.duplicate += 1;
            continue;
        }
        bucket.push(out.len());
        out.push(p);
        failed = 0;
    }
    Ok(out)
}

fn primitive_point(rng: &mut ChaCha8Rng, d: usize, c: i64) -> Vec<i64> {
    loop {
        let v: Vec<i64> = (0..d).map(|_| rng.random_range(-c..=c)).collect();
        if v.iter().fold(0i64, |g, x| g.gcd(x)) == 1 {
            return v;
        }
    }
}

/// All reflexive polygons with vertices in `[-max_coord, max_coord]^2`, one
/// per equivalence class.
///
/// Walks closed counterclockwise chains of boundary points with
/// `det(w_j, w_{j+1}) = 1`, which is exactly the boundary of a reflexive polygon.
pub fn enumerate_reflexive_polygons(max_coord: i64) -> Result<Vec<LatticePolytope>> {
    if max_coord < 1 {
        return Err(Error::Config("max_coord must be at least 1".into()));
    }
    let c = max_coord;
    let box_points: Vec<(i64, i64)> =
        (-c..=c).flat_map(|x| (-c..=c).map(move |y| (x, y))).filter(|&p| p != (0, 0)).collect();
    let mut shapes: BTreeSet<Vec<Vec<i64>>> = BTreeSet::new();
    for &start in &box_points {
        let mut chain = vec![start];
        walk(&box_points, &mut chain, 0.0, &mut shapes);
    }
    let mut classes: Vec<LatticePolytope> = Vec::new();
    for verts in shapes {
        let p = LatticePolytope::from_i64(&verts)?;
        debug_assert!(p.is_reflexive());
        if !classes.iter().any(|q| is_unimodular_equivalent(q, &p).is_some()) {
            classes.push(p);
        }
    }
    Ok(classes)
}

fn cross(a: (i64, i64), b: (i64, i64)) -> i64 {
    a.0 * b.1 - a.1 * b.0
}

fn walk(points: &[(i64, i64)], chain: &mut Vec<(i64, i64)>, angle: f64, shapes: &mut BTreeSet<Vec<Vec<i64>>>) {
    let start = chain[0];
    let last = *chain.last().expect("nonempty chain");
    let angle_of = |a: (i64, i64), b: (i64, i64)| (cross(a, b) as f64).atan2((a.0 * b.0 + a.1 * b.1) as f64);
    let prev = (chain.len() >= 2).then(|| chain[chain.len() - 2]);
    let second = chain.get(1).copied();
    let turn_ok = |next: (i64, i64)| {
        prev.is_none_or(|prev| cross((last.0 - prev.0, last.1 - prev.1), (next.0 - last.0, next.1 - last.1)) >= 0)
    };
    for &next in points {
        if cross(last, next) != 1 || !turn_ok(next) {
            continue;
        }
        let total = angle + angle_of(last, next);
        if total > 2.0 * std::f64::consts::PI + 1e-9 {
            continue;
        }
        if next == start {
            let closes = second
                .is_some_and(|s| cross((start.0 - last.0, start.1 - last.1), (s.0 - start.0, s.1 - start.1)) >= 0);
            if closes && chain.len() >= 3 {
                let mut verts: Vec<Vec<i64>> = chain.iter().map(|&(x, y)| vec![x, y]).collect();
                verts.sort();
                shapes.insert(verts);
            }
            continue;
        }
        // the chain starts at its lexicographically smallest point
        if next < start || chain.contains(&next) {
            continue;
        }
        chain.push(next);
        walk(points, chain, total, shapes);
        chain.pop();
    }
}

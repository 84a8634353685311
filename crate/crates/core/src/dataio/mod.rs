//! Polytope corpora: generation, labeling, augmentation and file formats.

mod generate;
mod io;

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hilbert::codimension;
use crate::lattice::to_i64;
use crate::mlkit::{encode_plucker, encode_vertices, inverse_target, Dataset, Encoding};
use crate::pluecker::{identity_order, pluecker, sample_permutation_variants};
use crate::polytope::{LatticePolytope, Polytope};

pub use generate::{
    enumerate_reflexive_polygons, generate_canonical_fano_3d, generate_fano_polygons, generate_with, GeneratorConfig,
};
pub use io::{read_feature_csv, read_jsonl, write_feature_csv, write_jsonl};

/// The invariants predicted by the models.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Labels {
    pub volume: i64,
    pub dual_volume: BigRational,
    pub gorenstein_index: i64,
    /// Missing when labeling skipped the Hilbert basis.
    pub codimension: Option<usize>,
    pub reflexive: bool,
}

/// Which label a model is trained on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum LabelKind {
    Volume,
    DualVolume,
    GorensteinIndex,
    Codimension,
    Reflexive,
}

impl LabelKind {
    pub const ALL: [LabelKind; 5] = [
        LabelKind::Volume,
        LabelKind::DualVolume,
        LabelKind::GorensteinIndex,
        LabelKind::Codimension,
        LabelKind::Reflexive,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            LabelKind::Volume => "volume",
            LabelKind::DualVolume => "dual_volume",
            LabelKind::GorensteinIndex => "gorenstein_index",
            LabelKind::Codimension => "codimension",
            LabelKind::Reflexive => "reflexive",
        }
    }
}

impl fmt::Display for LabelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for LabelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        LabelKind::ALL.into_iter().find(|k| k.name() == s).ok_or_else(|| Error::Config(format!("unknown label {s:?}")))
    }
}

impl Labels {
    /// The label as a float; rationals are converted at this point.
    pub fn value(&self, kind: LabelKind) -> Result<f64> {
        Ok(match kind {
            LabelKind::Volume => self.volume as f64,
            LabelKind::DualVolume => self.dual_volume.to_f64().unwrap_or(f64::NAN),
            LabelKind::GorensteinIndex => self.gorenstein_index as f64,
            LabelKind::Codimension => {
                self.codimension.ok_or_else(|| Error::Config("record has no codimension label".into()))? as f64
            }
            LabelKind::Reflexive => f64::from(u8::from(self.reflexive)),
        })
    }
}

/// A polytope with an id, optional labels and zero or more Plücker vectors.
#[derive(Clone, Debug, PartialEq)]
pub struct PolytopeRecord {
    pub id: u64,
    pub polytope: LatticePolytope,
    pub labels: Option<Labels>,
    pub plucker: Vec<Vec<i64>>,
}

impl PolytopeRecord {
    pub fn new(id: u64, polytope: LatticePolytope) -> Self {
        Self { id, polytope, labels: None, plucker: Vec::new() }
    }
}

/// Volume, dual volume, Gorenstein index and reflexivity, without the
/// Hilbert basis.
pub fn label_basic(p: &LatticePolytope) -> Result<Labels> {
    if !p.is_fano() {
        return Err(Error::NotFano);
    }
    let gi = p.gorenstein_index()?;
    Ok(Labels {
        volume: to_i64(&p.normalized_volume())?,
        dual_volume: p.dual()?.normalized_volume(),
        gorenstein_index: to_i64(&gi)?,
        codimension: None,
        reflexive: gi == BigInt::from(1),
    })
}

/// All five labels. Requires a Fano polytope whose vertices generate the lattice.
pub fn label(p: &LatticePolytope) -> Result<Labels> {
    let index = p.vertex_lattice_index();
    if index != BigInt::from(1) {
        return Err(Error::NonSaturatedLattice(index));
    }
    let mut labels = label_basic(p)?;
    labels.codimension = Some(codimension(p)?);
    Ok(labels)
}

/// Labels every record in parallel; output order follows the input.
pub fn label_records(records: &mut [PolytopeRecord], with_codimension: bool) -> Result<()> {
    let labels: Vec<Result<Labels>> = records
        .par_iter()
        .map(|r| if with_codimension { label(&r.polytope) } else { label_basic(&r.polytope) })
        .collect();
    for (r, l) in records.iter_mut().zip(labels) {
        r.labels = Some(l?);
    }
    Ok(())
}

fn record_seed(seed: u64, id: u64) -> u64 {
    seed ^ id.wrapping_add(1).wrapping_mul(0x9e37_79b9_7f4a_7c15)
}

/// One row per distinct Plücker vector: at most `variants` per polytope,
/// labels copied. Rows keep the input order, variants in sampling order.
pub fn augment(records: &[PolytopeRecord], variants: usize, seed: u64) -> Result<Vec<PolytopeRecord>> {
    if variants == 0 {
        return Err(Error::Config("variant count must be at least 1".into()));
    }
    let expanded: Vec<Result<Vec<PolytopeRecord>>> = records
        .par_iter()
        .map(|r| {
            let coords = sample_permutation_variants(&r.polytope, variants, record_seed(seed, r.id))?;
            coords.iter().map(|c| Ok(PolytopeRecord { plucker: vec![c.to_i64()?], ..r.clone() })).collect()
        })
        .collect();
    let mut out = Vec::new();
    for rows in expanded {
        out.extend(rows?);
    }
    Ok(out)
}

/// Default number of Plücker variants per polytope in dimension `d`.
pub fn default_variants(d: usize) -> usize {
    if d == 2 {
        3
    } else {
        10
    }
}

/// Natural feature length of one row.
fn natural_len(r: &PolytopeRecord, coords: &[i64], encoding: Encoding) -> usize {
    match encoding {
        Encoding::Vertices => r.polytope.num_vertices() * r.polytope.dim(),
        e => e.natural_len(coords.len()),
    }
}

/// Feature rows for a model: one row per stored Plücker vector (or the
/// canonical-order vector when none is stored), grouped by record id.
///
/// With [`Encoding::InverseProblem`] the target is the withheld last
/// coordinate and `label` is the quantity appended to the input. Rows are
/// zero-padded to `pad_to`, or to the longest row when `None`; the length
/// used is returned alongside the data.
pub fn build_dataset(
    records: &[PolytopeRecord],
    encoding: Encoding,
    label: LabelKind,
    pad_to: Option<usize>,
) -> Result<(Dataset, usize)> {
    let mut rows: Vec<(&PolytopeRecord, Vec<i64>)> = Vec::new();
    for r in records {
        if r.plucker.is_empty() {
            rows.push((r, pluecker(&r.polytope, &identity_order(&r.polytope))?.to_i64()?));
        } else {
            rows.extend(r.plucker.iter().map(|c| (r, c.clone())));
        }
    }
    let width = match pad_to {
        Some(w) => w,
        None => rows.iter().map(|(r, c)| natural_len(r, c, encoding)).max().unwrap_or(0),
    };
    let mut features = Vec::with_capacity(rows.len());
    let mut labels = Vec::with_capacity(rows.len());
    let mut groups = Vec::with_capacity(rows.len());
    for (r, coords) in rows {
        let value =
            r.labels.as_ref().ok_or_else(|| Error::Config(format!("record {} has no labels", r.id)))?.value(label)?;
        let (x, y) = match encoding {
            Encoding::Vertices => (encode_vertices(&r.polytope.vertices_i64()?, width)?, value),
            Encoding::InverseProblem => (
                encode_plucker(&coords, encoding, width, value)?,
                inverse_target(&coords).ok_or_else(|| Error::Encoding("empty Plücker vector".into()))?,
            ),
            e => (encode_plucker(&coords, e, width, 0.0)?, value),
        };
        features.push(x);
        labels.push(y);
        groups.push(r.id);
    }
    Ok((Dataset::with_groups(features, labels, groups)?, width))
}

#[cfg(test)]
mod tests;

use std::io::{BufRead, Write};

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::{Labels, PolytopeRecord};
use crate::error::{Error, Result};
use crate::mlkit::Dataset;
use crate::polytope::{LatticePolytope, Polytope};

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LabelsLine {
    volume: i64,
    dual_volume: String,
    gorenstein_index: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    codimension: Option<usize>,
    reflexive: bool,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RecordLine {
    id: u64,
    vertices: Vec<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    labels: Option<LabelsLine>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    plucker: Vec<Vec<i64>>,
}

/// One JSON object per line: `id`, `vertices`, and optionally `labels` and
/// `plucker`. The dual volume is written as an exact `"p/q"` string.
pub fn write_jsonl<W: Write>(out: W, records: &[PolytopeRecord]) -> Result<()> {
    let mut w = std::io::BufWriter::new(out);
    for r in records {
        let line = RecordLine {
            id: r.id,
            vertices: r.polytope.vertices_i64()?,
            labels: r.labels.as_ref().map(|l| LabelsLine {
                volume: l.volume,
                dual_volume: l.dual_volume.to_string(),
                gorenstein_index: l.gorenstein_index,
                codimension: l.codimension,
                reflexive: l.reflexive,
            }),
            plucker: r.plucker.clone(),
        };
        serde_json::to_writer(&mut w, &line).map_err(|e| Error::Internal(e.to_string()))?;
        writeln!(w)?;
    }
    w.flush()?;
    Ok(())
}

fn is_config_line(text: &str) -> bool {
    matches!(serde_json::from_str(text), Ok(serde_json::Value::Object(m)) if m.len() == 1 && m.contains_key("config"))
}

/// Reads [`write_jsonl`] output. Blank lines and `{"config": ...}` header
/// lines are skipped; errors name the 1-based line.
pub fn read_jsonl<R: BufRead>(input: R) -> Result<Vec<PolytopeRecord>> {
    let mut out = Vec::new();
    let mut dim: Option<usize> = None;
    for (i, line) in input.lines().enumerate() {
        let line_no = i + 1;
        let text = line?;
        if text.trim().is_empty() {
            continue;
        }
        let err = |msg: String| Error::Parse { line: line_no, msg };
        if is_config_line(&text) {
            continue;
        }
        let raw: RecordLine = serde_json::from_str(&text).map_err(|e| err(e.to_string()))?;
        let arity = raw.vertices.first().map_or(0, Vec::len);
        if let Some((k, row)) = raw.vertices.iter().enumerate().find(|(_, r)| r.len() != arity) {
            return Err(err(format!("vertex {k} has {} coordinates, expected {arity}", row.len())));
        }
        if *dim.get_or_insert(arity) != arity {
            return Err(err(format!("dimension {arity} differs from earlier records ({})", dim.unwrap_or(0))));
        }
        let polytope = LatticePolytope::from_i64(&raw.vertices).map_err(|e| err(e.to_string()))?;
        if polytope.num_vertices() != raw.vertices.len() {
            return Err(err("listed points are not all vertices".into()));
        }
        let labels = raw
            .labels
            .map(|l| -> Result<Labels> {
                let dual_volume: BigRational =
                    l.dual_volume.parse().map_err(|_| err(format!("bad rational {:?}", l.dual_volume)))?;
                Ok(Labels {
                    volume: l.volume,
                    dual_volume,
                    gorenstein_index: l.gorenstein_index,
                    codimension: l.codimension,
                    reflexive: l.reflexive,
                })
            })
            .transpose()?;
        out.push(PolytopeRecord { id: raw.id, polytope, labels, plucker: raw.plucker });
    }
    Ok(out)
}

/// Feature table with header `feature_0,...,feature_{L-1},label`.
pub fn write_feature_csv<W: Write>(out: W, data: &Dataset) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header: Vec<String> = (0..data.dim()).map(|i| format!("feature_{i}")).collect();
    header.push("label".into());
    w.write_record(&header).map_err(csv_error)?;
    for (row, y) in data.features.iter().zip(&data.labels) {
        let mut fields: Vec<String> = row.iter().map(f64::to_string).collect();
        fields.push(y.to_string());
        w.write_record(&fields).map_err(csv_error)?;
    }
    w.flush()?;
    Ok(())
}

fn csv_error(e: csv::Error) -> Error {
    let line = e.position().map_or(0, |p| p.line() as usize);
    Error::Parse { line, msg: e.to_string() }
}

/// Reads [`write_feature_csv`] output; each row becomes its own group.
/// Lines starting with `#` are comments.
pub fn read_feature_csv<R: std::io::Read>(input: R) -> Result<Dataset> {
    let mut r = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(input);
    let header = r.headers().map_err(csv_error)?.clone();
    let l = header.len().saturating_sub(1);
    let expected = (0..l).map(|i| format!("feature_{i}")).chain(["label".to_string()]);
    if header.is_empty() || !header.iter().eq(expected) {
        return Err(Error::Parse { line: 1, msg: "header must be feature_0,...,feature_{L-1},label".into() });
    }
    let mut features = Vec::new();
    let mut labels = Vec::new();
    for rec in r.records() {
        let rec = rec.map_err(csv_error)?;
        let line = rec.position().map_or(0, |p| p.line() as usize);
        let values: Vec<f64> = rec
            .iter()
            .map(|f| f.trim().parse::<f64>().map_err(|_| Error::Parse { line, msg: format!("bad number {f:?}") }))
            .collect::<Result<_>>()?;
        let (y, x) = values.split_last().expect("header has a label column");
        features.push(x.to_vec());
        labels.push(*y);
    }
    Dataset::new(features, labels)
}

//! Output files, each carrying the resolved run configuration.

use std::fs;
use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};
use latpoly::dataio::{write_jsonl, PolytopeRecord};

fn create_parent(path: &Path) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    Ok(())
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    create_parent(path)?;
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

/// JSONL records preceded by a `{"config": ...}` line.
pub fn write_records(path: &Path, config: &serde_json::Value, records: &[PolytopeRecord]) -> Result<()> {
    let mut buf = Vec::new();
    serde_json::to_writer(&mut buf, &serde_json::json!({ "config": config }))?;
    buf.push(b'\n');
    write_jsonl(&mut buf, records)?;
    create_parent(path)?;
    fs::write(path, buf).with_context(|| format!("writing {}", path.display()))
}

/// CSV preceded by a `# config: ...` comment line.
pub fn write_csv(path: &Path, config: &serde_json::Value, header: &[String], rows: &[Vec<String>]) -> Result<()> {
    let mut buf = Vec::new();
    writeln!(buf, "# config: {config}")?;
    {
        let mut w = csv::Writer::from_writer(&mut buf);
        w.write_record(header)?;
        for r in rows {
            w.write_record(r)?;
        }
        w.flush()?;
    }
    write_text(path, std::str::from_utf8(&buf)?)
}

/// Prefixes an existing serialization with `# config: ...`.
pub fn with_config_comment(config: &serde_json::Value, body: &[u8]) -> Result<String> {
    Ok(format!("# config: {config}\n{}", std::str::from_utf8(body)?))
}

/// Shortest round-tripping decimal.
pub fn num(x: f64) -> String {
    format!("{x}")
}

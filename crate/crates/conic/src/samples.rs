//! CSV output of sampled maps.

use std::path::Path;

use anyhow::{Context, Result};
use conic_core::ambient::AmbientPoint;
use conic_core::num::Pq;

/// One evaluated sample: input point, region label, output point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SampleRow {
    pub input: AmbientPoint,
    pub region: String,
    pub output: AmbientPoint,
}

impl SampleRow {
    pub fn new(input: AmbientPoint, region: String, output: AmbientPoint) -> Self {
        SampleRow {
            input,
            region,
            output,
        }
    }
}

/// Two columns per point. Planar points give `x, y`; cone and band points
/// give the base point and the level; vertices and poles give their name
/// and an empty level.
fn columns(p: &AmbientPoint) -> [String; 2] {
    match p {
        AmbientPoint::Plane(v) => [Pq(&v.x).to_string(), Pq(&v.y).to_string()],
        AmbientPoint::Ray { base, level } | AmbientPoint::Band { base, level } => {
            [base.to_string(), Pq(level).to_string()]
        }
        AmbientPoint::Apex => ["apex".into(), String::new()],
        AmbientPoint::North => ["north".into(), String::new()],
        AmbientPoint::South => ["south".into(), String::new()],
    }
}

fn header(rows: &[SampleRow]) -> [&'static str; 5] {
    if rows.iter().any(|r| matches!(r.input, AmbientPoint::Plane(_))) {
        ["in_x", "in_y", "region", "out_x", "out_y"]
    } else {
        ["in_base", "in_level", "region", "out_base", "out_level"]
    }
}

/// Writes `rows` with a header line to `out`, creating parent directories.
pub fn emit_samples(rows: &[SampleRow], out: &Path) -> Result<()> {
    if let Some(dir) = out.parent() {
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    let mut w = csv::Writer::from_path(out).with_context(|| format!("opening {}", out.display()))?;
    w.write_record(header(rows))?;
    for r in rows {
        let [a, b] = columns(&r.input);
        let [c, d] = columns(&r.output);
        w.write_record([a, b, r.region.clone(), c, d])?;
    }
    w.flush().with_context(|| format!("writing {}", out.display()))?;
    Ok(())
}

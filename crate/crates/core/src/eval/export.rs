//! Feature CSV export with a JSON sidecar describing how it was produced.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::config::ExperimentSettings;
use crate::descriptors::Descriptor;
use crate::error::{Error, Result};
use crate::eval::dataset::LabeledFrame;
use crate::eval::expression::Expression;
use crate::eval::report::csv_error;

pub const FEATURE_FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureSidecar {
    pub format_version: u32,
    pub descriptor: String,
    pub combination: Vec<Descriptor>,
    pub mirrored: bool,
    pub dims: usize,
    pub rows: usize,
    pub settings: ExperimentSettings,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FeatureRow {
    pub subject_id: String,
    pub sequence_id: String,
    pub frame_index: usize,
    pub label: Expression,
    pub values: Vec<f64>,
}

/// Nine significant digits.
fn format_value(v: f64) -> String {
    format!("{v:.8e}")
}

/// Writes `path` and `path` with a `.json` extension as sidecar.
pub fn write_feature_csv(
    path: &Path,
    frames: &[LabeledFrame],
    values: &[Vec<f64>],
    sidecar: &FeatureSidecar,
) -> Result<PathBuf> {
    if frames.len() != values.len() {
        return Err(Error::Shape(format!(
            "{} frames but {} feature rows",
            frames.len(),
            values.len()
        )));
    }
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
    }
    let mut w = csv::Writer::from_path(path).map_err(|e| csv_error(path, e))?;
    let mut header: Vec<String> = ["subject_id", "sequence_id", "frame_index", "label"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    header.extend((0..sidecar.dims).map(|i| format!("f{i}")));
    w.write_record(&header).map_err(|e| csv_error(path, e))?;
    for (f, v) in frames.iter().zip(values) {
        if v.len() != sidecar.dims {
            return Err(Error::Shape(format!("row of {} values, expected {}", v.len(), sidecar.dims)));
        }
        let mut rec = vec![
            f.subject_id.clone(),
            f.sequence_id.clone(),
            f.frame_index.to_string(),
            f.label.to_string(),
        ];
        rec.extend(v.iter().map(|x| format_value(*x)));
        w.write_record(&rec).map_err(|e| csv_error(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))?;
    let side = path.with_extension("json");
    let json = serde_json::to_string_pretty(sidecar)? + "\n";
    fs::write(&side, json).map_err(|e| Error::io(&side, e))?;
    Ok(side)
}

pub fn read_feature_csv(path: &Path) -> Result<Vec<FeatureRow>> {
    let mut r = csv::Reader::from_path(path).map_err(|e| csv_error(path, e))?;
    let mut rows = Vec::new();
    for rec in r.records() {
        let rec = rec.map_err(|e| csv_error(path, e))?;
        if rec.len() < 4 {
            return Err(Error::format(path, "fewer than four columns"));
        }
        let bad = |what: &str, s: &str| Error::format(path, format!("bad {what} `{s}`"));
        rows.push(FeatureRow {
            subject_id: rec[0].to_string(),
            sequence_id: rec[1].to_string(),
            frame_index: rec[2].parse().map_err(|_| bad("frame index", &rec[2]))?,
            label: Expression::parse_label(&rec[3]).ok_or_else(|| bad("label", &rec[3]))?,
            values: (4..rec.len())
                .map(|i| rec[i].parse::<f64>().map_err(|_| bad("value", &rec[i])))
                .collect::<Result<_>>()?,
        });
    }
    Ok(rows)
}

pub fn read_sidecar(path: &Path) -> Result<FeatureSidecar> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Ok(serde_json::from_str(&text)?)
}

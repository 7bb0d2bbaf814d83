//! Report files: JSON at full precision, text tables rounded to one decimal,
//! and a per-prediction CSV log.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::eval::experiment::{ExperimentReport, PredictionRecord, REPORT_FORMAT_VERSION};
use crate::eval::expression::Expression;
use crate::eval::metrics::round1;

fn pct(v: f64) -> String {
    format!("{:.1}", round1(v))
}

impl ExperimentReport {
    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let r: ExperimentReport = serde_json::from_str(text)?;
        if r.format_version != REPORT_FORMAT_VERSION {
            return Err(Error::Argument(format!(
                "unsupported report format version {}",
                r.format_version
            )));
        }
        Ok(r)
    }

    /// File stem used for this report, e.g. `lbp_hog_glcm`.
    pub fn file_stem(&self) -> String {
        self.name.to_ascii_lowercase().replace('+', "_")
    }

    /// Metrics, per-class accuracy and confusion counts.
    pub fn text_table(&self) -> String {
        let m = &self.metrics;
        let mut s = String::new();
        let _ = writeln!(
            s,
            "{}  ({} ROI, {} px blocks, {} folds, {} test images)\n",
            self.name,
            self.settings.roi.variant,
            self.settings.roi.block_size,
            self.folds.len(),
            self.predictions.len()
        );
        let _ = writeln!(s, "{:>8} {:>8} {:>8}", "Average", "Overall", "Min");
        let _ = writeln!(s, "{:>8} {:>8} {:>8}\n", pct(m.average_acc), pct(m.overall_acc), pct(m.min_acc));
        let _ = writeln!(s, "{:<10} {:>8} {:>9}", "class", "samples", "accuracy");
        for (e, recall) in self.classes.iter().zip(&m.recalls) {
            let n = self.confusion.row_total(e.index());
            let acc = recall.map_or_else(|| "-".to_string(), pct);
            let _ = writeln!(s, "{:<10} {:>8} {:>9}", e.name(), n, acc);
        }
        let _ = writeln!(s, "\nconfusion (rows true, columns predicted)");
        let _ = write!(s, "{:<10}", "");
        for e in &self.classes {
            let _ = write!(s, " {:>5}", &e.name()[..4.min(e.name().len())]);
        }
        s.push('\n');
        for e in &self.classes {
            let _ = write!(s, "{:<10}", e.name());
            for v in &self.confusion.counts[e.index()] {
                let _ = write!(s, " {v:>5}");
            }
            s.push('\n');
        }
        for w in &m.warnings {
            let _ = writeln!(s, "warning: {w}");
        }
        s
    }

    pub fn write_predictions_csv(&self, path: &Path) -> Result<()> {
        let mut w = csv::Writer::from_path(path).map_err(|e| csv_error(path, e))?;
        let mut header = vec!["subject_id", "sequence_id", "frame_index", "true", "predicted"];
        let vote_cols: Vec<String> = Expression::ALL.iter().map(|e| format!("votes_{e}")).collect();
        header.extend(vote_cols.iter().map(String::as_str));
        w.write_record(&header).map_err(|e| csv_error(path, e))?;
        for p in &self.predictions {
            let mut rec = vec![
                p.subject_id.clone(),
                p.sequence_id.clone(),
                p.frame_index.to_string(),
                p.truth.to_string(),
                p.predicted.to_string(),
            ];
            rec.extend(p.votes.iter().map(|v| v.to_string()));
            w.write_record(&rec).map_err(|e| csv_error(path, e))?;
        }
        w.flush().map_err(|e| Error::io(path, e))
    }

    /// Writes `<stem>.json`, `<stem>.txt` and `<stem>_predictions.csv`.
    pub fn save(&self, dir: &Path) -> Result<Vec<PathBuf>> {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        let stem = self.file_stem();
        let json = dir.join(format!("{stem}.json"));
        let text = dir.join(format!("{stem}.txt"));
        let csv = dir.join(format!("{stem}_predictions.csv"));
        fs::write(&json, self.to_json()?).map_err(|e| Error::io(&json, e))?;
        fs::write(&text, self.text_table()).map_err(|e| Error::io(&text, e))?;
        self.write_predictions_csv(&csv)?;
        Ok(vec![json, text, csv])
    }
}

pub(crate) fn csv_error(path: &Path, e: csv::Error) -> Error {
    Error::format(path, e.to_string())
}

/// Reads a prediction log written by [`ExperimentReport::write_predictions_csv`].
pub fn read_predictions_csv(path: &Path) -> Result<Vec<PredictionRecord>> {
    let mut r = csv::Reader::from_path(path).map_err(|e| csv_error(path, e))?;
    let mut out = Vec::new();
    for rec in r.records() {
        let rec = rec.map_err(|e| csv_error(path, e))?;
        if rec.len() != 5 + Expression::COUNT {
            return Err(Error::format(path, format!("expected {} columns", 5 + Expression::COUNT)));
        }
        let parse_expr = |s: &str| {
            s.parse::<Expression>()
                .map_err(|_| Error::format(path, format!("unknown class `{s}`")))
        };
        let parse_num = |s: &str| {
            s.parse::<usize>()
                .map_err(|_| Error::format(path, format!("not a count: `{s}`")))
        };
        out.push(PredictionRecord {
            subject_id: rec[0].to_string(),
            sequence_id: rec[1].to_string(),
            frame_index: parse_num(&rec[2])?,
            truth: parse_expr(&rec[3])?,
            predicted: parse_expr(&rec[4])?,
            votes: (5..rec.len()).map(|i| parse_num(&rec[i])).collect::<Result<_>>()?,
        });
    }
    Ok(out)
}

/// One row per report: average, overall and minimum accuracy.
pub fn summary_table(reports: &[ExperimentReport]) -> String {
    let width = reports.iter().map(|r| r.name.len()).max().unwrap_or(0).max(6);
    let mut s = format!("{:<width$} {:>8} {:>8} {:>8}\n", "Method", "Average", "Overall", "Min");
    for r in reports {
        let m = &r.metrics;
        let _ = writeln!(
            s,
            "{:<width$} {:>8} {:>8} {:>8}",
            r.name,
            pct(m.average_acc),
            pct(m.overall_acc),
            pct(m.min_acc)
        );
    }
    s
}

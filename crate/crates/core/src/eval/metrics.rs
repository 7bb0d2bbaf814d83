use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Square count matrix, rows = true class, columns = predicted class.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    pub counts: Vec<Vec<u64>>,
}

impl ConfusionMatrix {
    pub fn new(classes: usize) -> Self {
        ConfusionMatrix {
            counts: vec![vec![0; classes]; classes],
        }
    }

    pub fn from_rows(counts: Vec<Vec<u64>>) -> Result<Self> {
        let n = counts.len();
        if n == 0 || counts.iter().any(|r| r.len() != n) {
            return Err(Error::Shape("confusion matrix must be square and nonempty".into()));
        }
        Ok(ConfusionMatrix { counts })
    }

    pub fn classes(&self) -> usize {
        self.counts.len()
    }

    pub fn add(&mut self, truth: usize, predicted: usize) {
        self.counts[truth][predicted] += 1;
    }

    /// Element-wise sum; order of merging does not matter.
    pub fn merge(&mut self, other: &ConfusionMatrix) {
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            for (x, y) in a.iter_mut().zip(b) {
                *x += y;
            }
        }
    }

    pub fn row_total(&self, class: usize) -> u64 {
        self.counts[class].iter().sum()
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }

    pub fn trace(&self) -> u64 {
        (0..self.classes()).map(|i| self.counts[i][i]).sum()
    }
}

/// Accuracy summary, all values in percent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    /// Unweighted mean of per-class recalls.
    pub average_acc: f64,
    /// Correct predictions over all predictions.
    pub overall_acc: f64,
    /// Worst per-class recall.
    pub min_acc: f64,
    /// `None` for classes without test samples.
    pub recalls: Vec<Option<f64>>,
    pub warnings: Vec<String>,
}

/// Classes with an empty row are left out of `average_acc` and `min_acc`
/// with a warning. `class_names` is used only for the warning text.
pub fn compute_metrics(confusion: &ConfusionMatrix, class_names: &[&str]) -> Result<Metrics> {
    let total = confusion.total();
    if total == 0 {
        return Err(Error::Argument("confusion matrix has no samples".into()));
    }
    let mut warnings = Vec::new();
    let recalls: Vec<Option<f64>> = (0..confusion.classes())
        .map(|i| {
            let n = confusion.row_total(i);
            if n == 0 {
                let name = class_names.get(i).map_or_else(|| i.to_string(), |s| s.to_string());
                warnings.push(format!("class {name} has no test samples and is excluded"));
                None
            } else {
                Some(100.0 * confusion.counts[i][i] as f64 / n as f64)
            }
        })
        .collect();
    if !warnings.is_empty() {
        log::warn!("{} of {} classes have no test samples", warnings.len(), recalls.len());
    }
    let present: Vec<f64> = recalls.iter().flatten().copied().collect();
    Ok(Metrics {
        average_acc: present.iter().sum::<f64>() / present.len() as f64,
        overall_acc: 100.0 * confusion.trace() as f64 / total as f64,
        min_acc: present.iter().copied().fold(f64::INFINITY, f64::min),
        recalls,
        warnings,
    })
}

/// Half-away-from-zero rounding to one decimal, as used in the text tables.
pub fn round1(v: f64) -> f64 {
    (v * 10.0).round() / 10.0
}

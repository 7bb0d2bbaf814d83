use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Deviations below this are treated as constant dimensions.
pub const CONSTANT_DIM_THRESHOLD: f64 = 1e-12;

/// Per-dimension z-scoring fitted on a training set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Standardizer {
    pub mean: Vec<f64>,
    /// Population standard deviation, or 1 for constant dimensions.
    pub scale: Vec<f64>,
}

impl Standardizer {
    pub fn fit<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let first = rows
            .first()
            .ok_or_else(|| Error::Argument("cannot standardize an empty set".into()))?;
        let dims = first.as_ref().len();
        if let Some(bad) = rows.iter().find(|r| r.as_ref().len() != dims) {
            return Err(Error::Shape(format!(
                "rows of {dims} and {} dimensions",
                bad.as_ref().len()
            )));
        }
        let n = rows.len() as f64;
        let mut mean = vec![0.0; dims];
        for r in rows {
            for (m, v) in mean.iter_mut().zip(r.as_ref()) {
                *m += v;
            }
        }
        mean.iter_mut().for_each(|m| *m /= n);
        let mut var = vec![0.0; dims];
        for r in rows {
            for ((s, v), m) in var.iter_mut().zip(r.as_ref()).zip(&mean) {
                *s += (v - m) * (v - m);
            }
        }
        let scale = var
            .into_iter()
            .map(|s| {
                let sd = (s / n).sqrt();
                if sd < CONSTANT_DIM_THRESHOLD {
                    1.0
                } else {
                    sd
                }
            })
            .collect();
        Ok(Standardizer { mean, scale })
    }

    pub fn dims(&self) -> usize {
        self.mean.len()
    }

    pub fn apply(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.dims() {
            return Err(Error::Shape(format!(
                "vector of {} dimensions, standardizer expects {}",
                x.len(),
                self.dims()
            )));
        }
        Ok(x.iter()
            .zip(&self.mean)
            .zip(&self.scale)
            .map(|((v, m), s)| (v - m) / s)
            .collect())
    }
}

//! Linear soft-margin SVM trained by dual coordinate descent.
//!
//! Solves the hinge-loss problem
//!
//! ```text
//! min  1/2 (|w|^2 + b^2) + C sum_i max(0, 1 - y_i (w . x_i + b))
//! ```
//!
//! through its box-constrained dual, one coordinate at a time in a seeded
//! random order. The bias is handled as an extra constant feature, so it is
//! regularized together with `w`. Training stops once the duality gap drops
//! below `tol * max(1, primal)` or after `max_updates` coordinate visits.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SvmParams {
    pub c: f64,
    /// Relative duality-gap tolerance.
    pub tol: f64,
    /// Cap on single-coordinate updates.
    pub max_updates: u64,
    pub seed: u64,
}

impl Default for SvmParams {
    fn default() -> Self {
        SvmParams {
            c: 1.0,
            tol: 1e-4,
            max_updates: 1_000_000,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearModel {
    pub weights: Vec<f64>,
    pub bias: f64,
    /// `(positive, negative)` label names.
    pub labels: (String, String),
}

impl LinearModel {
    pub fn decision(&self, x: &[f64]) -> f64 {
        dot(&self.weights, x) + self.bias
    }
}

/// Objective values recorded after each pass over the data.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpochRecord {
    pub updates: u64,
    /// Dual objective in minimization form, `1/2 a'Qa - sum a`.
    pub dual_objective: f64,
    pub primal_objective: f64,
    pub gap: f64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct SolverTrace {
    pub epochs: Vec<EpochRecord>,
    pub converged: bool,
}

#[inline]
fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn train_binary<R: AsRef<[f64]>>(rows: &[R], y: &[f64], params: &SvmParams) -> Result<LinearModel> {
    train_binary_traced(rows, y, params).map(|(m, _)| m)
}

pub fn train_binary_traced<R: AsRef<[f64]>>(
    rows: &[R],
    y: &[f64],
    params: &SvmParams,
) -> Result<(LinearModel, SolverTrace)> {
    if !(params.c > 0.0) || !(params.tol > 0.0) || params.max_updates == 0 {
        return Err(Error::Argument(format!(
            "invalid solver parameters: C = {}, tol = {}, max_updates = {}",
            params.c, params.tol, params.max_updates
        )));
    }
    if rows.len() != y.len() {
        return Err(Error::Shape(format!(
            "{} samples but {} labels",
            rows.len(),
            y.len()
        )));
    }
    if let Some(bad) = y.iter().find(|v| **v != 1.0 && **v != -1.0) {
        return Err(Error::Argument(format!("binary labels must be +1 or -1, got {bad}")));
    }
    if !y.contains(&1.0) || !y.contains(&-1.0) {
        return Err(Error::DegenerateTraining(
            "binary training needs samples of both signs".into(),
        ));
    }
    let dims = rows[0].as_ref().len();
    if let Some(r) = rows.iter().find(|r| r.as_ref().len() != dims) {
        return Err(Error::Shape(format!(
            "rows of {dims} and {} dimensions",
            r.as_ref().len()
        )));
    }

    let n = rows.len();
    let c = params.c;
    let diag: Vec<f64> = rows.iter().map(|r| dot(r.as_ref(), r.as_ref()) + 1.0).collect();
    let mut alpha = vec![0.0; n];
    let mut w = vec![0.0; dims];
    let mut b = 0.0;
    let mut order: Vec<usize> = (0..n).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut trace = SolverTrace::default();
    let mut updates = 0u64;

    while updates < params.max_updates {
        order.shuffle(&mut rng);
        for &i in &order {
            if updates >= params.max_updates {
                break;
            }
            updates += 1;
            let x = rows[i].as_ref();
            let g = y[i] * (dot(&w, x) + b) - 1.0;
            let pg = if alpha[i] <= 0.0 {
                g.min(0.0)
            } else if alpha[i] >= c {
                g.max(0.0)
            } else {
                g
            };
            if pg.abs() > 1e-12 {
                let old = alpha[i];
                alpha[i] = (old - g / diag[i]).clamp(0.0, c);
                let step = (alpha[i] - old) * y[i];
                if step != 0.0 {
                    for (wj, xj) in w.iter_mut().zip(x) {
                        *wj += step * xj;
                    }
                    b += step;
                }
            }
        }

        let norm2 = dot(&w, &w) + b * b;
        let alpha_sum: f64 = alpha.iter().sum();
        let hinge: f64 = rows
            .iter()
            .zip(y)
            .map(|(r, yi)| (1.0 - yi * (dot(&w, r.as_ref()) + b)).max(0.0))
            .sum();
        let dual_objective = 0.5 * norm2 - alpha_sum;
        let primal_objective = 0.5 * norm2 + c * hinge;
        let gap = primal_objective + dual_objective;
        trace.epochs.push(EpochRecord {
            updates,
            dual_objective,
            primal_objective,
            gap,
        });
        if gap <= params.tol * primal_objective.abs().max(1.0) {
            trace.converged = true;
            break;
        }
    }

    Ok((
        LinearModel {
            weights: w,
            bias: b,
            labels: ("+1".into(), "-1".into()),
        },
        trace,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn accuracy(model: &LinearModel, rows: &[Vec<f64>], y: &[f64]) -> f64 {
        let hits = rows
            .iter()
            .zip(y)
            .filter(|(r, yi)| (model.decision(r) >= 0.0) == (**yi > 0.0))
            .count();
        hits as f64 / y.len() as f64
    }

    #[test]
    fn separable_pair() {
        let rows = vec![vec![-1.0], vec![1.0]];
        let y = [-1.0, 1.0];
        let (m, trace) = train_binary_traced(&rows, &y, &SvmParams::default()).unwrap();
        assert!(trace.converged);
        assert!(m.decision(&[1.0]) > 0.0);
        assert!(m.decision(&[-1.0]) < 0.0);
    }

    #[test]
    fn xor_cannot_exceed_three_quarters() {
        let rows = vec![vec![0.0, 0.0], vec![1.0, 1.0], vec![0.0, 1.0], vec![1.0, 0.0]];
        let y = [1.0, 1.0, -1.0, -1.0];
        let m = train_binary(&rows, &y, &SvmParams::default()).unwrap();
        assert!(accuracy(&m, &rows, &y) <= 0.75);
    }

    #[test]
    fn rejects_degenerate_inputs() {
        let rows = vec![vec![0.0], vec![1.0]];
        assert!(matches!(
            train_binary(&rows, &[1.0, 1.0], &SvmParams::default()),
            Err(Error::DegenerateTraining(_))
        ));
        assert!(train_binary(&rows, &[1.0, 0.0], &SvmParams::default()).is_err());
        assert!(train_binary(&rows, &[1.0], &SvmParams::default()).is_err());
        let bad = SvmParams {
            c: 0.0,
            ..SvmParams::default()
        };
        assert!(train_binary(&rows, &[1.0, -1.0], &bad).is_err());
    }

    #[test]
    fn dual_objective_never_increases() {
        // Overlapping classes keep the solver busy for many epochs.
        let rows: Vec<Vec<f64>> = (0..60)
            .map(|i| {
                let t = i as f64 * 0.7;
                vec![t.sin() * 2.0, (t * 1.3).cos() + if i % 2 == 0 { 0.4 } else { -0.4 }]
            })
            .collect();
        let y: Vec<f64> = (0..60).map(|i| if i % 2 == 0 { 1.0 } else { -1.0 }).collect();
        let params = SvmParams {
            c: 10.0,
            tol: 1e-9,
            ..SvmParams::default()
        };
        let (_, trace) = train_binary_traced(&rows, &y, &params).unwrap();
        assert!(trace.epochs.len() > 2);
        for pair in trace.epochs.windows(2) {
            let slack = 1e-10 * pair[0].dual_objective.abs().max(1.0);
            assert!(pair[1].dual_objective <= pair[0].dual_objective + slack);
        }
        assert!(trace.epochs.iter().all(|e| e.gap >= -1e-9));
    }

    #[test]
    fn scaling_inputs_keeps_training_signs() {
        let rows: Vec<Vec<f64>> = (0..20)
            .map(|i| {
                let s = if i < 10 { 1.0 } else { -1.0 };
                vec![s * (1.0 + 0.1 * i as f64), 0.3 * (i as f64).sin()]
            })
            .collect();
        let y: Vec<f64> = (0..20).map(|i| if i < 10 { 1.0 } else { -1.0 }).collect();
        let base = SvmParams::default();
        let m1 = train_binary(&rows, &y, &base).unwrap();
        let doubled: Vec<Vec<f64>> = rows.iter().map(|r| r.iter().map(|v| 2.0 * v).collect()).collect();
        let m2 = train_binary(&doubled, &y, &SvmParams { c: base.c / 4.0, ..base }).unwrap();
        for (r, d) in rows.iter().zip(&doubled) {
            assert_eq!(m1.decision(r) >= 0.0, m2.decision(d) >= 0.0);
        }
    }

    #[test]
    fn deterministic_for_fixed_seed() {
        let rows: Vec<Vec<f64>> = (0..30).map(|i| vec![(i as f64).cos(), (i as f64 * 0.3).sin()]).collect();
        let y: Vec<f64> = (0..30).map(|i| if (i as f64).cos() > 0.2 { 1.0 } else { -1.0 }).collect();
        let a = train_binary(&rows, &y, &SvmParams::default()).unwrap();
        let b = train_binary(&rows, &y, &SvmParams::default()).unwrap();
        assert_eq!(a, b);
    }
}

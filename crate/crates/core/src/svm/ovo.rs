//! One-vs-one multiclass wrapper around the binary solver.

use std::collections::BTreeSet;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::binary::{train_binary, LinearModel, SvmParams};
use super::standardize::Standardizer;
use crate::error::{Error, Result};

pub const MODEL_FORMAT_VERSION: u32 = 1;

/// Standardizer plus one linear model per unordered class pair `(i, j)`,
/// `i < j`, with class `i` on the positive side.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OvoModel {
    pub format_version: u32,
    /// Sorted class labels.
    pub classes: Vec<String>,
    pub standardizer: Standardizer,
    pub pairs: Vec<PairModel>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairModel {
    pub positive: usize,
    pub negative: usize,
    pub model: LinearModel,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Prediction {
    pub class: usize,
    /// Votes per class in `classes` order.
    pub votes: Vec<usize>,
    /// Sum of `|decision|` over the votes each class received.
    pub strength: Vec<f64>,
}

/// Seed of the `k`-th pair model, decorrelated from its neighbours.
fn pair_seed(seed: u64, k: usize) -> u64 {
    seed ^ (k as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

pub fn train_ovo<R, L>(rows: &[R], labels: &[L], params: &SvmParams) -> Result<OvoModel>
where
    R: AsRef<[f64]> + Sync,
    L: AsRef<str>,
{
    if rows.len() != labels.len() {
        return Err(Error::Shape(format!(
            "{} samples but {} labels",
            rows.len(),
            labels.len()
        )));
    }
    let classes: Vec<String> = labels
        .iter()
        .map(|l| l.as_ref().to_string())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    if classes.len() < 2 {
        return Err(Error::DegenerateTraining(format!(
            "need at least two classes, got {}",
            classes.len()
        )));
    }
    let standardizer = Standardizer::fit(rows)?;
    let z: Vec<Vec<f64>> = rows
        .iter()
        .map(|r| standardizer.apply(r.as_ref()))
        .collect::<Result<_>>()?;
    let class_of: Vec<usize> = labels
        .iter()
        .map(|l| classes.binary_search_by(|c| c.as_str().cmp(l.as_ref())).unwrap())
        .collect();

    let pairs: Vec<(usize, usize)> = (0..classes.len())
        .flat_map(|i| (i + 1..classes.len()).map(move |j| (i, j)))
        .collect();
    let models = pairs
        .par_iter()
        .enumerate()
        .map(|(k, &(i, j))| {
            let mut sub = Vec::new();
            let mut y = Vec::new();
            for (row, &c) in z.iter().zip(&class_of) {
                if c == i || c == j {
                    sub.push(row.as_slice());
                    y.push(if c == i { 1.0 } else { -1.0 });
                }
            }
            let p = SvmParams {
                seed: pair_seed(params.seed, k),
                ..*params
            };
            let mut model = train_binary(&sub, &y, &p)?;
            model.labels = (classes[i].clone(), classes[j].clone());
            Ok(PairModel {
                positive: i,
                negative: j,
                model,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(OvoModel {
        format_version: MODEL_FORMAT_VERSION,
        classes,
        standardizer,
        pairs: models,
    })
}

impl OvoModel {
    /// Builds a model from already-trained parts, checking consistency.
    pub fn from_parts(classes: Vec<String>, standardizer: Standardizer, pairs: Vec<PairModel>) -> Result<Self> {
        let model = OvoModel {
            format_version: MODEL_FORMAT_VERSION,
            classes,
            standardizer,
            pairs,
        };
        model.validate()?;
        Ok(model)
    }

    fn validate(&self) -> Result<()> {
        if self.format_version != MODEL_FORMAT_VERSION {
            return Err(Error::Argument(format!(
                "unsupported model format version {}",
                self.format_version
            )));
        }
        let k = self.classes.len();
        if k < 2 || self.pairs.len() != k * (k - 1) / 2 {
            return Err(Error::Shape(format!(
                "{} pair models for {k} classes",
                self.pairs.len()
            )));
        }
        let dims = self.standardizer.dims();
        for p in &self.pairs {
            if p.positive >= k || p.negative >= k || p.positive == p.negative {
                return Err(Error::Shape(format!(
                    "pair ({}, {}) out of range",
                    p.positive, p.negative
                )));
            }
            if p.model.weights.len() != dims {
                return Err(Error::Shape(format!(
                    "pair model of {} dimensions, standardizer has {dims}",
                    p.model.weights.len()
                )));
            }
        }
        Ok(())
    }

    pub fn dims(&self) -> usize {
        self.standardizer.dims()
    }

    pub fn predict(&self, x: &[f64]) -> Result<&str> {
        let p = self.predict_detailed(x)?;
        Ok(&self.classes[p.class])
    }

    /// Majority vote. Ties go to the larger summed `|decision|`, then to the
    /// earlier class.
    pub fn predict_detailed(&self, x: &[f64]) -> Result<Prediction> {
        let z = self.standardizer.apply(x)?;
        let decisions: Vec<f64> = self.pairs.iter().map(|p| p.model.decision(&z)).collect();
        Ok(self.vote(&decisions))
    }

    /// Voting step on precomputed pair decisions, in `pairs` order.
    pub fn vote(&self, decisions: &[f64]) -> Prediction {
        let k = self.classes.len();
        let mut votes = vec![0usize; k];
        let mut strength = vec![0.0; k];
        for (p, &d) in self.pairs.iter().zip(decisions) {
            let winner = if d >= 0.0 { p.positive } else { p.negative };
            votes[winner] += 1;
            strength[winner] += d.abs();
        }
        let mut class = 0;
        for c in 1..k {
            if votes[c] > votes[class] || (votes[c] == votes[class] && strength[c] > strength[class]) {
                class = c;
            }
        }
        Prediction {
            class,
            votes,
            strength,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let model: OvoModel = serde_json::from_str(text)?;
        model.validate()?;
        Ok(model)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()?).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn blobs(classes: usize, per_class: usize, seed: u64) -> (Vec<Vec<f64>>, Vec<String>) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut rows = Vec::new();
        let mut labels = Vec::new();
        for c in 0..classes {
            let angle = c as f64 * std::f64::consts::TAU / classes as f64;
            for _ in 0..per_class {
                rows.push(vec![
                    10.0 * angle.cos() + rng.gen_range(-1.0..1.0),
                    10.0 * angle.sin() + rng.gen_range(-1.0..1.0),
                    rng.gen_range(-1.0..1.0),
                ]);
                labels.push(format!("c{c}"));
            }
        }
        (rows, labels)
    }

    #[test]
    fn eight_classes_give_28_models() {
        let (rows, labels) = blobs(8, 10, 1);
        let m = train_ovo(&rows, &labels, &SvmParams::default()).unwrap();
        assert_eq!(m.pairs.len(), 28);
        assert_eq!(m.classes.len(), 8);
        let hits = rows
            .iter()
            .zip(&labels)
            .filter(|(r, l)| m.predict(r).unwrap() == l.as_str())
            .count();
        assert_eq!(hits, rows.len());
    }

    #[test]
    fn tie_break_by_strength_then_order() {
        let (rows, labels) = blobs(3, 5, 2);
        let m = train_ovo(&rows, &labels, &SvmParams::default()).unwrap();
        // Pairs are (0,1), (0,2), (1,2): a cyclic vote gives each class one.
        let p = m.vote(&[0.5, -2.0, 0.7]);
        assert_eq!(p.votes, vec![1, 1, 1]);
        assert_eq!(p.class, 2);
        let p = m.vote(&[1.0, -1.0, 1.0]);
        assert_eq!(p.votes, vec![1, 1, 1]);
        assert_eq!(p.class, 0);
        // Zero decision counts for the positive class.
        let p = m.vote(&[0.0, 0.0, 0.0]);
        assert_eq!(p.votes, vec![2, 1, 0]);
        assert_eq!(p.class, 0);
    }

    #[test]
    fn json_round_trip_and_validation() {
        let (rows, labels) = blobs(3, 6, 3);
        let m = train_ovo(&rows, &labels, &SvmParams::default()).unwrap();
        let back = OvoModel::from_json(&m.to_json().unwrap()).unwrap();
        assert_eq!(back, m);
        let mut broken = m.clone();
        broken.pairs.pop();
        assert!(OvoModel::from_json(&broken.to_json().unwrap()).is_err());
        let mut future = m.clone();
        future.format_version = 99;
        assert!(OvoModel::from_json(&future.to_json().unwrap()).is_err());
        assert!(OvoModel::from_parts(m.classes.clone(), m.standardizer.clone(), m.pairs.clone()).is_ok());
    }

    #[test]
    fn deterministic_and_single_class_rejected() {
        let (rows, labels) = blobs(4, 8, 4);
        let a = train_ovo(&rows, &labels, &SvmParams::default()).unwrap();
        let b = train_ovo(&rows, &labels, &SvmParams::default()).unwrap();
        assert_eq!(a, b);
        let one = vec!["x".to_string(); rows.len()];
        assert!(matches!(
            train_ovo(&rows, &one, &SvmParams::default()),
            Err(Error::DegenerateTraining(_))
        ));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn separable_with_margin_is_fit_exactly(seed in 0u64..1000, gap in 1.0f64..4.0) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut rows = Vec::new();
            let mut labels = Vec::new();
            for i in 0..30 {
                let side = if i % 2 == 0 { 1.0 } else { -1.0 };
                rows.push(vec![side * (gap + rng.gen_range(0.0..2.0)), rng.gen_range(-3.0..3.0)]);
                labels.push(if side > 0.0 { "pos" } else { "neg" });
            }
            let params = SvmParams { c: 100.0, ..SvmParams::default() };
            let m = train_ovo(&rows, &labels, &params).unwrap();
            for (r, l) in rows.iter().zip(&labels) {
                prop_assert_eq!(m.predict(r).unwrap(), *l);
            }
        }
    }
}

//! End-to-end runs: ROIs, cached features, parallel folds, pooled confusion.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{combination_name, validate_settings, Config, ExperimentSettings};
use crate::descriptors::{Descriptor, FeatureExtractor};
use crate::error::{Error, Result, ResultExt};
use crate::eval::dataset::{ingest_dataset, select_all, LabeledFrame};
use crate::eval::expression::Expression;
use crate::eval::metrics::{compute_metrics, ConfusionMatrix, Metrics};
use crate::eval::protocol::{loso_folds, Fold};
use crate::image::Image;
use crate::imgproc::{mirror_horizontal, preprocess_frame};
use crate::svm::train_ovo;

pub const REPORT_FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PredictionRecord {
    pub subject_id: String,
    pub sequence_id: String,
    pub frame_index: usize,
    pub truth: Expression,
    pub predicted: Expression,
    /// One-vs-one votes per class, in [`Expression::ALL`] order.
    pub votes: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FoldSummary {
    pub subject_id: String,
    pub train_samples: usize,
    pub test_samples: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub format_version: u32,
    pub name: String,
    pub combination: Vec<Descriptor>,
    pub settings: ExperimentSettings,
    pub classes: Vec<Expression>,
    pub folds: Vec<FoldSummary>,
    pub predictions: Vec<PredictionRecord>,
    pub confusion: ConfusionMatrix,
    pub metrics: Metrics,
}

/// Pooled confusion matrix of a prediction log.
pub fn confusion_from_predictions(predictions: &[PredictionRecord]) -> ConfusionMatrix {
    let mut m = ConfusionMatrix::new(Expression::COUNT);
    for p in predictions {
        m.add(p.truth.index(), p.predicted.index());
    }
    m
}

fn class_names() -> Vec<&'static str> {
    Expression::ALL.iter().map(|e| e.name()).collect()
}

fn frame_context(f: &LabeledFrame) -> String {
    format!(
        "subject {} sequence {} frame {} ({})",
        f.subject_id,
        f.sequence_id,
        f.frame_index,
        f.source.describe()
    )
}

/// Per-frame features of one descriptor, for the ROI and its mirror.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureTable {
    pub descriptor: Descriptor,
    pub original: Vec<Vec<f64>>,
    /// Present when training mirroring is enabled.
    pub mirrored: Option<Vec<Vec<f64>>>,
}

/// Holds the settings and filter banks shared by every stage of a run.
#[derive(Debug, Clone)]
pub struct Evaluator {
    settings: ExperimentSettings,
    extractor: FeatureExtractor,
}

impl Evaluator {
    pub fn new(settings: ExperimentSettings) -> Result<Self> {
        validate_settings(&settings)?;
        Ok(Evaluator {
            extractor: FeatureExtractor::new(settings.descriptors)?,
            settings,
        })
    }

    pub fn settings(&self) -> &ExperimentSettings {
        &self.settings
    }

    pub fn extractor(&self) -> &FeatureExtractor {
        &self.extractor
    }

    /// Normalized, equalized ROI of every frame, in input order.
    pub fn prepare_rois(&self, frames: &[LabeledFrame]) -> Result<Vec<Image>> {
        frames
            .par_iter()
            .map(|f| self.prepare_roi(f).context(|| frame_context(f)))
            .collect()
    }

    fn prepare_roi(&self, frame: &LabeledFrame) -> Result<Image> {
        let (img, landmarks) = frame.source.load()?;
        preprocess_frame(&img, &landmarks, &self.settings.roi, &self.settings.clahe)
    }

    pub fn features(&self, rois: &[Image], descriptor: Descriptor) -> Result<FeatureTable> {
        let spec = self.settings.roi;
        let one = |roi: &Image| self.extractor.extract(roi, descriptor, &spec).map(|f| f.values);
        let original = rois.par_iter().map(one).collect::<Result<Vec<_>>>()?;
        let mirrored = if self.settings.mirror_training {
            Some(
                rois.par_iter()
                    .map(|r| one(&mirror_horizontal(r)))
                    .collect::<Result<Vec<_>>>()?,
            )
        } else {
            None
        };
        Ok(FeatureTable {
            descriptor,
            original,
            mirrored,
        })
    }

    /// Runs every fold for one descriptor combination. `tables` must hold
    /// a table for each descriptor of the combination, aligned with `frames`.
    pub fn evaluate(
        &self,
        frames: &[LabeledFrame],
        tables: &BTreeMap<Descriptor, FeatureTable>,
        combination: &[Descriptor],
    ) -> Result<ExperimentReport> {
        let parts: Vec<&FeatureTable> = combination
            .iter()
            .map(|d| {
                tables
                    .get(d)
                    .ok_or_else(|| Error::Argument(format!("no features computed for {d}")))
            })
            .collect::<Result<_>>()?;
        if parts.iter().any(|t| t.original.len() != frames.len()) {
            return Err(Error::Shape("feature table does not match the frame list".into()));
        }
        let concat = |pick: &dyn Fn(&FeatureTable) -> Option<&Vec<Vec<f64>>>| -> Option<Vec<Vec<f64>>> {
            let cols: Vec<&Vec<Vec<f64>>> = parts.iter().map(|t| pick(t)).collect::<Option<_>>()?;
            Some(
                (0..frames.len())
                    .map(|i| cols.iter().flat_map(|c| c[i].iter().copied()).collect())
                    .collect(),
            )
        };
        let original = concat(&|t| Some(&t.original)).unwrap_or_default();
        let mirrored = if self.settings.mirror_training {
            Some(concat(&|t| t.mirrored.as_ref()).ok_or_else(|| {
                Error::Argument("mirroring is enabled but mirrored features are missing".into())
            })?)
        } else {
            None
        };

        let folds = loso_folds(frames);
        if folds.is_empty() {
            return Err(Error::DegenerateTraining(
                "no subject has a non-neutral frame, so there is nothing to test".into(),
            ));
        }
        let results = folds
            .par_iter()
            .enumerate()
            .map(|(k, fold)| {
                self.run_fold(k, fold, frames, &original, mirrored.as_deref())
                    .context(|| format!("fold {} (test subject {})", k + 1, fold.subject_id))
            })
            .collect::<Result<Vec<_>>>()?;

        let mut summaries = Vec::with_capacity(results.len());
        let mut predictions = Vec::new();
        for (summary, preds) in results {
            summaries.push(summary);
            predictions.extend(preds);
        }
        let confusion = confusion_from_predictions(&predictions);
        let metrics = compute_metrics(&confusion, &class_names())?;
        Ok(ExperimentReport {
            format_version: REPORT_FORMAT_VERSION,
            name: combination_name(combination),
            combination: combination.to_vec(),
            settings: self.settings,
            classes: Expression::ALL.to_vec(),
            folds: summaries,
            predictions,
            confusion,
            metrics,
        })
    }

    fn run_fold(
        &self,
        k: usize,
        fold: &Fold,
        frames: &[LabeledFrame],
        original: &[Vec<f64>],
        mirrored: Option<&[Vec<f64>]>,
    ) -> Result<(FoldSummary, Vec<PredictionRecord>)> {
        if fold.train.iter().any(|&i| frames[i].subject_id == fold.subject_id)
            || fold.test.iter().any(|&i| frames[i].subject_id != fold.subject_id)
        {
            return Err(Error::Argument("fold mixes subjects across train and test".into()));
        }
        let mut rows: Vec<&[f64]> = fold.train.iter().map(|&i| original[i].as_slice()).collect();
        let mut labels: Vec<&str> = fold.train.iter().map(|&i| frames[i].label.name()).collect();
        if let Some(m) = mirrored {
            rows.extend(fold.train.iter().map(|&i| m[i].as_slice()));
            labels.extend(fold.train.iter().map(|&i| frames[i].label.name()));
        }
        let params = self.settings.svm.params(self.settings.seed.wrapping_add(k as u64));
        let model = train_ovo(&rows, &labels, &params)?;
        let class_map: Vec<Expression> = model
            .classes
            .iter()
            .map(|c| c.parse())
            .collect::<Result<_>>()?;

        let mut predictions = Vec::with_capacity(fold.test.len());
        for &i in &fold.test {
            let p = model.predict_detailed(&original[i])?;
            let mut votes = vec![0; Expression::COUNT];
            for (c, v) in class_map.iter().zip(&p.votes) {
                votes[c.index()] = *v;
            }
            let f = &frames[i];
            predictions.push(PredictionRecord {
                subject_id: f.subject_id.clone(),
                sequence_id: f.sequence_id.clone(),
                frame_index: f.frame_index,
                truth: f.label,
                predicted: class_map[p.class],
                votes,
            });
        }
        log::debug!(
            "fold {} ({}): {} training samples, {} tested",
            k + 1,
            fold.subject_id,
            rows.len(),
            predictions.len()
        );
        Ok((
            FoldSummary {
                subject_id: fold.subject_id.clone(),
                train_samples: rows.len(),
                test_samples: predictions.len(),
            },
            predictions,
        ))
    }

    /// Every combination on one frame list. Each descriptor is extracted
    /// once and shared between the combinations that use it.
    pub fn run(&self, frames: &[LabeledFrame], combinations: &[Vec<Descriptor>]) -> Result<Vec<ExperimentReport>> {
        let rois = self.prepare_rois(frames)?;
        let tables = self.tables_for(&rois, combinations)?;
        combinations
            .iter()
            .map(|c| self.evaluate(frames, &tables, c).context(|| combination_name(c)))
            .collect()
    }

    pub fn tables_for(
        &self,
        rois: &[Image],
        combinations: &[Vec<Descriptor>],
    ) -> Result<BTreeMap<Descriptor, FeatureTable>> {
        let mut tables = BTreeMap::new();
        for d in combinations.iter().flatten() {
            if !tables.contains_key(d) {
                log::info!("extracting {d} features for {} ROIs", rois.len());
                tables.insert(*d, self.features(rois, *d)?);
            }
        }
        Ok(tables)
    }
}

/// Ingests the configured dataset and selects its frames.
pub fn load_frames(config: &Config) -> Result<Vec<LabeledFrame>> {
    let sequences = ingest_dataset(&config.dataset_root)?;
    let frames = select_all(&sequences);
    log::info!(
        "{} sequences ({} labeled), {} selected frames",
        sequences.len(),
        sequences.iter().filter(|s| s.label.is_some()).count(),
        frames.len()
    );
    Ok(frames)
}

/// One report per configured combination.
pub fn run_experiment(config: &Config) -> Result<Vec<ExperimentReport>> {
    let evaluator = Evaluator::new(config.settings)?;
    let frames = load_frames(config)?;
    evaluator.run(&frames, &config.combinations)
}

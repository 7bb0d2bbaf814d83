//! Dataset ingestion, frame selection, leave-one-subject-out evaluation,
//! accuracy metrics and report files.

pub mod dataset;
pub mod experiment;
pub mod export;
pub mod expression;
pub mod metrics;
pub mod protocol;
pub mod report;

pub use dataset::{ingest_dataset, select_all, select_frames, FrameSource, LabeledFrame, Sequence};
pub use experiment::{
    confusion_from_predictions, load_frames, run_experiment, Evaluator, ExperimentReport, FeatureTable,
    FoldSummary, PredictionRecord,
};
pub use expression::Expression;
pub use metrics::{compute_metrics, round1, ConfusionMatrix, Metrics};
pub use protocol::{augment_mirror, loso_folds, Fold};
pub use report::{read_predictions_csv, summary_table};

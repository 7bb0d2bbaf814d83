//! Linear SVM: feature standardization, a binary dual coordinate-descent
//! solver and the one-vs-one multiclass wrapper.

pub mod binary;
pub mod ovo;
pub mod standardize;

pub use binary::{train_binary, train_binary_traced, EpochRecord, LinearModel, SolverTrace, SvmParams};
pub use ovo::{train_ovo, OvoModel, PairModel, Prediction, MODEL_FORMAT_VERSION};
pub use standardize::Standardizer;

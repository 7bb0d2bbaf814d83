//! Periocular facial-expression recognition.
//!
//! Frames with 68-point landmarks are aligned on the eyes, cropped to a
//! periocular region, contrast-equalized and tiled into blocks. Each block
//! is described by LBP, HOG, Gabor, GLCM or GIST features (optionally
//! fused), and a one-vs-one linear SVM is evaluated leave-one-subject-out.
//!
//! Module map:
//! - [`imgproc`]: alignment, ROI cropping, CLAHE, block tiling
//! - [`descriptors`]: block descriptors and fusion
//! - [`svm`]: standardization, binary solver, one-vs-one voting
//! - [`eval`]: dataset ingest, folds, metrics, reports
//! - [`config`]: TOML experiment configuration
//! - [`synthetic`]: generated corpora with known class structure
//! - [`cli`]: the `periocular` command

pub mod cli;
pub mod config;
pub mod descriptors;
pub mod error;
pub mod eval;
pub mod image;
pub mod imgproc;
pub mod svm;
pub mod synthetic;

pub use error::{Error, ErrorKind, Result};
pub use image::Image;

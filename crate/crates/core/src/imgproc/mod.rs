//! Geometric and photometric normalization of a frame into an equalized
//! periocular region.

pub mod clahe;
pub mod geometry;
pub mod roi;

pub use clahe::{clahe, ClaheParams};
pub use geometry::{
    compute_eye_geometry, normalize_geometry, EyeGeometry, LandmarkSet, NormalizingTransform,
    Point,
};
pub use roi::{
    extract_roi, mirror_horizontal, partition_blocks, BlockGrid, RoiSpec, RoiVariant,
};

use crate::error::Result;
use crate::image::Image;

/// Full per-frame normalization: resize, rotate, crop, equalize.
pub fn preprocess_frame(
    img: &Image,
    landmarks: &LandmarkSet,
    roi: &RoiSpec,
    clahe: &ClaheParams,
) -> Result<Image> {
    let geom = compute_eye_geometry(landmarks)?;
    let (normalized, geom) = normalize_geometry(img, &geom)?;
    let crop = extract_roi(&normalized, &geom, roi);
    clahe.apply(&crop)
}

//! Block texture descriptors, per-image feature assembly and fusion.
//!
//! An ROI is tiled into non-overlapping blocks; each block yields a small
//! vector (LBP 8, HOG 8, GABOR 30, GLCM 5, GIST 32 values) and the image
//! vector is the row-major concatenation of the block vectors.

pub mod gabor;
pub mod gist;
pub mod glcm;
pub mod hog;
pub mod lbp;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use gabor::{build_gabor_bank, gabor_at_point, GaborBank, GaborBankParams, GaborFilter};
pub use gist::{gist_block, gist_block_with, GistParams};
pub use glcm::{glcm_block, glcm_features, Glcm};
pub use hog::hog_block;
pub use lbp::lbp_block;

use crate::error::{Error, Result};
use crate::image::Image;
use crate::imgproc::{partition_blocks, RoiSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum Descriptor {
    Lbp,
    Hog,
    Gabor,
    Glcm,
    Gist,
    Fused,
}

impl Descriptor {
    pub const SINGLE: [Descriptor; 5] = [
        Descriptor::Lbp,
        Descriptor::Hog,
        Descriptor::Gabor,
        Descriptor::Glcm,
        Descriptor::Gist,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Descriptor::Lbp => "LBP",
            Descriptor::Hog => "HOG",
            Descriptor::Gabor => "GABOR",
            Descriptor::Glcm => "GLCM",
            Descriptor::Gist => "GIST",
            Descriptor::Fused => "FUSED",
        }
    }
}

impl fmt::Display for Descriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Descriptor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "LBP" => Ok(Descriptor::Lbp),
            "HOG" => Ok(Descriptor::Hog),
            "GABOR" => Ok(Descriptor::Gabor),
            "GLCM" => Ok(Descriptor::Glcm),
            "GIST" => Ok(Descriptor::Gist),
            "FUSED" => Ok(Descriptor::Fused),
            _ => Err(Error::Config(format!("unknown descriptor `{s}`"))),
        }
    }
}

impl TryFrom<String> for Descriptor {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<Descriptor> for String {
    fn from(d: Descriptor) -> String {
        d.name().to_string()
    }
}

/// Flat feature vector of one image.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureVector {
    pub descriptor: Descriptor,
    pub values: Vec<f64>,
}

impl FeatureVector {
    pub fn new(descriptor: Descriptor, values: Vec<f64>) -> Self {
        FeatureVector { descriptor, values }
    }

    pub fn dims(&self) -> usize {
        self.values.len()
    }
}

/// Concatenates in the given order; the result is labelled `FUSED`.
pub fn fuse(features: &[FeatureVector]) -> Result<FeatureVector> {
    if features.is_empty() {
        return Err(Error::Argument("nothing to fuse".into()));
    }
    let values = features
        .iter()
        .flat_map(|f| f.values.iter().copied())
        .collect();
    Ok(FeatureVector::new(Descriptor::Fused, values))
}

/// Divides by the L1 norm; an all-zero histogram is left as is.
pub(crate) fn l1_normalize(values: &mut [f64]) {
    let sum: f64 = values.iter().map(|v| v.abs()).sum();
    if sum > 0.0 {
        values.iter_mut().for_each(|v| *v /= sum);
    }
}

/// Every constant the descriptors depend on.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DescriptorParams {
    pub glcm_levels: usize,
    pub gabor: GaborBankParams,
    pub gist_bank: GaborBankParams,
    pub gist: GistParams,
}

impl Default for DescriptorParams {
    fn default() -> Self {
        DescriptorParams {
            glcm_levels: 8,
            gabor: GaborBankParams {
                num_freq: 5,
                num_orient: 6,
                f_max: 0.25,
                bandwidth_octaves: 1.0,
            },
            gist_bank: GaborBankParams {
                num_freq: 4,
                num_orient: 8,
                f_max: 0.25,
                bandwidth_octaves: 1.0,
            },
            gist: GistParams::default(),
        }
    }
}

/// Holds the filter banks so they are built once and shared read-only.
#[derive(Debug, Clone)]
pub struct FeatureExtractor {
    params: DescriptorParams,
    gabor_bank: GaborBank,
    gist_bank: GaborBank,
}

impl FeatureExtractor {
    pub fn new(params: DescriptorParams) -> Result<Self> {
        if params.glcm_levels < 2 {
            return Err(Error::Config(format!(
                "glcm_levels must be at least 2, got {}",
                params.glcm_levels
            )));
        }
        Ok(FeatureExtractor {
            gabor_bank: params.gabor.build()?,
            gist_bank: params.gist_bank.build()?,
            params,
        })
    }

    pub fn params(&self) -> &DescriptorParams {
        &self.params
    }

    pub fn gabor_bank(&self) -> &GaborBank {
        &self.gabor_bank
    }

    pub fn gist_bank(&self) -> &GaborBank {
        &self.gist_bank
    }

    /// Values contributed by one block.
    pub fn per_block_dims(&self, descriptor: Descriptor) -> Result<usize> {
        match descriptor {
            Descriptor::Lbp => Ok(lbp::LBP_BINS),
            Descriptor::Hog => Ok(hog::HOG_BINS),
            Descriptor::Gabor => Ok(self.gabor_bank.len()),
            Descriptor::Glcm => Ok(glcm::GLCM_FEATURES),
            Descriptor::Gist => Ok(self.gist_bank.len()),
            Descriptor::Fused => Err(Error::Argument(
                "FUSED has no per-block size; extract its components".into(),
            )),
        }
    }

    /// Descriptor of a single block, for the block-local descriptors. GABOR
    /// samples the whole ROI and is handled by [`FeatureExtractor::extract`].
    pub fn block_features(&self, descriptor: Descriptor, block: &Image) -> Result<Vec<f64>> {
        match descriptor {
            Descriptor::Lbp => Ok(lbp_block(block)?.to_vec()),
            Descriptor::Hog => Ok(hog_block(block)?.to_vec()),
            Descriptor::Glcm => {
                Ok(glcm_features(&glcm_block(block, self.params.glcm_levels)?)?.to_vec())
            }
            Descriptor::Gist => gist_block_with(block, &self.gist_bank, &self.params.gist),
            Descriptor::Gabor | Descriptor::Fused => Err(Error::Argument(format!(
                "{descriptor} is not a block-local descriptor"
            ))),
        }
    }

    /// Per-block descriptors concatenated in row-major block order.
    pub fn extract(&self, roi: &Image, descriptor: Descriptor, spec: &RoiSpec) -> Result<FeatureVector> {
        if roi.width() != spec.width() || roi.height() != spec.height() {
            return Err(Error::Shape(format!(
                "ROI is {}x{}, expected {}x{}",
                roi.width(),
                roi.height(),
                spec.width(),
                spec.height()
            )));
        }
        let grid = partition_blocks(roi, spec.block_size)?;
        let mut values = Vec::with_capacity(grid.blocks.len() * self.per_block_dims(descriptor)?);
        if descriptor == Descriptor::Gabor {
            let padded = gabor::PaddedImage::new(roi, self.gabor_bank.max_radius());
            let half = spec.block_size / 2;
            for i in 0..grid.blocks.len() {
                let (x0, y0) = grid.origin(i);
                values.extend(gabor::sample_padded(&padded, (x0 + half, y0 + half), &self.gabor_bank));
            }
        } else {
            for block in &grid.blocks {
                values.extend(self.block_features(descriptor, block)?);
            }
        }
        Ok(FeatureVector::new(descriptor, values))
    }

    /// A single descriptor, or the fusion of several in the given order.
    pub fn extract_combination(
        &self,
        roi: &Image,
        descriptors: &[Descriptor],
        spec: &RoiSpec,
    ) -> Result<FeatureVector> {
        match descriptors {
            [] => Err(Error::Argument("empty descriptor combination".into())),
            [single] => self.extract(roi, *single, spec),
            many => fuse(
                &many
                    .iter()
                    .map(|&d| self.extract(roi, d, spec))
                    .collect::<Result<Vec<_>>>()?,
            ),
        }
    }
}

/// One-off extraction with default constants. Builds the filter banks on
/// every call; reuse a [`FeatureExtractor`] for batches.
pub fn extract_features(roi: &Image, descriptor: Descriptor, spec: &RoiSpec) -> Result<FeatureVector> {
    FeatureExtractor::new(DescriptorParams::default())?.extract(roi, descriptor, spec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::imgproc::RoiVariant;

    #[test]
    fn descriptor_names_round_trip() {
        for d in Descriptor::SINGLE {
            assert_eq!(d.name().parse::<Descriptor>().unwrap(), d);
            assert_eq!(d.name().to_lowercase().parse::<Descriptor>().unwrap(), d);
        }
        assert!(matches!("SIFT".parse::<Descriptor>(), Err(Error::Config(_))));
        let json = serde_json::to_string(&Descriptor::Gabor).unwrap();
        assert_eq!(json, "\"GABOR\"");
        assert!(serde_json::from_str::<Descriptor>("\"SURF\"").is_err());
    }

    #[test]
    fn fusion_concatenates_in_order() {
        let a = FeatureVector::new(Descriptor::Lbp, vec![1.0, 2.0]);
        let b = FeatureVector::new(Descriptor::Hog, vec![3.0]);
        let ab = fuse(&[a.clone(), b.clone()]).unwrap();
        assert_eq!(ab.descriptor, Descriptor::Fused);
        assert_eq!(ab.values, vec![1.0, 2.0, 3.0]);
        assert_ne!(ab, fuse(&[b, a.clone()]).unwrap());
        let single = fuse(std::slice::from_ref(&a)).unwrap();
        assert_eq!(single.values, a.values);
        assert_eq!(single.descriptor, Descriptor::Fused);
        assert!(fuse(&[]).is_err());
    }

    #[test]
    fn feature_dims_follow_grid() {
        let ex = FeatureExtractor::new(DescriptorParams::default()).unwrap();
        let large16 = RoiSpec::new(RoiVariant::Large, 16).unwrap();
        let small32 = RoiSpec::new(RoiVariant::Small, 32).unwrap();
        let large32 = RoiSpec::new(RoiVariant::Large, 32).unwrap();
        let roi_l = Image::from_fn(224, 96, |x, y| ((x * 3 + y * 5) % 256) as f64);
        let roi_s = Image::from_fn(224, 64, |x, y| ((x * 3 + y * 5) % 256) as f64);
        assert_eq!(ex.extract(&roi_l, Descriptor::Gist, &large16).unwrap().dims(), 2688);
        assert_eq!(ex.extract(&roi_s, Descriptor::Glcm, &small32).unwrap().dims(), 70);
        assert_eq!(ex.extract(&roi_l, Descriptor::Gabor, &large32).unwrap().dims(), 630);
        assert!(matches!(
            ex.extract(&roi_s, Descriptor::Lbp, &large16),
            Err(Error::Shape(_))
        ));
        let fused = ex
            .extract_combination(&roi_l, &[Descriptor::Lbp, Descriptor::Hog, Descriptor::Glcm], &large32)
            .unwrap();
        assert_eq!(fused.dims(), 21 * (8 + 8 + 5));
    }
}

//! Periocular region cropping and non-overlapping block tiling.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::image::Image;
use crate::imgproc::geometry::EyeGeometry;

pub const ROI_WIDTH: usize = 224;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RoiVariant {
    /// 64 px tall, centered on the eye line; may miss the eyebrows.
    Small,
    /// 96 px tall, extended upwards to take in eyebrows and forehead.
    Large,
}

impl RoiVariant {
    pub fn height(self) -> usize {
        match self {
            RoiVariant::Small => 64,
            RoiVariant::Large => 96,
        }
    }

    /// Rows kept above the eye line; the remainder lies below it.
    pub fn rows_above_eyes(self) -> usize {
        match self {
            RoiVariant::Small => 32,
            RoiVariant::Large => 64,
        }
    }
}

impl fmt::Display for RoiVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RoiVariant::Small => "small",
            RoiVariant::Large => "large",
        })
    }
}

impl FromStr for RoiVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "small" => Ok(RoiVariant::Small),
            "large" => Ok(RoiVariant::Large),
            other => Err(Error::Config(format!("unknown ROI variant `{other}`"))),
        }
    }
}

/// Crop size plus the block size used to tile it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RoiSpec {
    pub variant: RoiVariant,
    pub block_size: usize,
}

impl RoiSpec {
    pub fn new(variant: RoiVariant, block_size: usize) -> Result<Self> {
        let spec = RoiSpec {
            variant,
            block_size,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.block_size == 0
            || !self.width().is_multiple_of(self.block_size)
            || !self.height().is_multiple_of(self.block_size)
        {
            return Err(Error::Partition {
                width: self.width(),
                height: self.height(),
                block_size: self.block_size,
            });
        }
        Ok(())
    }

    pub fn width(&self) -> usize {
        ROI_WIDTH
    }

    pub fn height(&self) -> usize {
        self.variant.height()
    }

    pub fn grid(&self) -> (usize, usize) {
        (self.height() / self.block_size, self.width() / self.block_size)
    }

    pub fn block_count(&self) -> usize {
        let (r, c) = self.grid();
        r * c
    }
}

/// Crops the ROI around already-normalized eyes. The crop is horizontally
/// centered on the eye midpoint and placed vertically per the variant;
/// anything outside the source is 0.
pub fn extract_roi(img: &Image, geom: &EyeGeometry, spec: &RoiSpec) -> Image {
    let mid = geom.midpoint();
    let left = (mid.x - (spec.width() / 2) as f64).round() as isize;
    let top = (mid.y - spec.variant.rows_above_eyes() as f64).round() as isize;
    img.crop_padded(left, top, spec.width(), spec.height())
}

/// Row-major tiling of an image into equal square blocks.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockGrid {
    pub rows: usize,
    pub cols: usize,
    pub block_size: usize,
    pub blocks: Vec<Image>,
}

impl BlockGrid {
    /// Top-left pixel of block `index`.
    pub fn origin(&self, index: usize) -> (usize, usize) {
        (
            (index % self.cols) * self.block_size,
            (index / self.cols) * self.block_size,
        )
    }

    pub fn reassemble(&self) -> Image {
        let width = self.cols * self.block_size;
        let height = self.rows * self.block_size;
        let bs = self.block_size;
        Image::from_fn(width, height, |x, y| {
            self.blocks[(y / bs) * self.cols + x / bs].get(x % bs, y % bs)
        })
    }
}

pub fn partition_blocks(img: &Image, block_size: usize) -> Result<BlockGrid> {
    if block_size == 0 || !img.width().is_multiple_of(block_size) || !img.height().is_multiple_of(block_size) {
        return Err(Error::Partition {
            width: img.width(),
            height: img.height(),
            block_size,
        });
    }
    let rows = img.height() / block_size;
    let cols = img.width() / block_size;
    let mut blocks = Vec::with_capacity(rows * cols);
    for r in 0..rows {
        for c in 0..cols {
            let (x0, y0) = (c * block_size, r * block_size);
            blocks.push(Image::from_fn(block_size, block_size, |x, y| {
                img.get(x0 + x, y0 + y)
            }));
        }
    }
    Ok(BlockGrid {
        rows,
        cols,
        block_size,
        blocks,
    })
}

pub fn mirror_horizontal(img: &Image) -> Image {
    let w = img.width();
    Image::from_fn(w, img.height(), |x, y| img.get(w - 1 - x, y))
}

//! Single-channel raster with fractional intensities in `[0, 255]`.

use std::path::Path;

use image::{DynamicImage, GrayImage, Luma};

use crate::error::{Error, Result};

/// Row-major grayscale image. Values are kept as `f64` so that resampling
/// and equalization do not accumulate quantization error between stages.
#[derive(Debug, Clone, PartialEq)]
pub struct Image {
    width: usize,
    height: usize,
    data: Vec<f64>,
}

impl Image {
    /// Validating constructor: `data.len() == width * height` and every
    /// value finite and inside `[0, 255]`.
    pub fn new(width: usize, height: usize, data: Vec<f64>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidImage(format!(
                "dimensions must be positive, got {width}x{height}"
            )));
        }
        if data.len() != width * height {
            return Err(Error::InvalidImage(format!(
                "{} values for a {width}x{height} image",
                data.len()
            )));
        }
        if let Some(v) = data.iter().find(|v| !(0.0..=255.0).contains(*v)) {
            return Err(Error::InvalidImage(format!(
                "intensity {v} outside [0, 255]"
            )));
        }
        Ok(Image {
            width,
            height,
            data,
        })
    }

    /// Builds an image from a generator, clamping every sample into `[0, 255]`
    /// (non-finite samples become 0).
    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        assert!(width > 0 && height > 0, "image dimensions must be positive");
        let mut data = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                data.push(clamp_intensity(f(x, y)));
            }
        }
        Image {
            width,
            height,
            data,
        }
    }

    pub fn filled(width: usize, height: usize, value: f64) -> Self {
        Self::from_fn(width, height, |_, _| value)
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.width
    }

    #[inline]
    pub fn height(&self) -> usize {
        self.height
    }

    #[inline]
    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn into_data(self) -> Vec<f64> {
        self.data
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.data[y * self.width + x]
    }

    /// Sample with zero fill outside the raster.
    #[inline]
    pub fn get_or_zero(&self, x: isize, y: isize) -> f64 {
        if x < 0 || y < 0 || x as usize >= self.width || y as usize >= self.height {
            0.0
        } else {
            self.data[y as usize * self.width + x as usize]
        }
    }

    /// Sample with edge replication outside the raster.
    #[inline]
    pub fn get_clamped(&self, x: isize, y: isize) -> f64 {
        let x = x.clamp(0, self.width as isize - 1) as usize;
        let y = y.clamp(0, self.height as isize - 1) as usize;
        self.data[y * self.width + x]
    }

    pub fn row(&self, y: usize) -> &[f64] {
        &self.data[y * self.width..(y + 1) * self.width]
    }

    /// Copy of the `width x height` window whose top-left corner is
    /// `(left, top)`; pixels outside the source are 0.
    pub fn crop_padded(&self, left: isize, top: isize, width: usize, height: usize) -> Image {
        Image::from_fn(width, height, |x, y| {
            self.get_or_zero(left + x as isize, top + y as isize)
        })
    }

    pub fn min_max(&self) -> (f64, f64) {
        self.data
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
                (lo.min(v), hi.max(v))
            })
    }

    /// Rounds to 8 bits.
    pub fn to_gray8(&self) -> GrayImage {
        GrayImage::from_fn(self.width as u32, self.height as u32, |x, y| {
            Luma([self.get(x as usize, y as usize).round() as u8])
        })
    }

    pub fn from_gray8(img: &GrayImage) -> Self {
        let data = img.as_raw().iter().map(|&v| f64::from(v)).collect();
        Image {
            width: img.width() as usize,
            height: img.height() as usize,
            data,
        }
    }

    /// Converts any decoded image to luma. Color inputs use
    /// `0.299 R + 0.587 G + 0.114 B`.
    pub fn from_dynamic(img: &DynamicImage) -> Self {
        match img {
            DynamicImage::ImageLuma8(gray) => Self::from_gray8(gray),
            other => {
                let rgb = other.to_rgb8();
                let data = rgb
                    .pixels()
                    .map(|p| {
                        let [r, g, b] = p.0;
                        clamp_intensity(
                            0.299 * f64::from(r) + 0.587 * f64::from(g) + 0.114 * f64::from(b),
                        )
                    })
                    .collect();
                Image {
                    width: rgb.width() as usize,
                    height: rgb.height() as usize,
                    data,
                }
            }
        }
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let img = image::open(path).map_err(|source| Error::Decode {
            path: path.to_path_buf(),
            source,
        })?;
        Ok(Self::from_dynamic(&img))
    }

    pub fn save_png(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        self.to_gray8()
            .save_with_format(path, image::ImageFormat::Png)
            .map_err(|source| Error::Decode {
                path: path.to_path_buf(),
                source,
            })
    }
}

#[inline]
pub(crate) fn clamp_intensity(v: f64) -> f64 {
    if v.is_finite() {
        v.clamp(0.0, 255.0)
    } else {
        0.0
    }
}

//! Contrast-limited adaptive histogram equalization.
//!
//! Each tile gets a clipped-histogram equalization curve; pixels blend the
//! curves of the four nearest tile centers bilinearly. Histograms and clip
//! redistribution are kept in real arithmetic, so the mapping of a tile
//! scales with its pixel count and a constant image stays constant even when
//! edge tiles are smaller than the nominal tile size.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::image::{clamp_intensity, Image};

const LEVELS: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClaheParams {
    /// Histogram clip height as a multiple of the uniform bin height.
    pub clip_limit: f64,
    /// Nominal tile side in pixels.
    pub tile: usize,
}

impl Default for ClaheParams {
    fn default() -> Self {
        ClaheParams {
            clip_limit: 2.0,
            tile: 32,
        }
    }
}

impl ClaheParams {
    pub fn apply(&self, img: &Image) -> Result<Image> {
        clahe(img, self.clip_limit, self.tile)
    }
}

/// Tile boundaries along one axis plus the pixel-coordinate tile centers.
struct Axis {
    starts: Vec<usize>,
    ends: Vec<usize>,
    centers: Vec<f64>,
}

impl Axis {
    fn new(len: usize, tile: usize) -> Self {
        let n = len.div_ceil(tile);
        let starts: Vec<usize> = (0..n).map(|i| i * tile).collect();
        let ends: Vec<usize> = (0..n).map(|i| ((i + 1) * tile).min(len)).collect();
        let centers = starts
            .iter()
            .zip(&ends)
            .map(|(&s, &e)| (s + e - 1) as f64 / 2.0)
            .collect();
        Axis {
            starts,
            ends,
            centers,
        }
    }

    /// Neighbouring tile indices and the weight of the second one.
    fn locate(&self, p: usize) -> (usize, usize, f64) {
        let p = p as f64;
        let last = self.centers.len() - 1;
        if p <= self.centers[0] {
            return (0, 0, 0.0);
        }
        if p >= self.centers[last] {
            return (last, last, 0.0);
        }
        let i = self.centers.partition_point(|&c| c <= p) - 1;
        let w = (p - self.centers[i]) / (self.centers[i + 1] - self.centers[i]);
        (i, i + 1, w)
    }
}

#[inline]
fn level(v: f64) -> usize {
    (v.round() as usize).min(LEVELS - 1)
}

fn tile_mapping(img: &Image, x0: usize, x1: usize, y0: usize, y1: usize, clip_limit: f64) -> Vec<f64> {
    let mut hist = vec![0.0f64; LEVELS];
    for y in y0..y1 {
        for &v in &img.row(y)[x0..x1] {
            hist[level(v)] += 1.0;
        }
    }
    let n = ((x1 - x0) * (y1 - y0)) as f64;
    let clip = clip_limit * n / LEVELS as f64;
    let mut excess = 0.0;
    for h in hist.iter_mut() {
        if *h > clip {
            excess += *h - clip;
            *h = clip;
        }
    }
    let bonus = excess / LEVELS as f64;
    let mut cdf = 0.0;
    hist.iter()
        .map(|h| {
            cdf += h + bonus;
            255.0 * cdf / n
        })
        .collect()
}

/// `clip_limit >= 1`; `tile >= 1`. Edge tiles may be smaller than `tile`.
pub fn clahe(img: &Image, clip_limit: f64, tile: usize) -> Result<Image> {
    if !(clip_limit >= 1.0) || !clip_limit.is_finite() {
        return Err(Error::Argument(format!(
            "CLAHE clip limit must be >= 1, got {clip_limit}"
        )));
    }
    if tile == 0 {
        return Err(Error::Argument("CLAHE tile size must be positive".into()));
    }
    let ax = Axis::new(img.width(), tile);
    let ay = Axis::new(img.height(), tile);
    let nx = ax.starts.len();
    let mut maps = Vec::with_capacity(nx * ay.starts.len());
    for ty in 0..ay.starts.len() {
        for tx in 0..nx {
            maps.push(tile_mapping(
                img,
                ax.starts[tx],
                ax.ends[tx],
                ay.starts[ty],
                ay.ends[ty],
                clip_limit,
            ));
        }
    }
    let col_lookup: Vec<_> = (0..img.width()).map(|x| ax.locate(x)).collect();
    Ok(Image::from_fn(img.width(), img.height(), |x, y| {
        let (ty0, ty1, wy) = ay.locate(y);
        let (tx0, tx1, wx) = col_lookup[x];
        let l = level(img.get(x, y));
        let m = |ty: usize, tx: usize| maps[ty * nx + tx][l];
        let top = (1.0 - wx) * m(ty0, tx0) + wx * m(ty0, tx1);
        let bottom = (1.0 - wx) * m(ty1, tx0) + wx * m(ty1, tx1);
        clamp_intensity((1.0 - wy) * top + wy * bottom)
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn constant_image_stays_constant() {
        // 70x45 leaves ragged edge tiles with the default 32 px tiles.
        let img = Image::filled(70, 45, 140.0);
        let out = clahe(&img, 2.0, 32).unwrap();
        let (lo, hi) = out.min_max();
        assert!(hi - lo < 1.0, "range {lo}..{hi}");
    }

    #[test]
    fn two_levels_remain_ordered() {
        let img = Image::from_fn(96, 64, |x, y| if (x / 5 + y / 7) % 3 == 0 { 255.0 } else { 0.0 });
        let out = clahe(&img, 2.0, 32).unwrap();
        let mut max_dark = f64::NEG_INFINITY;
        let mut min_bright = f64::INFINITY;
        for (o, i) in out.data().iter().zip(img.data()) {
            if *i == 0.0 {
                max_dark = max_dark.max(*o);
            } else {
                min_bright = min_bright.min(*o);
            }
        }
        assert!(max_dark <= min_bright, "{max_dark} > {min_bright}");
    }

    #[test]
    fn low_contrast_ramp_is_stretched() {
        let img = Image::from_fn(224, 96, |x, _| 100.0 + (30 * x / 223) as f64);
        let (lo_in, hi_in) = img.min_max();
        let (lo, hi) = clahe(&img, 2.0, 32).unwrap().min_max();
        assert!(hi - lo > hi_in - lo_in, "{lo}..{hi} vs {lo_in}..{hi_in}");
    }

    #[test]
    fn rejects_bad_parameters() {
        let img = Image::filled(4, 4, 1.0);
        assert!(clahe(&img, 0.5, 8).is_err());
        assert!(clahe(&img, 2.0, 0).is_err());
    }

    proptest! {
        #[test]
        fn output_stays_in_range(
            w in 1usize..40, h in 1usize..40, tile in 1usize..20,
            clip in 1.0f64..8.0, seed in any::<u32>()
        ) {
            let img = Image::from_fn(w, h, |x, y| {
                (seed as usize ^ (x * 131 + y * 71)) as f64 % 256.0
            });
            let out = clahe(&img, clip, tile).unwrap();
            prop_assert!(out.data().iter().all(|v| (0.0..=255.0).contains(v)));
        }
    }
}

//! Block-level GIST: local contrast normalization followed by the mean
//! response magnitude of each filter over the whole block.

use serde::{Deserialize, Serialize};

use crate::descriptors::gabor::GaborBank;
use crate::error::{Error, Result};
use crate::image::Image;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GistParams {
    /// Guard added to the local standard deviation, in `[0, 1]` intensity units.
    pub epsilon: f64,
    /// Gaussian window sigma as a fraction of the block side.
    pub window_fraction: f64,
}

impl Default for GistParams {
    fn default() -> Self {
        GistParams {
            epsilon: 0.01,
            window_fraction: 0.25,
        }
    }
}

/// Divisive normalization `(i - mu) / (eps + sd)` with Gaussian-weighted
/// local mean and deviation. Window weights are renormalized over the part
/// of the window that lies inside the block.
pub fn local_contrast_normalize(block: &Image, params: &GistParams) -> Vec<f64> {
    let (w, h) = (block.width(), block.height());
    let sigma = (params.window_fraction * w.min(h) as f64).max(0.5);
    let radius = (3.0 * sigma).ceil() as isize;
    let kernel: Vec<f64> = (-radius..=radius)
        .map(|d| (-((d * d) as f64) / (2.0 * sigma * sigma)).exp())
        .collect();
    let s: Vec<f64> = block.data().iter().map(|v| v / 255.0).collect();

    let window = |x: usize, y: usize, f: &dyn Fn(f64) -> f64| -> f64 {
        let (mut num, mut den) = (0.0, 0.0);
        for dy in -radius..=radius {
            let yy = y as isize + dy;
            if yy < 0 || yy >= h as isize {
                continue;
            }
            let ky = kernel[(dy + radius) as usize];
            for dx in -radius..=radius {
                let xx = x as isize + dx;
                if xx < 0 || xx >= w as isize {
                    continue;
                }
                let k = ky * kernel[(dx + radius) as usize];
                num += k * f(s[yy as usize * w + xx as usize]);
                den += k;
            }
        }
        num / den
    };

    let mut out = Vec::with_capacity(w * h);
    for y in 0..h {
        for x in 0..w {
            let mu = window(x, y, &|v| v);
            let var = window(x, y, &|v| (v - mu) * (v - mu));
            let centered = s[y * w + x] - mu;
            // Exact cancellation for flat windows keeps constant blocks at 0.
            let centered = if centered.abs() < 1e-14 { 0.0 } else { centered };
            out.push(centered / (params.epsilon + var.max(0.0).sqrt()));
        }
    }
    out
}

/// Mean magnitude of each filter's response over a zero-padded `w x h`
/// signal, in bank order.
pub(crate) fn mean_response_magnitudes(signal: &[f64], w: usize, h: usize, bank: &GaborBank) -> Vec<f64> {
    bank.filters()
        .iter()
        .map(|filter| {
            let r = filter.radius() as isize;
            let mut total = 0.0;
            for py in 0..h as isize {
                let dy_lo = (-py).max(-r);
                let dy_hi = (h as isize - 1 - py).min(r);
                for px in 0..w as isize {
                    let dx_lo = (-px).max(-r);
                    let dx_hi = (w as isize - 1 - px).min(r);
                    let (mut re, mut im) = (0.0, 0.0);
                    for dy in dy_lo..=dy_hi {
                        let row = ((py + dy) as usize) * w;
                        let src = &signal[row + (px + dx_lo) as usize..=row + (px + dx_hi) as usize];
                        let mr = &filter.re_row(dy)[(dx_lo + r) as usize..=(dx_hi + r) as usize];
                        let mi = &filter.im_row(dy)[(dx_lo + r) as usize..=(dx_hi + r) as usize];
                        for ((v, a), b) in src.iter().zip(mr).zip(mi) {
                            re += a * v;
                            im += b * v;
                        }
                    }
                    total += re.hypot(im);
                }
            }
            total / (w * h) as f64
        })
        .collect()
}

/// GIST channels of one block with default normalization constants.
pub fn gist_block(block: &Image, bank: &GaborBank) -> Result<Vec<f64>> {
    gist_block_with(block, bank, &GistParams::default())
}

pub fn gist_block_with(block: &Image, bank: &GaborBank, params: &GistParams) -> Result<Vec<f64>> {
    if block.width() < 3 || block.height() < 3 {
        return Err(Error::BlockTooSmall {
            width: block.width(),
            height: block.height(),
            min: 3,
        });
    }
    let normalized = local_contrast_normalize(block, params);
    Ok(mean_response_magnitudes(
        &normalized,
        block.width(),
        block.height(),
        bank,
    ))
}

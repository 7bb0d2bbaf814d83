//! Magnitude-weighted histogram of unsigned gradient orientations.

use crate::descriptors::l1_normalize;
use crate::error::{Error, Result};
use crate::image::Image;

pub const HOG_BINS: usize = 8;
const BIN_WIDTH_DEG: f64 = 180.0 / HOG_BINS as f64;

/// Orientation bin for an unsigned angle in degrees.
fn orientation_bin(gx: f64, gy: f64) -> usize {
    let mut angle = gy.atan2(gx).to_degrees().rem_euclid(180.0);
    if angle >= 180.0 {
        angle = 0.0;
    }
    ((angle / BIN_WIDTH_DEG) as usize).min(HOG_BINS - 1)
}

/// Unnormalized histogram: central differences at interior pixels, each
/// pixel adding its gradient magnitude to its orientation bin.
pub fn hog_histogram(block: &Image) -> Result<[f64; HOG_BINS]> {
    if block.width() < 3 || block.height() < 3 {
        return Err(Error::BlockTooSmall {
            width: block.width(),
            height: block.height(),
            min: 3,
        });
    }
    let mut hist = [0.0; HOG_BINS];
    for y in 1..block.height() - 1 {
        for x in 1..block.width() - 1 {
            let gx = block.get(x + 1, y) - block.get(x - 1, y);
            let gy = block.get(x, y + 1) - block.get(x, y - 1);
            let mag = gx.hypot(gy);
            if mag > 0.0 {
                hist[orientation_bin(gx, gy)] += mag;
            }
        }
    }
    Ok(hist)
}

/// L1-normalized orientation histogram; flat blocks give the zero vector.
pub fn hog_block(block: &Image) -> Result<[f64; HOG_BINS]> {
    let mut hist = hog_histogram(block)?;
    l1_normalize(&mut hist);
    Ok(hist)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::imgproc::mirror_horizontal;

    #[test]
    fn constant_block_is_zero() {
        assert_eq!(hog_block(&Image::filled(16, 16, 3.0)).unwrap(), [0.0; 8]);
    }

    #[test]
    fn vertical_step_edge_lands_in_first_bin() {
        let block = Image::from_fn(16, 16, |x, _| if x < 8 { 0.0 } else { 255.0 });
        let h = hog_block(&block).unwrap();
        assert_eq!(h[0], 1.0);
        assert!(h[1..].iter().all(|&v| v == 0.0));
    }

    #[test]
    fn horizontal_edge_lands_in_ninety_degree_bin() {
        let block = Image::from_fn(16, 16, |_, y| if y < 8 { 0.0 } else { 255.0 });
        let h = hog_block(&block).unwrap();
        assert_eq!(h[4], 1.0);
    }

    #[test]
    fn bins_cover_half_turn() {
        assert_eq!(orientation_bin(1.0, 0.0), 0);
        assert_eq!(orientation_bin(-1.0, 0.0), 0);
        assert_eq!(orientation_bin(-1.0, -0.0), 0);
        assert_eq!(orientation_bin(1.0, 1.0), 2);
        assert_eq!(orientation_bin(-1.0, -1.0), 2);
        assert_eq!(orientation_bin(-1.0, 1.0), 6);
        assert_eq!(orientation_bin(-1.0, 1e-9), 7);
    }

    #[test]
    fn mirroring_preserves_total_mass() {
        let block = Image::from_fn(16, 16, |x, y| ((x * x * 7 + y * 31 + x * y) % 256) as f64);
        let a: f64 = hog_histogram(&block).unwrap().iter().sum();
        let b: f64 = hog_histogram(&mirror_horizontal(&block)).unwrap().iter().sum();
        assert!((a - b).abs() < 1e-9 * a.max(1.0));
    }
}

//! Local binary patterns over a 3x3 neighbourhood, pooled into 8 bins.

use crate::descriptors::l1_normalize;
use crate::error::{Error, Result};
use crate::image::Image;

pub const LBP_BINS: usize = 8;

/// Neighbour offsets `(dx, dy)`, clockwise from the top-left. The first entry
/// is the most significant bit.
const NEIGHBOURS: [(isize, isize); 8] = [
    (-1, -1),
    (0, -1),
    (1, -1),
    (1, 0),
    (1, 1),
    (0, 1),
    (-1, 1),
    (-1, 0),
];

/// 8-bit code of the interior pixel `(x, y)`: a bit is set when the
/// neighbour is strictly brighter than the center.
pub fn lbp_code(img: &Image, x: usize, y: usize) -> u8 {
    let center = img.get(x, y);
    NEIGHBOURS.iter().fold(0u8, |code, &(dx, dy)| {
        let n = img.get((x as isize + dx) as usize, (y as isize + dy) as usize);
        (code << 1) | u8::from(n > center)
    })
}

/// Codes of every interior pixel, row-major.
pub fn lbp_codes(block: &Image) -> Result<Vec<u8>> {
    check_block(block)?;
    let (w, h) = (block.width(), block.height());
    let mut codes = Vec::with_capacity((w - 2) * (h - 2));
    for y in 1..h - 1 {
        for x in 1..w - 1 {
            codes.push(lbp_code(block, x, y));
        }
    }
    Ok(codes)
}

/// L1-normalized 8-bin histogram of the interior codes; bin `k` holds codes
/// `32k ..= 32k + 31`.
pub fn lbp_block(block: &Image) -> Result<[f64; LBP_BINS]> {
    let mut hist = [0.0; LBP_BINS];
    for code in lbp_codes(block)? {
        hist[usize::from(code) / (256 / LBP_BINS)] += 1.0;
    }
    l1_normalize(&mut hist);
    Ok(hist)
}

fn check_block(block: &Image) -> Result<()> {
    if block.width() < 3 || block.height() < 3 {
        return Err(Error::BlockTooSmall {
            width: block.width(),
            height: block.height(),
            min: 3,
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_block_fills_first_bin() {
        let h = lbp_block(&Image::filled(16, 16, 77.0)).unwrap();
        assert_eq!(h, [1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn top_left_neighbour_is_most_significant() {
        let mut data = vec![10.0; 9];
        data[0] = 20.0;
        let block = Image::new(3, 3, data).unwrap();
        assert_eq!(lbp_code(&block, 1, 1), 128);
        let h = lbp_block(&block).unwrap();
        assert_eq!(h[4], 1.0);
        assert_eq!(h.iter().sum::<f64>(), 1.0);
    }

    #[test]
    fn clockwise_bit_order() {
        // Only the left neighbour is brighter: the last bit in the order.
        let mut data = vec![10.0; 9];
        data[3] = 20.0;
        let block = Image::new(3, 3, data).unwrap();
        assert_eq!(lbp_code(&block, 1, 1), 1);
        // Only the right neighbour: fourth from the top, value 16.
        let mut data = vec![10.0; 9];
        data[5] = 20.0;
        let block = Image::new(3, 3, data).unwrap();
        assert_eq!(lbp_code(&block, 1, 1), 16);
    }

    #[test]
    fn three_by_three_is_one_hot() {
        let block = Image::from_fn(3, 3, |x, y| (x * 50 + y * 13) as f64);
        let h = lbp_block(&block).unwrap();
        assert_eq!(h.iter().filter(|&&v| v == 1.0).count(), 1);
        assert_eq!(h.iter().filter(|&&v| v == 0.0).count(), 7);
    }

    #[test]
    fn small_blocks_are_rejected() {
        assert!(matches!(
            lbp_block(&Image::filled(2, 5, 0.0)),
            Err(Error::BlockTooSmall { .. })
        ));
    }
}

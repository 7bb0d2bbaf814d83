//! Gray-level co-occurrence matrices and five Haralick statistics.

use crate::error::{Error, Result};
use crate::image::Image;

pub const GLCM_FEATURES: usize = 5;

/// `(d_row, d_col)` offsets at distance 1 for 0, 45, 90 and 135 degrees.
pub const OFFSETS: [(isize, isize); 4] = [(0, 1), (-1, 1), (-1, 0), (-1, -1)];

/// Normalized symmetric co-occurrence matrix, row-major `levels x levels`.
#[derive(Debug, Clone, PartialEq)]
pub struct Glcm {
    levels: usize,
    matrix: Vec<f64>,
}

impl Glcm {
    pub fn levels(&self) -> usize {
        self.levels
    }

    pub fn matrix(&self) -> &[f64] {
        &self.matrix
    }

    /// Probability of the 0-based level pair `(i, j)`.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.matrix[i * self.levels + j]
    }

    /// Wraps an explicit matrix, which must be square, nonnegative and
    /// finite. It is used as given (no renormalization).
    pub fn from_matrix(levels: usize, matrix: Vec<f64>) -> Result<Self> {
        if levels == 0 || matrix.len() != levels * levels {
            return Err(Error::Shape(format!(
                "{} entries for a {levels}x{levels} co-occurrence matrix",
                matrix.len()
            )));
        }
        if matrix.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::Argument(
                "co-occurrence entries must be finite and nonnegative".into(),
            ));
        }
        Ok(Glcm { levels, matrix })
    }
}

/// Uniform quantization of `[0, 255]` into `levels` bins.
#[inline]
pub fn quantize(v: f64, levels: usize) -> usize {
    ((v * levels as f64 / 256.0) as usize).min(levels - 1)
}

/// One symmetric, sum-normalized matrix per offset in [`OFFSETS`].
pub fn glcm_block(block: &Image, levels: usize) -> Result<Vec<Glcm>> {
    if levels < 2 {
        return Err(Error::Argument(format!(
            "co-occurrence needs at least 2 gray levels, got {levels}"
        )));
    }
    if block.width() < 2 || block.height() < 2 {
        return Err(Error::BlockTooSmall {
            width: block.width(),
            height: block.height(),
            min: 2,
        });
    }
    let (w, h) = (block.width() as isize, block.height() as isize);
    let q: Vec<usize> = block.data().iter().map(|&v| quantize(v, levels)).collect();
    Ok(OFFSETS
        .iter()
        .map(|&(dr, dc)| {
            let mut m = vec![0.0; levels * levels];
            let mut pairs = 0.0;
            for r in 0..h {
                let r2 = r + dr;
                if r2 < 0 || r2 >= h {
                    continue;
                }
                for c in 0..w {
                    let c2 = c + dc;
                    if c2 < 0 || c2 >= w {
                        continue;
                    }
                    let a = q[(r * w + c) as usize];
                    let b = q[(r2 * w + c2) as usize];
                    m[a * levels + b] += 1.0;
                    m[b * levels + a] += 1.0;
                    pairs += 2.0;
                }
            }
            m.iter_mut().for_each(|v| *v /= pairs);
            Glcm { levels, matrix: m }
        })
        .collect())
}

/// Contrast, homogeneity, entropy (bits), energy and autocorrelation
/// (1-based levels) per matrix, averaged over the matrices.
pub fn glcm_features(matrices: &[Glcm]) -> Result<[f64; GLCM_FEATURES]> {
    let first = matrices
        .first()
        .ok_or_else(|| Error::Argument("no co-occurrence matrices given".into()))?;
    let levels = first.levels;
    if let Some(bad) = matrices.iter().find(|m| m.levels != levels) {
        return Err(Error::Shape(format!(
            "co-occurrence matrices of {levels} and {} levels",
            bad.levels
        )));
    }
    let mut acc = [0.0; GLCM_FEATURES];
    for glcm in matrices {
        for i in 0..levels {
            for j in 0..levels {
                let p = glcm.get(i, j);
                if p == 0.0 {
                    continue;
                }
                let d = i.abs_diff(j) as f64;
                acc[0] += p * d * d;
                acc[1] += p / (1.0 + d);
                acc[2] -= p * p.log2();
                acc[3] += p * p;
                acc[4] += ((i + 1) * (j + 1)) as f64 * p;
            }
        }
    }
    let n = matrices.len() as f64;
    acc.iter_mut().for_each(|v| *v /= n);
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_block_has_single_diagonal_entry() {
        let block = Image::filled(16, 16, 100.0);
        let k = quantize(100.0, 8);
        for m in glcm_block(&block, 8).unwrap() {
            assert_eq!(m.get(k, k), 1.0);
            assert_eq!(m.matrix().iter().filter(|&&v| v != 0.0).count(), 1);
        }
        let f = glcm_features(&glcm_block(&block, 8).unwrap()).unwrap();
        let k1 = (k + 1) as f64;
        assert_eq!(f, [0.0, 1.0, 0.0, 1.0, k1 * k1]);
    }

    #[test]
    fn two_by_two_horizontal_pairs() {
        let block = Image::new(2, 2, vec![0.0, 255.0, 0.0, 255.0]).unwrap();
        let mats = glcm_block(&block, 2).unwrap();
        assert_eq!(mats[0].matrix(), &[0.0, 0.5, 0.5, 0.0]);
    }

    #[test]
    fn hand_evaluated_features() {
        let m = Glcm::from_matrix(2, vec![0.0, 0.5, 0.5, 0.0]).unwrap();
        let f = glcm_features(std::slice::from_ref(&m)).unwrap();
        let expected = [1.0, 0.5, 1.0, 0.5, 2.0];
        for (a, b) in f.iter().zip(expected) {
            assert!((a - b).abs() < 1e-15, "{f:?}");
        }
        let four = glcm_features(&vec![m; 4]).unwrap();
        for (a, b) in four.iter().zip(f) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn shape_errors() {
        let a = Glcm::from_matrix(2, vec![0.25; 4]).unwrap();
        let b = Glcm::from_matrix(3, vec![1.0 / 9.0; 9]).unwrap();
        assert!(matches!(glcm_features(&[a, b]), Err(Error::Shape(_))));
        assert!(glcm_features(&[]).is_err());
        assert!(matches!(
            glcm_block(&Image::filled(1, 4, 0.0), 8),
            Err(Error::BlockTooSmall { .. })
        ));
        assert!(glcm_block(&Image::filled(4, 4, 0.0), 1).is_err());
    }

    #[test]
    fn quantization_covers_range() {
        assert_eq!(quantize(0.0, 8), 0);
        assert_eq!(quantize(31.99, 8), 0);
        assert_eq!(quantize(32.0, 8), 1);
        assert_eq!(quantize(255.0, 8), 7);
        assert_eq!(quantize(255.0, 2), 1);
    }
}

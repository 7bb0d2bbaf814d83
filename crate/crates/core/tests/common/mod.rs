//! Brute-force reference implementations and fixtures shared by the
//! integration tests. Written independently of the library code paths.

#![allow(dead_code)]

use periocular::imgproc::{LandmarkSet, Point};
use periocular::Image;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Integer intensities in `0..=255`.
pub fn random_block(rng: &mut ChaCha8Rng, w: usize, h: usize) -> Image {
    Image::from_fn(w, h, |_, _| rng.gen_range(0..=255) as f64)
}

/// Blocks with few distinct values, so ties between neighbours occur.
pub fn random_coarse_block(rng: &mut ChaCha8Rng, w: usize, h: usize) -> Image {
    Image::from_fn(w, h, |_, _| (rng.gen_range(0..4) * 60) as f64)
}

/// Code of pixel `(x, y)` read off the 3x3 window as a clockwise ring
/// starting at the top-left corner.
pub fn naive_lbp_code(img: &Image, x: usize, y: usize) -> u8 {
    let win = |c: usize, r: usize| img.get(x + c - 1, y + r - 1);
    let ring = [
        win(0, 0),
        win(1, 0),
        win(2, 0),
        win(2, 1),
        win(2, 2),
        win(1, 2),
        win(0, 2),
        win(0, 1),
    ];
    let center = win(1, 1);
    let mut code = 0u32;
    for (k, v) in ring.iter().enumerate() {
        if *v > center {
            code += 1 << (7 - k);
        }
    }
    code as u8
}

pub fn naive_lbp_histogram(img: &Image) -> Vec<f64> {
    let mut counts = [0usize; 8];
    let mut total = 0usize;
    for y in 1..img.height() - 1 {
        for x in 1..img.width() - 1 {
            counts[naive_lbp_code(img, x, y) as usize >> 5] += 1;
            total += 1;
        }
    }
    counts.iter().map(|&c| c as f64 / total as f64).collect()
}

/// Co-occurrence matrices for displacements of one pixel at 0, 45, 90 and
/// 135 degrees (x right, y up in the usual mathematical sense, i.e. towards
/// smaller row index), found by testing every ordered pixel pair.
pub fn naive_glcm(img: &Image, levels: usize) -> Vec<Vec<Vec<f64>>> {
    let q = |v: f64| ((v / 256.0 * levels as f64).floor() as usize).min(levels - 1);
    let displacements: [(i64, i64); 4] = [(1, 0), (1, -1), (0, -1), (-1, -1)];
    let pixels: Vec<(i64, i64, usize)> = (0..img.height())
        .flat_map(|y| (0..img.width()).map(move |x| (x, y)))
        .map(|(x, y)| (x as i64, y as i64, q(img.get(x, y))))
        .collect();
    displacements
        .iter()
        .map(|&(dx, dy)| {
            let mut m = vec![vec![0.0; levels]; levels];
            let mut n = 0.0;
            for a in &pixels {
                for b in &pixels {
                    if b.0 - a.0 == dx && b.1 - a.1 == dy {
                        m[a.2][b.2] += 1.0;
                        m[b.2][a.2] += 1.0;
                        n += 2.0;
                    }
                }
            }
            for row in &mut m {
                for v in row.iter_mut() {
                    *v /= n;
                }
            }
            m
        })
        .collect()
}

/// Contrast, homogeneity, entropy, energy, autocorrelation averaged over
/// the matrices.
pub fn naive_glcm_features(mats: &[Vec<Vec<f64>>]) -> [f64; 5] {
    let mut out = [0.0; 5];
    for m in mats {
        let l = m.len();
        let (mut con, mut hom, mut ent, mut ene, mut aut) = (0.0, 0.0, 0.0, 0.0, 0.0);
        for i in 0..l {
            for j in 0..l {
                let p = m[i][j];
                let d = i as f64 - j as f64;
                con += d * d * p;
                hom += p / (1.0 + d.abs());
                if p > 0.0 {
                    ent += -p * p.log2();
                }
                ene += p * p;
                aut += (i as f64 + 1.0) * (j as f64 + 1.0) * p;
            }
        }
        for (o, v) in out.iter_mut().zip([con, hom, ent, ene, aut]) {
            *o += v / mats.len() as f64;
        }
    }
    out
}

/// A Gabor kernel tabulated straight from its definition: unit-sum
/// Gaussian envelope with one-octave bandwidth, truncated at 3 sigma, times
/// the complex carrier minus its envelope-weighted mean.
pub struct NaiveGabor {
    taps: Vec<(i64, i64, f64, f64)>,
}

impl NaiveGabor {
    pub fn new(f: f64, theta_deg: f64) -> Self {
        use std::f64::consts::PI;
        let sigma = (2f64.ln() / 2.0).sqrt() / (PI * f) * 3.0;
        let r = (3.0 * sigma).ceil() as i64;
        let t = theta_deg * PI / 180.0;
        let mut raw = Vec::new();
        let mut env_total = 0.0;
        for dy in -r..=r {
            for dx in -r..=r {
                let e = (-((dx * dx + dy * dy) as f64) / (2.0 * sigma * sigma)).exp();
                let ph = 2.0 * PI * f * (dx as f64 * t.cos() + dy as f64 * t.sin());
                env_total += e;
                raw.push((dx, dy, e, ph));
            }
        }
        let (mut kr, mut ki) = (0.0, 0.0);
        for &(_, _, e, ph) in &raw {
            kr += e / env_total * ph.cos();
            ki += e / env_total * ph.sin();
        }
        let taps = raw
            .into_iter()
            .map(|(dx, dy, e, ph)| {
                let w = e / env_total;
                (dx, dy, w * (ph.cos() - kr), w * (ph.sin() - ki))
            })
            .collect();
        NaiveGabor { taps }
    }

    /// Response magnitude at `(x, y)` with coordinates clamped to the image.
    pub fn magnitude(&self, img: &Image, x: usize, y: usize) -> f64 {
        let (mut re, mut im) = (0.0, 0.0);
        for &(dx, dy, a, b) in &self.taps {
            let sx = (x as i64 + dx).clamp(0, img.width() as i64 - 1) as usize;
            let sy = (y as i64 + dy).clamp(0, img.height() as i64 - 1) as usize;
            let v = img.get(sx, sy);
            re += a * v;
            im += b * v;
        }
        (re * re + im * im).sqrt()
    }
}

/// The default 5 x 6 bank, frequency-major.
pub fn naive_gabor_bank() -> Vec<NaiveGabor> {
    let mut bank = Vec::new();
    for k in 0..5 {
        for o in 0..6 {
            bank.push(NaiveGabor::new(0.25 / 2f64.powi(k), 30.0 * o as f64));
        }
    }
    bank
}

/// Landmarks whose eye contours are hexagons of radius 8 around the given
/// centers; all other points sit on a diagonal line.
pub fn landmarks_with_eyes(right: Point, left: Point) -> LandmarkSet {
    let hexagon = |c: Point| -> Vec<Point> {
        (0..6)
            .map(|k| {
                let a = std::f64::consts::TAU * k as f64 / 6.0;
                Point::new(c.x + 8.0 * a.cos(), c.y + 8.0 * a.sin())
            })
            .collect()
    };
    let mut pts: Vec<Point> = (0..68).map(|i| Point::new(i as f64, i as f64)).collect();
    pts[36..42].copy_from_slice(&hexagon(right));
    pts[42..48].copy_from_slice(&hexagon(left));
    LandmarkSet::new(pts).unwrap()
}

/// Per-class image counts of the labeled corpus and the published GABOR
/// per-class recalls (percent), in neutral..surprise order.
pub const CLASS_COUNTS: [u64; 8] = [593, 135, 54, 177, 75, 207, 84, 249];
pub const GABOR_RECALLS: [f64; 8] = [88.7, 65.9, 16.7, 82.5, 29.3, 79.7, 45.2, 91.6];

/// Confusion counts whose diagonal is the nearest integer to
/// `recall * count`; misclassifications all go to the next class.
pub fn published_gabor_confusion() -> Vec<Vec<u64>> {
    let n = CLASS_COUNTS.len();
    let mut m = vec![vec![0u64; n]; n];
    for i in 0..n {
        let hit = (GABOR_RECALLS[i] / 100.0 * CLASS_COUNTS[i] as f64).round() as u64;
        m[i][i] = hit;
        m[i][(i + 1) % n] = CLASS_COUNTS[i] - hit;
    }
    m
}

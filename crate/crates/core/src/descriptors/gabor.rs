//! Log-polar Gabor filter banks and sparse point sampling of the local
//! power spectrum.
//!
//! Filters are isotropic Gaussian envelopes modulating a complex carrier:
//!
//! ```text
//! g(dx, dy) = e(dx, dy) * (exp(i 2 pi f (dx cos t + dy sin t)) - k)
//! ```
//!
//! where `e` is normalized to unit sum over the truncated support and the
//! complex constant `k` removes the DC response. Orientation `t` is measured
//! from the +x axis towards +y (image rows grow downwards). Center
//! frequencies halve from `f_max` (octave spacing) and orientations are
//! uniform over `[0, 180)` degrees.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::image::Image;

/// Envelope truncation in multiples of sigma.
pub const TRUNCATION_SIGMAS: f64 = 3.0;

#[derive(Debug, Clone, PartialEq)]
pub struct GaborFilter {
    pub frequency: f64,
    /// Degrees.
    pub orientation: f64,
    pub sigma: f64,
    radius: usize,
    re: Vec<f64>,
    im: Vec<f64>,
}

impl GaborFilter {
    pub fn new(frequency: f64, orientation_deg: f64, sigma: f64) -> Self {
        let radius = (TRUNCATION_SIGMAS * sigma).ceil() as usize;
        let side = 2 * radius + 1;
        let theta = orientation_deg.to_radians();
        let (sin_t, cos_t) = theta.sin_cos();
        let r = radius as isize;

        let mut env = Vec::with_capacity(side * side);
        let mut car = Vec::with_capacity(side * side);
        for dy in -r..=r {
            for dx in -r..=r {
                let (dx, dy) = (dx as f64, dy as f64);
                env.push((-(dx * dx + dy * dy) / (2.0 * sigma * sigma)).exp());
                let phase = 2.0 * std::f64::consts::PI * frequency * (dx * cos_t + dy * sin_t);
                car.push((phase.cos(), phase.sin()));
            }
        }
        let env_sum: f64 = env.iter().sum();
        env.iter_mut().for_each(|e| *e /= env_sum);
        // Envelope-weighted carrier mean; subtracting it (times the
        // envelope) zeroes the mask sum without reshaping the envelope.
        let (k_re, k_im) = env
            .iter()
            .zip(&car)
            .fold((0.0, 0.0), |(a, b), (e, (c, s))| (a + e * c, b + e * s));
        let re = env.iter().zip(&car).map(|(e, (c, _))| e * (c - k_re)).collect();
        let im = env.iter().zip(&car).map(|(e, (_, s))| e * (s - k_im)).collect();
        GaborFilter {
            frequency,
            orientation: orientation_deg,
            sigma,
            radius,
            re,
            im,
        }
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn side(&self) -> usize {
        2 * self.radius + 1
    }

    /// Mask coefficient at offset `(dx, dy)` from the center.
    pub fn coefficient(&self, dx: isize, dy: isize) -> (f64, f64) {
        let r = self.radius as isize;
        assert!(dx.abs() <= r && dy.abs() <= r, "offset outside mask support");
        let i = ((dy + r) as usize) * self.side() + (dx + r) as usize;
        (self.re[i], self.im[i])
    }

    /// Mean of the complex mask.
    pub fn mean(&self) -> (f64, f64) {
        let n = self.re.len() as f64;
        (
            self.re.iter().sum::<f64>() / n,
            self.im.iter().sum::<f64>() / n,
        )
    }

    pub(crate) fn re_row(&self, dy: isize) -> &[f64] {
        let i = (dy + self.radius as isize) as usize * self.side();
        &self.re[i..i + self.side()]
    }

    pub(crate) fn im_row(&self, dy: isize) -> &[f64] {
        let i = (dy + self.radius as isize) as usize * self.side();
        &self.im[i..i + self.side()]
    }
}

/// Gaussian width giving a half-amplitude bandwidth of `octaves` around
/// center frequency `f`.
pub fn sigma_for_bandwidth(frequency: f64, octaves: f64) -> f64 {
    let b = 2f64.powf(octaves);
    (std::f64::consts::LN_2 / 2.0).sqrt() / (std::f64::consts::PI * frequency) * (b + 1.0)
        / (b - 1.0)
}

/// Filters in frequency-major order: index `f * num_orient + o`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaborBank {
    num_freq: usize,
    num_orient: usize,
    filters: Vec<GaborFilter>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaborBankParams {
    pub num_freq: usize,
    pub num_orient: usize,
    /// Highest center frequency, cycles per pixel.
    pub f_max: f64,
    pub bandwidth_octaves: f64,
}

impl GaborBankParams {
    pub fn build(&self) -> Result<GaborBank> {
        GaborBank::new(self.num_freq, self.num_orient, self.f_max, self.bandwidth_octaves)
    }
}

impl GaborBank {
    pub fn new(num_freq: usize, num_orient: usize, f_max: f64, bandwidth_octaves: f64) -> Result<Self> {
        if num_freq == 0 || num_orient == 0 {
            return Err(Error::Argument(format!(
                "filter bank needs at least one channel, got {num_freq}x{num_orient}"
            )));
        }
        if !(f_max > 0.0) {
            return Err(Error::Argument(format!(
                "maximum frequency must be positive, got {f_max}"
            )));
        }
        if f_max > 0.5 {
            return Err(Error::Aliasing { f_max });
        }
        if !(bandwidth_octaves > 0.0) {
            return Err(Error::Argument(format!(
                "bandwidth must be positive, got {bandwidth_octaves}"
            )));
        }
        let mut filters = Vec::with_capacity(num_freq * num_orient);
        for fi in 0..num_freq {
            let f = f_max / 2f64.powi(fi as i32);
            let sigma = sigma_for_bandwidth(f, bandwidth_octaves);
            for oi in 0..num_orient {
                let theta = 180.0 * oi as f64 / num_orient as f64;
                filters.push(GaborFilter::new(f, theta, sigma));
            }
        }
        Ok(GaborBank {
            num_freq,
            num_orient,
            filters,
        })
    }

    pub fn filters(&self) -> &[GaborFilter] {
        &self.filters
    }

    pub fn len(&self) -> usize {
        self.filters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.filters.is_empty()
    }

    pub fn layout(&self) -> (usize, usize) {
        (self.num_freq, self.num_orient)
    }

    pub fn frequencies(&self) -> Vec<f64> {
        (0..self.num_freq)
            .map(|fi| self.filters[fi * self.num_orient].frequency)
            .collect()
    }

    pub fn orientations(&self) -> Vec<f64> {
        self.filters[..self.num_orient]
            .iter()
            .map(|f| f.orientation)
            .collect()
    }

    pub fn max_radius(&self) -> usize {
        self.filters.iter().map(|f| f.radius).max().unwrap_or(0)
    }

    /// Channel index of `(frequency index, orientation index)`.
    pub fn channel(&self, freq_index: usize, orient_index: usize) -> usize {
        freq_index * self.num_orient + orient_index
    }
}

/// Bank with one-octave bandwidth.
pub fn build_gabor_bank(num_freq: usize, num_orient: usize, f_max: f64) -> Result<GaborBank> {
    GaborBank::new(num_freq, num_orient, f_max, 1.0)
}

/// An image extended by edge replication so mask windows never leave it.
pub(crate) struct PaddedImage {
    pad: usize,
    width: usize,
    data: Vec<f64>,
}

impl PaddedImage {
    pub(crate) fn new(img: &Image, pad: usize) -> Self {
        let width = img.width() + 2 * pad;
        let height = img.height() + 2 * pad;
        let mut data = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                data.push(img.get_clamped(x as isize - pad as isize, y as isize - pad as isize));
            }
        }
        PaddedImage { pad, width, data }
    }

    /// Complex response of `filter` centered on source pixel `(x, y)`.
    pub(crate) fn respond(&self, filter: &GaborFilter, x: usize, y: usize) -> (f64, f64) {
        let r = filter.radius as isize;
        debug_assert!(filter.radius <= self.pad);
        let cx = x + self.pad;
        let cy = y + self.pad;
        let (mut re, mut im) = (0.0, 0.0);
        for dy in -r..=r {
            let row = (cy as isize + dy) as usize * self.width;
            let start = row + cx - filter.radius;
            let pixels = &self.data[start..start + filter.side()];
            let mr = filter.re_row(dy);
            let mi = filter.im_row(dy);
            for ((p, a), b) in pixels.iter().zip(mr).zip(mi) {
                re += a * p;
                im += b * p;
            }
        }
        (re, im)
    }
}

/// Magnitudes of every filter response at `point = (x, y)`, in bank order.
/// The image is extended by edge replication where a mask overhangs it.
pub fn gabor_at_point(img: &Image, point: (usize, usize), bank: &GaborBank) -> Result<Vec<f64>> {
    let (x, y) = point;
    if x >= img.width() || y >= img.height() {
        return Err(Error::Argument(format!(
            "sample point ({x}, {y}) outside {}x{} image",
            img.width(),
            img.height()
        )));
    }
    let padded = PaddedImage::new(img, bank.max_radius());
    Ok(sample_padded(&padded, (x, y), bank))
}

pub(crate) fn sample_padded(padded: &PaddedImage, point: (usize, usize), bank: &GaborBank) -> Vec<f64> {
    bank.filters
        .iter()
        .map(|f| {
            let (re, im) = padded.respond(f, point.0, point.1);
            re.hypot(im)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gabor_layout_and_spacing() {
        let bank = build_gabor_bank(5, 6, 0.25).unwrap();
        assert_eq!(bank.len(), 30);
        assert_eq!(bank.layout(), (5, 6));
        let f = bank.frequencies();
        let expected = [0.25, 0.125, 0.0625, 0.03125, 0.015625];
        for (a, b) in f.iter().zip(expected) {
            assert!((a - b).abs() < 1e-15);
        }
        let o = bank.orientations();
        for (i, a) in o.iter().enumerate() {
            assert!((a - 30.0 * i as f64).abs() < 1e-12);
        }
    }

    #[test]
    fn gist_layout() {
        let bank = build_gabor_bank(4, 8, 0.25).unwrap();
        assert_eq!(bank.len(), 32);
        let o = bank.orientations();
        assert!((o[1] - 22.5).abs() < 1e-12);
        assert!((o[7] - 157.5).abs() < 1e-12);
    }

    #[test]
    fn masks_are_dc_free() {
        for bank in [build_gabor_bank(5, 6, 0.25).unwrap(), build_gabor_bank(4, 8, 0.25).unwrap()] {
            for f in bank.filters() {
                let (re, im) = f.mean();
                assert!(re.abs() < 1e-10 && im.abs() < 1e-10, "{re} {im}");
            }
        }
    }

    #[test]
    fn rejects_aliasing_and_empty_banks() {
        assert!(matches!(build_gabor_bank(5, 6, 0.6), Err(Error::Aliasing { .. })));
        assert!(build_gabor_bank(0, 6, 0.25).is_err());
        assert!(build_gabor_bank(5, 0, 0.25).is_err());
        assert!(build_gabor_bank(5, 6, 0.0).is_err());
        assert!(build_gabor_bank(1, 1, 0.5).is_ok());
    }

    #[test]
    fn one_octave_sigma() {
        // sigma * f = sqrt(ln 2 / 2) * 3 / pi for a one-octave bandwidth.
        let s = sigma_for_bandwidth(0.25, 1.0);
        assert!((s * 0.25 - 0.5622).abs() < 1e-4);
    }

    #[test]
    fn constant_image_has_no_response() {
        let bank = build_gabor_bank(5, 6, 0.25).unwrap();
        let img = Image::filled(40, 30, 173.0);
        for point in [(20, 15), (0, 0), (39, 29)] {
            let m = gabor_at_point(&img, point, &bank).unwrap();
            assert!(m.iter().all(|&v| v < 1e-8), "{m:?}");
        }
    }

    #[test]
    fn corner_sample_is_finite() {
        let bank = build_gabor_bank(5, 6, 0.25).unwrap();
        let img = Image::from_fn(32, 32, |x, y| ((x * 13 + y * 7) % 256) as f64);
        let m = gabor_at_point(&img, (0, 0), &bank).unwrap();
        assert_eq!(m.len(), 30);
        assert!(m.iter().all(|v| v.is_finite()));
        assert!(gabor_at_point(&img, (32, 0), &bank).is_err());
    }

    #[test]
    fn sinusoid_selects_matching_channel() {
        let bank = build_gabor_bank(5, 6, 0.25).unwrap();
        let (f, theta) = (0.125f64, 30f64.to_radians());
        let img = Image::from_fn(96, 96, |x, y| {
            let u = x as f64 * theta.cos() + y as f64 * theta.sin();
            128.0 + 100.0 * (2.0 * std::f64::consts::PI * f * u).sin()
        });
        let m = gabor_at_point(&img, (48, 48), &bank).unwrap();
        let target = bank.channel(1, 1);
        for (i, v) in m.iter().enumerate() {
            if i != target {
                assert!(m[target] > *v, "channel {i}: {v} >= {}", m[target]);
            }
        }
    }
}

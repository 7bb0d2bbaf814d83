//! Eye-center estimation and similarity normalization of a frame.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::image::{clamp_intensity, Image};

/// Number of points in the annotation scheme.
pub const LANDMARK_COUNT: usize = 68;

/// 0-based indices of the subject's right eye (points 37-42, 1-based).
pub const RIGHT_EYE: std::ops::Range<usize> = 36..42;
/// 0-based indices of the subject's left eye (points 43-48, 1-based).
pub const LEFT_EYE: std::ops::Range<usize> = 42..48;

/// Target eye-to-eye distance after normalization, in pixels.
pub const TARGET_INTEROCULAR: f64 = 100.0;

/// Accepted range for the normalization scale factor.
pub const MIN_SCALE: f64 = 0.05;
pub const MAX_SCALE: f64 = 20.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn distance(self, other: Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    pub fn midpoint(self, other: Point) -> Point {
        Point::new(0.5 * (self.x + other.x), 0.5 * (self.y + other.y))
    }
}

/// The 68 annotated facial points of one frame.
#[derive(Debug, Clone, PartialEq)]
pub struct LandmarkSet {
    points: Vec<Point>,
}

impl LandmarkSet {
    pub fn new(points: Vec<Point>) -> Result<Self> {
        if points.len() != LANDMARK_COUNT {
            return Err(Error::Argument(format!(
                "expected {LANDMARK_COUNT} landmarks, got {}",
                points.len()
            )));
        }
        if points.iter().any(|p| !p.x.is_finite() || !p.y.is_finite()) {
            return Err(Error::Argument("landmark coordinates must be finite".into()));
        }
        Ok(LandmarkSet { points })
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    /// Parses the plain-text layout: one `x y` pair per line, decimal or
    /// scientific notation, blank lines ignored.
    pub fn parse(text: &str) -> std::result::Result<Self, String> {
        let mut points = Vec::with_capacity(LANDMARK_COUNT);
        for (n, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let mut fields = line.split_whitespace();
            let mut next = || -> std::result::Result<f64, String> {
                let field = fields
                    .next()
                    .ok_or_else(|| format!("line {}: expected two coordinates", n + 1))?;
                field
                    .parse::<f64>()
                    .map_err(|e| format!("line {}: {e}", n + 1))
            };
            let x = next()?;
            let y = next()?;
            if fields.next().is_some() {
                return Err(format!("line {}: expected two coordinates", n + 1));
            }
            points.push(Point::new(x, y));
        }
        LandmarkSet::new(points).map_err(|e| e.to_string())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text).map_err(|m| Error::format(path, m))
    }

    pub fn to_text(&self) -> String {
        self.points
            .iter()
            .map(|p| format!("{:.7e} {:.7e}\n", p.x, p.y))
            .collect()
    }

    pub fn translated(&self, dx: f64, dy: f64) -> LandmarkSet {
        LandmarkSet {
            points: self
                .points
                .iter()
                .map(|p| Point::new(p.x + dx, p.y + dy))
                .collect(),
        }
    }
}

/// Eye centers and the derived scale/rotation of the face.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EyeGeometry {
    /// Subject's left eye (usually on the image right).
    pub left_center: Point,
    /// Subject's right eye (usually on the image left).
    pub right_center: Point,
    pub interocular: f64,
    /// Angle of the right-to-left eye line against the image x axis, in
    /// degrees, wrapped into `(-90, 90]`. Positive means the left eye sits
    /// lower in the image (rows grow downwards).
    pub roll_angle: f64,
}

impl EyeGeometry {
    pub fn from_centers(right_center: Point, left_center: Point) -> Result<Self> {
        let interocular = right_center.distance(left_center);
        if !(interocular > 1e-9) {
            return Err(Error::DegenerateGeometry(format!(
                "eye centers coincide at ({:.3}, {:.3})",
                right_center.x, right_center.y
            )));
        }
        let raw = (left_center.y - right_center.y)
            .atan2(left_center.x - right_center.x)
            .to_degrees();
        Ok(EyeGeometry {
            left_center,
            right_center,
            interocular,
            roll_angle: wrap_roll(raw),
        })
    }

    pub fn midpoint(&self) -> Point {
        self.left_center.midpoint(self.right_center)
    }
}

fn wrap_roll(mut deg: f64) -> f64 {
    while deg > 90.0 {
        deg -= 180.0;
    }
    while deg <= -90.0 {
        deg += 180.0;
    }
    deg
}

fn centroid(points: &[Point]) -> Point {
    let n = points.len() as f64;
    let (sx, sy) = points
        .iter()
        .fold((0.0, 0.0), |(sx, sy), p| (sx + p.x, sy + p.y));
    Point::new(sx / n, sy / n)
}

/// Each eye center is the mean of its six contour points.
pub fn compute_eye_geometry(landmarks: &LandmarkSet) -> Result<EyeGeometry> {
    let pts = landmarks.points();
    let right = centroid(&pts[RIGHT_EYE]);
    let left = centroid(&pts[LEFT_EYE]);
    EyeGeometry::from_centers(right, left)
}

/// The composite resize-then-rotate map applied by [`normalize_geometry`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalizingTransform {
    pub scale: f64,
    /// Rotation applied to the resized image, in degrees (the negated roll).
    pub rotation: f64,
    /// Rotation center in resized coordinates.
    pub pivot: Point,
    pub output_width: usize,
    pub output_height: usize,
}

impl NormalizingTransform {
    pub fn new(geom: &EyeGeometry, width: usize, height: usize) -> Result<Self> {
        if !(geom.interocular > 0.0) {
            return Err(Error::DegenerateGeometry(format!(
                "interocular distance {} is not positive",
                geom.interocular
            )));
        }
        let scale = TARGET_INTEROCULAR / geom.interocular;
        if !(MIN_SCALE..=MAX_SCALE).contains(&scale) {
            return Err(Error::ImplausibleGeometry {
                scale,
                min: MIN_SCALE,
                max: MAX_SCALE,
            });
        }
        let output_width = ((width as f64 * scale).round() as usize).max(1);
        let output_height = ((height as f64 * scale).round() as usize).max(1);
        let pivot = resize_point(geom.midpoint(), scale);
        Ok(NormalizingTransform {
            scale,
            rotation: -geom.roll_angle,
            pivot,
            output_width,
            output_height,
        })
    }

    /// Maps a point of the source frame into the normalized frame.
    pub fn map_point(&self, p: Point) -> Point {
        let q = resize_point(p, self.scale);
        rotate_about(q, self.pivot, self.rotation.to_radians())
    }

    pub fn map_landmarks(&self, landmarks: &LandmarkSet) -> LandmarkSet {
        LandmarkSet {
            points: landmarks.points().iter().map(|&p| self.map_point(p)).collect(),
        }
    }
}

/// Pixel centers scale about the image origin corner: `(x + 0.5) s - 0.5`.
fn resize_point(p: Point, scale: f64) -> Point {
    Point::new((p.x + 0.5) * scale - 0.5, (p.y + 0.5) * scale - 0.5)
}

fn rotate_about(p: Point, pivot: Point, angle: f64) -> Point {
    let (s, c) = angle.sin_cos();
    let dx = p.x - pivot.x;
    let dy = p.y - pivot.y;
    Point::new(pivot.x + c * dx - s * dy, pivot.y + s * dx + c * dy)
}

/// Rescales the frame so the eyes are 100 px apart, then rotates it about
/// the eye midpoint so the eye line is horizontal. Both steps use bicubic
/// interpolation; samples falling outside the source are 0.
pub fn normalize_geometry(img: &Image, geom: &EyeGeometry) -> Result<(Image, EyeGeometry)> {
    let t = NormalizingTransform::new(geom, img.width(), img.height())?;
    let resized = resize_bicubic(img, t.scale, t.output_width, t.output_height);
    let rotated = if t.rotation == 0.0 {
        resized
    } else {
        rotate_bicubic(&resized, t.pivot, t.rotation.to_radians())
    };
    let out_geom = EyeGeometry::from_centers(t.map_point(geom.right_center), t.map_point(geom.left_center))?;
    Ok((rotated, out_geom))
}

/// Keys cubic convolution kernel with `a = -0.5`.
#[inline]
pub(crate) fn cubic_kernel(t: f64) -> f64 {
    const A: f64 = -0.5;
    let t = t.abs();
    if t <= 1.0 {
        ((A + 2.0) * t - (A + 3.0)) * t * t + 1.0
    } else if t < 2.0 {
        ((A * t - 5.0 * A) * t + 8.0 * A) * t - 4.0 * A
    } else {
        0.0
    }
}

fn resize_bicubic(img: &Image, scale: f64, out_w: usize, out_h: usize) -> Image {
    // Exact identity short-circuit keeps unit-scale frames bit-identical.
    if scale == 1.0 && out_w == img.width() && out_h == img.height() {
        return img.clone();
    }
    let taps_x = axis_taps(out_w, scale);
    let taps_y = axis_taps(out_h, scale);

    // Horizontal pass.
    let mut tmp = vec![0.0; out_w * img.height()];
    for y in 0..img.height() {
        let row = img.row(y);
        for (x, (first, weights)) in taps_x.iter().enumerate() {
            let mut acc = 0.0;
            for (k, w) in weights.iter().enumerate() {
                let sx = (first + k as isize).clamp(0, img.width() as isize - 1) as usize;
                acc += w * row[sx];
            }
            tmp[y * out_w + x] = acc;
        }
    }
    // Vertical pass.
    let mut out = vec![0.0; out_w * out_h];
    for (y, (first, weights)) in taps_y.iter().enumerate() {
        for (k, w) in weights.iter().enumerate() {
            let sy = (first + k as isize).clamp(0, img.height() as isize - 1) as usize;
            let src = &tmp[sy * out_w..(sy + 1) * out_w];
            let dst = &mut out[y * out_w..(y + 1) * out_w];
            for (d, s) in dst.iter_mut().zip(src) {
                *d += w * s;
            }
        }
    }
    Image::from_fn(out_w, out_h, |x, y| out[y * out_w + x])
}

/// Per-output-coordinate taps for a 1-D bicubic resample: the first source
/// index and its weights. When shrinking, the kernel is stretched by
/// `1/scale` so it low-passes the input.
fn axis_taps(dst_len: usize, scale: f64) -> Vec<(isize, Vec<f64>)> {
    let stretch = if scale < 1.0 { 1.0 / scale } else { 1.0 };
    let support = 2.0 * stretch;
    (0..dst_len)
        .map(|d| {
            let center = (d as f64 + 0.5) / scale - 0.5;
            let lo = (center - support).ceil() as isize;
            let hi = (center + support).floor() as isize;
            let mut weights: Vec<f64> = (lo..=hi)
                .map(|s| cubic_kernel((s as f64 - center) / stretch))
                .collect();
            let sum: f64 = weights.iter().sum();
            if sum.abs() > 1e-12 {
                weights.iter_mut().for_each(|w| *w /= sum);
            }
            (lo, weights)
        })
        .collect()
}

/// Bicubic sample at a fractional position; `None` outside the raster.
pub(crate) fn sample_bicubic(img: &Image, x: f64, y: f64) -> Option<f64> {
    let w = img.width() as f64;
    let h = img.height() as f64;
    if !(x >= -0.5 && x <= w - 0.5 && y >= -0.5 && y <= h - 0.5) {
        return None;
    }
    let x0 = x.floor();
    let y0 = y.floor();
    let fx = x - x0;
    let fy = y - y0;
    let (x0, y0) = (x0 as isize, y0 as isize);
    let wx = [
        cubic_kernel(1.0 + fx),
        cubic_kernel(fx),
        cubic_kernel(1.0 - fx),
        cubic_kernel(2.0 - fx),
    ];
    let wy = [
        cubic_kernel(1.0 + fy),
        cubic_kernel(fy),
        cubic_kernel(1.0 - fy),
        cubic_kernel(2.0 - fy),
    ];
    let mut acc = 0.0;
    for (j, wyj) in wy.iter().enumerate() {
        if *wyj == 0.0 {
            continue;
        }
        let sy = y0 - 1 + j as isize;
        let mut row = 0.0;
        for (i, wxi) in wx.iter().enumerate() {
            if *wxi == 0.0 {
                continue;
            }
            row += wxi * img.get_clamped(x0 - 1 + i as isize, sy);
        }
        acc += wyj * row;
    }
    Some(acc)
}

/// Rotates the image content by `angle` radians about `pivot`, keeping the
/// raster size.
fn rotate_bicubic(img: &Image, pivot: Point, angle: f64) -> Image {
    let (s, c) = angle.sin_cos();
    Image::from_fn(img.width(), img.height(), |x, y| {
        // Inverse map: rotate the destination back by -angle.
        let dx = x as f64 - pivot.x;
        let dy = y as f64 - pivot.y;
        let sx = pivot.x + c * dx + s * dy;
        let sy = pivot.y - s * dx + c * dy;
        sample_bicubic(img, sx, sy).map_or(0.0, clamp_intensity)
    })
}

//! Generated face-like corpora with known class structure.
//!
//! Every frame is a full canvas carrying an oriented sinusoid defined in
//! face coordinates (eye midpoint at the origin, eyes 100 units apart,
//! rows growing downwards), so after geometric normalization the periocular
//! ROI shows the class texture at a fixed frequency whatever the pose. The
//! texture depends on `|x|` and is therefore unchanged by horizontal
//! mirroring. Subjects differ in phase, pose and noise.

use std::f64::consts::TAU;
use std::fs;
use std::path::Path;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::eval::{Expression, FrameSource, Sequence};
use crate::image::Image;
use crate::imgproc::{LandmarkSet, Point};

/// The classes present in generated corpora.
pub const SYNTHETIC_CLASSES: [Expression; 4] = [
    Expression::Neutral,
    Expression::Happy,
    Expression::Sad,
    Expression::Surprise,
];

/// Texture orientation of a class in degrees, `None` if unused.
pub fn class_orientation(e: Expression) -> Option<f64> {
    SYNTHETIC_CLASSES
        .iter()
        .position(|c| *c == e)
        .map(|i| 45.0 * i as f64)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SyntheticParams {
    /// Subjects with labeled sequences.
    pub subjects: usize,
    pub sequences_per_subject: usize,
    pub frames_per_sequence: usize,
    /// Extra subjects whose single sequence has no label.
    pub neutral_only_subjects: usize,
    pub width: usize,
    pub height: usize,
    /// Texture frequency in cycles per normalized pixel.
    pub frequency: f64,
    /// Sinusoid amplitude around mid-gray.
    pub amplitude: f64,
    /// Half-width of the uniform pixel noise.
    pub noise: f64,
    pub seed: u64,
}

impl Default for SyntheticParams {
    fn default() -> Self {
        SyntheticParams {
            subjects: 20,
            sequences_per_subject: 1,
            frames_per_sequence: 4,
            neutral_only_subjects: 0,
            width: 320,
            height: 240,
            frequency: 0.125,
            amplitude: 70.0,
            noise: 8.0,
            seed: 0,
        }
    }
}

/// Placement of the face in the canvas.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FacePose {
    /// Eye midpoint in canvas pixels.
    pub center: Point,
    /// Canvas pixels per face unit; the interocular distance is `100 * scale`.
    pub scale: f64,
    /// In-plane rotation in degrees, same sign convention as the roll angle.
    pub roll: f64,
}

impl FacePose {
    pub fn to_canvas(&self, q: Point) -> Point {
        let (s, c) = self.roll.to_radians().sin_cos();
        Point::new(
            self.center.x + self.scale * (c * q.x - s * q.y),
            self.center.y + self.scale * (s * q.x + c * q.y),
        )
    }

    pub fn to_face(&self, p: Point) -> Point {
        let (s, c) = self.roll.to_radians().sin_cos();
        let dx = (p.x - self.center.x) / self.scale;
        let dy = (p.y - self.center.y) / self.scale;
        Point::new(c * dx + s * dy, -s * dx + c * dy)
    }
}

/// 68 points in the usual annotation order. The eye contours are hexagons
/// of radius 8 face units around `(-50, 0)` and `(50, 0)`; the rest of the
/// face is a rough outline.
pub fn face_landmarks(pose: &FacePose) -> LandmarkSet {
    let mut q = Vec::with_capacity(68);
    // Jaw line.
    for i in 0..17 {
        let a = std::f64::consts::PI * i as f64 / 16.0;
        q.push(Point::new(-95.0 * a.cos(), 10.0 + 120.0 * a.sin()));
    }
    // Brows.
    for i in 0..10 {
        let k = (i % 5) as f64;
        let x = if i < 5 { -85.0 } else { 25.0 } + 15.0 * k;
        q.push(Point::new(x, -28.0 - 4.0 * (2.0 - (2.0 - k).abs())));
    }
    // Nose bridge and base.
    for i in 0..4 {
        q.push(Point::new(0.0, 10.0 + 15.0 * i as f64));
    }
    for i in 0..5 {
        q.push(Point::new(-20.0 + 10.0 * i as f64, 72.0));
    }
    for center in [-50.0, 50.0] {
        for k in 0..6 {
            let a = TAU * k as f64 / 6.0;
            q.push(Point::new(center + 8.0 * a.cos(), 8.0 * a.sin()));
        }
    }
    // Mouth: outer then inner contour.
    for k in 0..12 {
        let a = TAU * k as f64 / 12.0;
        q.push(Point::new(-35.0 * a.cos(), 105.0 + 12.0 * a.sin()));
    }
    for k in 0..8 {
        let a = TAU * k as f64 / 8.0;
        q.push(Point::new(-22.0 * a.cos(), 105.0 + 5.0 * a.sin()));
    }
    LandmarkSet::new(q.into_iter().map(|p| pose.to_canvas(p)).collect()).expect("68 finite points")
}

/// Class texture rendered onto the canvas under `pose`.
pub fn render_frame(
    params: &SyntheticParams,
    pose: &FacePose,
    orientation_deg: f64,
    phase: f64,
    rng: &mut ChaCha8Rng,
) -> Image {
    let (s, c) = orientation_deg.to_radians().sin_cos();
    let w = TAU * params.frequency;
    Image::from_fn(params.width, params.height, |x, y| {
        let q = pose.to_face(Point::new(x as f64, y as f64));
        let t = q.x.abs() * c + q.y * s;
        let noise = if params.noise > 0.0 {
            rng.gen_range(-params.noise..=params.noise)
        } else {
            0.0
        };
        128.0 + params.amplitude * (w * t + phase).cos() + noise
    })
}

/// Labeled subjects first (`S001`, `S002`, ...), then neutral-only ones.
/// Labeled subject `s` uses expression `(s + q) mod 3` of the three
/// non-neutral synthetic classes for its sequence `q`.
pub fn generate(params: &SyntheticParams) -> Vec<Sequence> {
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let expressive = &SYNTHETIC_CLASSES[1..];
    let total = params.subjects + params.neutral_only_subjects;
    let mut sequences = Vec::new();
    for s in 0..total {
        let labeled = s < params.subjects;
        let phase = rng.gen_range(0.0..TAU);
        let base = FacePose {
            center: Point::new(
                params.width as f64 / 2.0 + rng.gen_range(-8.0..8.0),
                params.height as f64 * 0.45 + rng.gen_range(-8.0..8.0),
            ),
            scale: rng.gen_range(0.85..1.15),
            roll: rng.gen_range(-8.0..8.0),
        };
        let n_seq = if labeled { params.sequences_per_subject } else { 1 };
        for q in 0..n_seq {
            let label = labeled.then(|| expressive[(s + q) % expressive.len()]);
            let n = params.frames_per_sequence.max(1);
            let frames = (0..n)
                .map(|i| {
                    let apex = label.is_some() && i >= 1 && i + 3 >= n;
                    let class = if apex { label.unwrap() } else { Expression::Neutral };
                    let pose = FacePose {
                        center: Point::new(
                            base.center.x + rng.gen_range(-1.0..1.0),
                            base.center.y + rng.gen_range(-1.0..1.0),
                        ),
                        scale: base.scale * rng.gen_range(0.98..1.02),
                        roll: base.roll + rng.gen_range(-1.0..1.0),
                    };
                    let theta = class_orientation(class).unwrap_or(0.0);
                    let image = render_frame(params, &pose, theta, phase, &mut rng);
                    FrameSource::Memory {
                        image: Arc::new(image),
                        landmarks: face_landmarks(&pose),
                    }
                })
                .collect();
            sequences.push(Sequence {
                subject_id: format!("S{:03}", s + 1),
                sequence_id: format!("{:03}", q + 1),
                frames,
                label,
            });
        }
    }
    sequences
}

/// Writes sequences in the on-disk dataset layout read by
/// [`crate::eval::ingest_dataset`]. Pixels are rounded to 8 bits.
pub fn write_dataset(sequences: &[Sequence], root: &Path) -> Result<()> {
    for seq in sequences {
        let dir = root.join(&seq.subject_id).join(&seq.sequence_id);
        fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
        for (i, frame) in seq.frames.iter().enumerate() {
            let stem = format!("{}_{}_{:08}", seq.subject_id, seq.sequence_id, i + 1);
            let (image, landmarks) = frame.load()?;
            image.save_png(dir.join(format!("{stem}.png")))?;
            let lm = dir.join(format!("{stem}_landmarks.txt"));
            fs::write(&lm, landmarks.to_text()).map_err(|e| Error::io(&lm, e))?;
        }
        if let Some(label) = seq.label {
            let path = dir.join(format!(
                "{}_{}_{:08}_emotion.txt",
                seq.subject_id,
                seq.sequence_id,
                seq.frames.len()
            ));
            fs::write(&path, format!("{label}\n")).map_err(|e| Error::io(&path, e))?;
        }
    }
    Ok(())
}

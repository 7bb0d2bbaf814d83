//! Dataset ingestion and per-sequence frame selection.
//!
//! On-disk layout:
//!
//! ```text
//! root/<subject>/<sequence>/
//!     <frame>.png | <frame>.jpg      frames, ordered by file name
//!     <frame>_landmarks.txt           68 `x y` lines (or <frame>.txt)
//!     *_emotion.txt | emotion.txt | label.txt   optional one-line label
//! ```

use std::borrow::Cow;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::eval::expression::Expression;
use crate::image::Image;
use crate::imgproc::LandmarkSet;

const IMAGE_EXTENSIONS: [&str; 3] = ["png", "jpg", "jpeg"];

/// Where a frame's pixels and landmarks come from.
#[derive(Debug, Clone)]
pub enum FrameSource {
    Files { image: PathBuf, landmarks: PathBuf },
    Memory { image: Arc<Image>, landmarks: LandmarkSet },
}

impl FrameSource {
    pub fn load(&self) -> Result<(Cow<'_, Image>, LandmarkSet)> {
        match self {
            FrameSource::Files { image, landmarks } => {
                Ok((Cow::Owned(Image::load(image)?), LandmarkSet::load(landmarks)?))
            }
            FrameSource::Memory { image, landmarks } => Ok((Cow::Borrowed(image), landmarks.clone())),
        }
    }

    /// Short name for logs and error messages.
    pub fn describe(&self) -> String {
        match self {
            FrameSource::Files { image, .. } => image.display().to_string(),
            FrameSource::Memory { .. } => "<in-memory frame>".into(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Sequence {
    pub subject_id: String,
    pub sequence_id: String,
    pub frames: Vec<FrameSource>,
    /// `None` for sequences without a label file.
    pub label: Option<Expression>,
}

/// A selected frame with its class.
#[derive(Debug, Clone)]
pub struct LabeledFrame {
    pub subject_id: String,
    pub sequence_id: String,
    /// 1-based position within the sequence.
    pub frame_index: usize,
    pub label: Expression,
    pub source: FrameSource,
}

fn visible_entries(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut out = Vec::new();
    for entry in fs::read_dir(dir).map_err(|e| Error::io(dir, e))? {
        let path = entry.map_err(|e| Error::io(dir, e))?.path();
        let hidden = path
            .file_name()
            .and_then(|n| n.to_str())
            .is_none_or(|n| n.starts_with('.'));
        if !hidden {
            out.push(path);
        }
    }
    out.sort();
    Ok(out)
}

fn file_name(path: &Path) -> String {
    path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default()
}

fn is_image(path: &Path) -> bool {
    path.extension()
        .and_then(|e| e.to_str())
        .is_some_and(|e| IMAGE_EXTENSIONS.contains(&e.to_ascii_lowercase().as_str()))
}

fn is_label_file(name: &str) -> bool {
    let lower = name.to_ascii_lowercase();
    lower.ends_with("_emotion.txt") || lower == "emotion.txt" || lower == "label.txt"
}

fn read_label(path: &Path) -> Result<Expression> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let line = text.lines().map(str::trim).find(|l| !l.is_empty()).unwrap_or("");
    Expression::parse_label(line).ok_or_else(|| Error::format(path, format!("unknown label `{line}`")))
}

fn find_landmarks(image: &Path) -> Option<PathBuf> {
    let stem = image.file_stem()?.to_string_lossy();
    let dir = image.parent()?;
    [format!("{stem}_landmarks.txt"), format!("{stem}.txt")]
        .into_iter()
        .map(|n| dir.join(n))
        .find(|p| p.is_file())
}

/// Reads one sequence directory. `Ok(None)` means the sequence was skipped
/// (no frames, or a frame without landmarks); the reason is logged.
fn read_sequence(subject_id: &str, dir: &Path) -> Result<Option<Sequence>> {
    let sequence_id = file_name(dir);
    let entries = visible_entries(dir)?;
    let mut label = None;
    for path in entries.iter().filter(|p| p.is_file() && is_label_file(&file_name(p))) {
        if label.is_some() {
            return Err(Error::format(path, "more than one label file in the sequence"));
        }
        label = Some(read_label(path)?);
    }
    let mut frames = Vec::new();
    for image in entries.iter().filter(|p| p.is_file() && is_image(p)) {
        match find_landmarks(image) {
            Some(landmarks) => frames.push(FrameSource::Files {
                image: image.clone(),
                landmarks,
            }),
            None => {
                log::warn!(
                    "skipping sequence {subject_id}/{sequence_id}: no landmark file for {}",
                    image.display()
                );
                return Ok(None);
            }
        }
    }
    if frames.is_empty() {
        log::warn!("skipping sequence {subject_id}/{sequence_id}: no frames");
        return Ok(None);
    }
    Ok(Some(Sequence {
        subject_id: subject_id.to_string(),
        sequence_id,
        frames,
        label,
    }))
}

/// All valid sequences below `root`, sorted by subject then sequence.
pub fn ingest_dataset(root: impl AsRef<Path>) -> Result<Vec<Sequence>> {
    let root = root.as_ref();
    let mut sequences = Vec::new();
    for subject_dir in visible_entries(root)?.into_iter().filter(|p| p.is_dir()) {
        let subject_id = file_name(&subject_dir);
        for seq_dir in visible_entries(&subject_dir)?.into_iter().filter(|p| p.is_dir()) {
            if let Some(seq) = read_sequence(&subject_id, &seq_dir)? {
                sequences.push(seq);
            }
        }
    }
    Ok(sequences)
}

/// First frame as neutral; for labeled sequences also the last three frames
/// (or every frame after the first when the sequence is shorter than four).
pub fn select_frames(seq: &Sequence) -> Vec<LabeledFrame> {
    let make = |i: usize, label: Expression| LabeledFrame {
        subject_id: seq.subject_id.clone(),
        sequence_id: seq.sequence_id.clone(),
        frame_index: i + 1,
        label,
        source: seq.frames[i].clone(),
    };
    let n = seq.frames.len();
    if n == 0 {
        return Vec::new();
    }
    let mut out = vec![make(0, Expression::Neutral)];
    if let Some(label) = seq.label {
        let first_apex = if n >= 4 { n - 3 } else { 1 };
        out.extend((first_apex..n).map(|i| make(i, label)));
    }
    out
}

/// `select_frames` over every sequence, in order.
pub fn select_all(sequences: &[Sequence]) -> Vec<LabeledFrame> {
    sequences.iter().flat_map(select_frames).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::imgproc::Point;

    fn memory_sequence(n: usize, label: Option<Expression>) -> Sequence {
        let lm = LandmarkSet::new(vec![Point::new(0.0, 0.0); 68]).unwrap();
        Sequence {
            subject_id: "S1".into(),
            sequence_id: "001".into(),
            frames: (0..n)
                .map(|_| FrameSource::Memory {
                    image: Arc::new(Image::filled(4, 4, 0.0)),
                    landmarks: lm.clone(),
                })
                .collect(),
            label,
        }
    }

    #[test]
    fn selection_rules() {
        let happy = select_frames(&memory_sequence(10, Some(Expression::Happy)));
        let idx: Vec<_> = happy.iter().map(|f| (f.frame_index, f.label)).collect();
        assert_eq!(
            idx,
            vec![
                (1, Expression::Neutral),
                (8, Expression::Happy),
                (9, Expression::Happy),
                (10, Expression::Happy)
            ]
        );
        assert_eq!(select_frames(&memory_sequence(7, None)).len(), 1);
        assert_eq!(select_frames(&memory_sequence(1, Some(Expression::Sad))).len(), 1);
        let short = select_frames(&memory_sequence(3, Some(Expression::Fear)));
        assert_eq!(short.iter().map(|f| f.frame_index).collect::<Vec<_>>(), vec![1, 2, 3]);
        assert_eq!(select_frames(&memory_sequence(4, Some(Expression::Fear))).len(), 4);
    }

    fn write_frame(dir: &Path, stem: &str, with_landmarks: bool) {
        Image::filled(8, 8, 100.0).save_png(dir.join(format!("{stem}.png"))).unwrap();
        if with_landmarks {
            let lm = LandmarkSet::new(vec![Point::new(1.0, 2.0); 68]).unwrap();
            fs::write(dir.join(format!("{stem}_landmarks.txt")), lm.to_text()).unwrap();
        }
    }

    #[test]
    fn ingest_layout() {
        let tmp = tempfile::tempdir().unwrap();
        assert!(ingest_dataset(tmp.path()).unwrap().is_empty());

        let a = tmp.path().join("S010").join("002");
        let b = tmp.path().join("S005").join("001");
        let bad = tmp.path().join("S005").join("003");
        for d in [&a, &b, &bad] {
            fs::create_dir_all(d).unwrap();
        }
        for i in (1..=10).rev() {
            write_frame(&a, &format!("f{i:03}"), true);
        }
        fs::write(a.join("S010_002_00000010_emotion.txt"), "   5.0000000e+00\n").unwrap();
        write_frame(&b, "f001", true);
        write_frame(&b, "f002", true);
        write_frame(&bad, "f001", true);
        write_frame(&bad, "f002", false);

        let seqs = ingest_dataset(tmp.path()).unwrap();
        assert_eq!(seqs.len(), 2);
        assert_eq!((seqs[0].subject_id.as_str(), seqs[0].label), ("S005", None));
        assert_eq!(seqs[1].label, Some(Expression::Happy));
        assert_eq!(seqs[1].frames.len(), 10);
        match &seqs[1].frames[0] {
            FrameSource::Files { image, .. } => assert!(image.ends_with("f001.png")),
            _ => unreachable!(),
        }
        assert_eq!(select_all(&seqs).len(), 1 + 4);

        fs::write(b.join("label.txt"), "bored").unwrap();
        assert!(matches!(ingest_dataset(tmp.path()), Err(Error::Format { .. })));
        assert!(ingest_dataset(tmp.path().join("missing")).is_err());
    }
}

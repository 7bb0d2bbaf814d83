//! Leave-one-subject-out folds and training-set mirroring.

use std::collections::BTreeSet;

use crate::eval::dataset::LabeledFrame;
use crate::eval::expression::Expression;
use crate::image::Image;
use crate::imgproc::mirror_horizontal;

/// Frame indices into the slice given to [`loso_folds`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fold {
    pub subject_id: String,
    pub train: Vec<usize>,
    pub test: Vec<usize>,
}

/// One fold per subject with at least one non-neutral frame, ordered by
/// subject id. Subjects with only neutral frames are always in training.
pub fn loso_folds(frames: &[LabeledFrame]) -> Vec<Fold> {
    let subjects: BTreeSet<&str> = frames
        .iter()
        .filter(|f| f.label != Expression::Neutral)
        .map(|f| f.subject_id.as_str())
        .collect();
    subjects
        .into_iter()
        .map(|s| {
            let (test, train): (Vec<usize>, Vec<usize>) =
                (0..frames.len()).partition(|&i| frames[i].subject_id == s);
            Fold {
                subject_id: s.to_string(),
                train,
                test,
            }
        })
        .collect()
}

/// Appends the horizontal mirror of every sample with the same label.
pub fn augment_mirror<L: Clone>(train: &[(Image, L)]) -> Vec<(Image, L)> {
    let mut out = train.to_vec();
    out.extend(train.iter().map(|(img, l)| (mirror_horizontal(img), l.clone())));
    out
}

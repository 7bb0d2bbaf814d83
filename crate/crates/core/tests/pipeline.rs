mod common;

use std::fs;

use periocular::config::ExperimentSettings;
use periocular::descriptors::Descriptor;
use periocular::eval::{
    compute_metrics, confusion_from_predictions, ingest_dataset, loso_folds, select_all, ConfusionMatrix,
    Evaluator, Expression,
};
use periocular::imgproc::{RoiSpec, RoiVariant};
use periocular::synthetic::{generate, write_dataset, SyntheticParams};
use periocular::{ErrorKind, Image};
use rand::Rng;

fn fast_settings() -> ExperimentSettings {
    ExperimentSettings {
        roi: RoiSpec::new(RoiVariant::Small, 32).unwrap(),
        ..ExperimentSettings::default()
    }
}

#[test]
fn disk_corpus_matches_generated_corpus() {
    let params = SyntheticParams {
        subjects: 4,
        sequences_per_subject: 2,
        frames_per_sequence: 6,
        neutral_only_subjects: 2,
        ..SyntheticParams::default()
    };
    let generated = generate(&params);
    let tmp = tempfile::tempdir().unwrap();
    write_dataset(&generated, tmp.path()).unwrap();
    let ingested = ingest_dataset(tmp.path()).unwrap();
    assert_eq!(ingested.len(), generated.len());
    for (a, b) in generated.iter().zip(&ingested) {
        assert_eq!((&a.subject_id, &a.sequence_id, a.label), (&b.subject_id, &b.sequence_id, b.label));
        assert_eq!(a.frames.len(), b.frames.len());
        let (ia, la) = a.frames[0].load().unwrap();
        let (ib, lb) = b.frames[0].load().unwrap();
        // PNG storage rounds to whole gray levels.
        let err = ia.data().iter().zip(ib.data()).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
        assert!(err <= 0.5 + 1e-9, "pixel error {err}");
        for (p, q) in la.points().iter().zip(lb.points()) {
            assert!(p.distance(*q) < 1e-4, "landmarks are stored with 8 significant digits");
        }
    }

    let frames = select_all(&ingested);
    assert_eq!(frames.len(), 4 * 2 * 4 + 2);
    let folds = loso_folds(&frames);
    assert_eq!(folds.len(), 4);
    let neutral_only: Vec<usize> = (0..frames.len())
        .filter(|&i| frames[i].subject_id == "S005" || frames[i].subject_id == "S006")
        .collect();
    assert_eq!(neutral_only.len(), 2);
    for f in &folds {
        assert!(neutral_only.iter().all(|i| f.train.contains(i)));
    }
}

#[test]
fn two_subjects_give_two_folds() {
    let frames = select_all(&generate(&SyntheticParams {
        subjects: 2,
        ..SyntheticParams::default()
    }));
    let report = Evaluator::new(fast_settings())
        .unwrap()
        .run(&frames, &[vec![Descriptor::Hog]])
        .unwrap()
        .remove(0);
    assert_eq!(report.folds.len(), 2);
    assert_eq!(report.predictions.len(), 8);
    assert_eq!(confusion_from_predictions(&report.predictions), report.confusion);
    let names: Vec<&str> = Expression::ALL.iter().map(|e| e.name()).collect();
    assert_eq!(compute_metrics(&report.confusion, &names).unwrap(), report.metrics);
    for p in &report.predictions {
        assert_eq!(p.votes.iter().sum::<usize>(), 1, "two training classes give one pair model");
    }
}

#[test]
fn mirroring_can_be_disabled() {
    let frames = select_all(&generate(&SyntheticParams {
        subjects: 3,
        ..SyntheticParams::default()
    }));
    let settings = ExperimentSettings {
        mirror_training: false,
        ..fast_settings()
    };
    let report = Evaluator::new(settings)
        .unwrap()
        .run(&frames, &[vec![Descriptor::Lbp]])
        .unwrap()
        .remove(0);
    for f in &report.folds {
        assert_eq!(f.train_samples + f.test_samples, frames.len());
    }
}

#[test]
fn frame_errors_carry_context() {
    let tmp = tempfile::tempdir().unwrap();
    write_dataset(
        &generate(&SyntheticParams {
            subjects: 2,
            ..SyntheticParams::default()
        }),
        tmp.path(),
    )
    .unwrap();
    let bad = tmp.path().join("S002/001/S002_001_00000004_landmarks.txt");
    fs::write(&bad, "1 2\n3 4\n").unwrap();
    let frames = select_all(&ingest_dataset(tmp.path()).unwrap());
    let err = Evaluator::new(fast_settings())
        .unwrap()
        .run(&frames, &[vec![Descriptor::Lbp]])
        .unwrap_err();
    assert_eq!(err.kind(), ErrorKind::Data);
    let msg = err.to_string();
    assert!(msg.contains("S002") && msg.contains("frame 4"), "{msg}");

    // A frame without landmarks drops its whole sequence.
    fs::remove_file(&bad).unwrap();
    let seqs = ingest_dataset(tmp.path()).unwrap();
    assert_eq!(seqs.len(), 1);
    assert_eq!(seqs[0].subject_id, "S001");
}

#[test]
fn metric_invariances() {
    let mut rng = common::rng(9);
    for _ in 0..200 {
        let n = rng.gen_range(2..=8);
        let rows: Vec<Vec<u64>> = (0..n)
            .map(|_| (0..n).map(|_| rng.gen_range(1..20)).collect())
            .collect();
        let m = ConfusionMatrix::from_rows(rows.clone()).unwrap();
        let base = compute_metrics(&m, &[]).unwrap();

        // Duplicating every sample of one class keeps the recalls.
        let k = rng.gen_range(0..n);
        let mut dup = rows.clone();
        dup[k].iter_mut().for_each(|v| *v *= 2);
        let d = compute_metrics(&ConfusionMatrix::from_rows(dup).unwrap(), &[]).unwrap();
        assert!((d.average_acc - base.average_acc).abs() < 1e-9);

        // Relabelling classes leaves the overall accuracy alone.
        let perm: Vec<usize> = (0..n).rev().collect();
        let permuted: Vec<Vec<u64>> = perm.iter().map(|&i| perm.iter().map(|&j| rows[i][j]).collect()).collect();
        let p = compute_metrics(&ConfusionMatrix::from_rows(permuted).unwrap(), &[]).unwrap();
        assert!((p.overall_acc - base.overall_acc).abs() < 1e-12);

        // Pooling is order independent.
        let other = ConfusionMatrix::from_rows(
            (0..n).map(|_| (0..n).map(|_| rng.gen_range(0..5)).collect()).collect(),
        )
        .unwrap();
        let mut ab = m.clone();
        ab.merge(&other);
        let mut ba = other.clone();
        ba.merge(&m);
        assert_eq!(ab, ba);
    }
}

#[test]
fn fused_features_are_concatenations() {
    let frames = select_all(&generate(&SyntheticParams {
        subjects: 2,
        ..SyntheticParams::default()
    }));
    let ev = Evaluator::new(fast_settings()).unwrap();
    let rois: Vec<Image> = ev.prepare_rois(&frames).unwrap();
    let spec = ev.settings().roi;
    let ex = ev.extractor();
    let fused = ex
        .extract_combination(&rois[0], &[Descriptor::Hog, Descriptor::Glcm], &spec)
        .unwrap();
    let hog = ex.extract(&rois[0], Descriptor::Hog, &spec).unwrap();
    let glcm = ex.extract(&rois[0], Descriptor::Glcm, &spec).unwrap();
    assert_eq!(fused.values, [hog.values, glcm.values].concat());
    assert_eq!(fused.descriptor, Descriptor::Fused);
}

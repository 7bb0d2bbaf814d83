//! Align one generated frame on the eyes and save each stage as PNG.
//!
//! cargo run --example eye_alignment -- [out_dir]

use std::path::PathBuf;

use periocular::eval::FrameSource;
use periocular::imgproc::{
    compute_eye_geometry, extract_roi, normalize_geometry, ClaheParams, RoiSpec, RoiVariant,
};
use periocular::synthetic::{generate, SyntheticParams};

fn main() -> periocular::Result<()> {
    let out = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "alignment_out".into()));
    std::fs::create_dir_all(&out).map_err(|e| periocular::Error::io(&out, e))?;

    let corpus = generate(&SyntheticParams {
        subjects: 1,
        ..SyntheticParams::default()
    });
    let FrameSource::Memory { image, landmarks } = &corpus[0].frames[3] else {
        unreachable!("generated frames live in memory")
    };

    let geom = compute_eye_geometry(landmarks)?;
    println!(
        "input {}x{}  interocular {:.2}px  roll {:+.2} deg",
        image.width(),
        image.height(),
        geom.interocular,
        geom.roll_angle
    );
    let (normalized, g) = normalize_geometry(image, &geom)?;
    println!(
        "normalized {}x{}  interocular {:.2}px  roll {:+.3} deg  eyes at ({:.1},{:.1}) ({:.1},{:.1})",
        normalized.width(),
        normalized.height(),
        g.interocular,
        g.roll_angle,
        g.right_center.x,
        g.right_center.y,
        g.left_center.x,
        g.left_center.y
    );

    image.save_png(out.join("0_input.png"))?;
    normalized.save_png(out.join("1_normalized.png"))?;
    for variant in [RoiVariant::Small, RoiVariant::Large] {
        let spec = RoiSpec::new(variant, 16)?;
        let roi = extract_roi(&normalized, &g, &spec);
        let eq = ClaheParams::default().apply(&roi)?;
        let name = format!("{variant:?}").to_lowercase();
        roi.save_png(out.join(format!("2_roi_{name}.png")))?;
        eq.save_png(out.join(format!("3_clahe_{name}.png")))?;
        println!("{name:>6} ROI {}x{}, {} blocks", spec.width(), spec.height(), spec.block_count());
    }
    println!("wrote {}", out.display());
    Ok(())
}

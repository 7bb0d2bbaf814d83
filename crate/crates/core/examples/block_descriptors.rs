//! Per-block and whole-ROI dimensions for every descriptor, with timings.
//!
//! cargo run --release --example block_descriptors

use std::time::Instant;

use periocular::descriptors::{Descriptor, DescriptorParams, FeatureExtractor};
use periocular::eval::FrameSource;
use periocular::imgproc::{preprocess_frame, ClaheParams, RoiSpec, RoiVariant};
use periocular::synthetic::{generate, SyntheticParams};

fn main() -> periocular::Result<()> {
    let corpus = generate(&SyntheticParams {
        subjects: 1,
        ..SyntheticParams::default()
    });
    let FrameSource::Memory { image, landmarks } = &corpus[0].frames[0] else {
        unreachable!()
    };
    let extractor = FeatureExtractor::new(DescriptorParams::default())?;

    println!("{:<8}{:>6}{:>8}{:>8}{:>10}{:>12}", "desc", "block", "grid", "per", "total", "time");
    for variant in [RoiVariant::Small, RoiVariant::Large] {
        for block in [16, 32] {
            let spec = RoiSpec::new(variant, block)?;
            let roi = preprocess_frame(image, landmarks, &spec, &ClaheParams::default())?;
            let (rows, cols) = spec.grid();
            for d in [Descriptor::Lbp, Descriptor::Hog, Descriptor::Glcm, Descriptor::Gabor, Descriptor::Gist] {
                let start = Instant::now();
                let f = extractor.extract(&roi, d, &spec)?;
                println!(
                    "{:<8}{:>6}{:>8}{:>8}{:>10}{:>12.1?}",
                    d.name(),
                    block,
                    format!("{cols}x{rows}"),
                    extractor.per_block_dims(d)?,
                    f.dims(),
                    start.elapsed()
                );
            }
        }
        println!("-- {variant:?} done");
    }
    Ok(())
}

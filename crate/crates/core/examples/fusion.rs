//! Compare single descriptors with their fusions under leave-one-subject-out.
//!
//! cargo run --release --example fusion -- [subjects] [noise]

use periocular::config::ExperimentSettings;
use periocular::descriptors::Descriptor::{self, Gabor, Glcm, Hog, Lbp};
use periocular::eval::{select_all, Evaluator};
use periocular::imgproc::{RoiSpec, RoiVariant};
use periocular::synthetic::{generate, SyntheticParams};

fn main() -> periocular::Result<()> {
    let mut args = std::env::args().skip(1);
    let subjects = args.next().map_or(8, |s| s.parse().expect("subject count"));
    let noise = args.next().map_or(150.0, |s| s.parse().expect("noise half-width"));
    let frames = select_all(&generate(&SyntheticParams {
        subjects,
        // Uniform noise in gray levels; GLCM degrades first.
        noise,
        ..SyntheticParams::default()
    }));
    let settings = ExperimentSettings {
        roi: RoiSpec::new(RoiVariant::Small, 16)?,
        ..ExperimentSettings::default()
    };
    let combos: Vec<Vec<Descriptor>> = vec![
        vec![Lbp],
        vec![Hog],
        vec![Glcm],
        vec![Gabor],
        vec![Lbp, Hog],
        vec![Lbp, Hog, Glcm],
        vec![Lbp, Hog, Gabor, Glcm],
    ];
    let reports = Evaluator::new(settings)?.run(&frames, &combos)?;
    println!("{:<22}{:>9}{:>9}{:>9}", "combination", "average", "overall", "min");
    for r in &reports {
        println!(
            "{:<22}{:>9.1}{:>9.1}{:>9.1}",
            r.name, r.metrics.average_acc, r.metrics.overall_acc, r.metrics.min_acc
        );
    }
    Ok(())
}

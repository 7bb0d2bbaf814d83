//! Leave-one-subject-out evaluation on a generated corpus.
//!
//! cargo run --release --example loso_synthetic -- [subjects] [descriptor...]

use std::time::Instant;

use periocular::config::ExperimentSettings;
use periocular::descriptors::Descriptor;
use periocular::eval::{select_all, summary_table, Evaluator};
use periocular::synthetic::{generate, SyntheticParams};

fn main() -> periocular::Result<()> {
    let mut args = std::env::args().skip(1);
    let subjects = args.next().map_or(20, |s| s.parse().expect("subject count"));
    let mut combos: Vec<Vec<Descriptor>> = args
        .map(|a| a.split('+').map(|d| d.parse()).collect())
        .collect::<periocular::Result<_>>()?;
    if combos.is_empty() {
        combos = vec![vec![Descriptor::Gabor], vec![Descriptor::Lbp, Descriptor::Hog, Descriptor::Glcm]];
    }

    let corpus = generate(&SyntheticParams {
        subjects,
        ..SyntheticParams::default()
    });
    let frames = select_all(&corpus);
    println!("{} sequences, {} selected frames", corpus.len(), frames.len());

    let start = Instant::now();
    let evaluator = Evaluator::new(ExperimentSettings::default())?;
    let reports = evaluator.run(&frames, &combos)?;
    for r in &reports {
        println!("{}", r.text_table());
    }
    print!("{}", summary_table(&reports));
    println!("elapsed {:.1?}", start.elapsed());
    Ok(())
}

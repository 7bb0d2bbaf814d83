//! Write a generated corpus in the on-disk sequence layout, with a config
//! file that the `periocular` command can run against.
//!
//! cargo run --example synthetic_dataset -- [dir] [subjects]
//! cargo run --release --bin periocular -- evaluate --config <dir>/experiment.toml --out <dir>/out

use std::path::PathBuf;

use periocular::config::{Config, ExperimentSettings};
use periocular::descriptors::Descriptor;
use periocular::synthetic::{generate, write_dataset, SyntheticParams};

fn main() -> periocular::Result<()> {
    let mut args = std::env::args().skip(1);
    let dir = PathBuf::from(args.next().unwrap_or_else(|| "synthetic".into()));
    let subjects = args.next().map_or(10, |s| s.parse().expect("subject count"));

    let corpus = generate(&SyntheticParams {
        subjects,
        neutral_only_subjects: 2,
        ..SyntheticParams::default()
    });
    write_dataset(&corpus, &dir.join("data"))?;

    let config = Config {
        dataset_root: PathBuf::from("data"),
        combinations: vec![
            vec![Descriptor::Lbp],
            vec![Descriptor::Gabor],
            vec![Descriptor::Lbp, Descriptor::Hog, Descriptor::Glcm],
        ],
        settings: ExperimentSettings::default(),
    };
    let path = dir.join("experiment.toml");
    std::fs::write(&path, config.to_toml()).map_err(|e| periocular::Error::io(&path, e))?;
    println!("{} sequences under {}", corpus.len(), dir.join("data").display());
    println!("config: {}", path.display());
    Ok(())
}

//! TOML experiment configuration.
//!
//! ```toml
//! format_version = 1
//! dataset_root = "data/ckplus"      # relative to the config file
//! seed = 7
//! combinations = [["GABOR"], ["LBP", "HOG", "GLCM"]]
//! mirror_training = true
//!
//! [roi]
//! variant = "large"                 # or "small"
//! block_size = 16
//!
//! [clahe]
//! clip_limit = 2.0
//! tile = 32
//!
//! [descriptors]
//! glcm_levels = 8
//! gabor = { num_freq = 5, num_orient = 6, f_max = 0.25, bandwidth_octaves = 1.0 }
//! gist_bank = { num_freq = 4, num_orient = 8, f_max = 0.25, bandwidth_octaves = 1.0 }
//! gist = { epsilon = 0.01, window_fraction = 0.25 }
//!
//! [svm]
//! c = 1.0
//! tol = 1e-4
//! max_updates = 1000000
//! ```
//!
//! Every key except `dataset_root` and `combinations` has the default
//! shown above.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::descriptors::{Descriptor, DescriptorParams};
use crate::error::{Error, Result};
use crate::imgproc::{ClaheParams, RoiSpec, RoiVariant};
use crate::svm::SvmParams;

pub const CONFIG_FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SvmConfig {
    pub c: f64,
    pub tol: f64,
    pub max_updates: u64,
}

impl Default for SvmConfig {
    fn default() -> Self {
        let p = SvmParams::default();
        SvmConfig {
            c: p.c,
            tol: p.tol,
            max_updates: p.max_updates,
        }
    }
}

impl SvmConfig {
    pub fn params(&self, seed: u64) -> SvmParams {
        SvmParams {
            c: self.c,
            tol: self.tol,
            max_updates: self.max_updates,
            seed,
        }
    }
}

/// Everything that determines a run except the data and the descriptor
/// combination.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSettings {
    pub roi: RoiSpec,
    pub clahe: ClaheParams,
    pub descriptors: DescriptorParams,
    pub svm: SvmConfig,
    pub mirror_training: bool,
    pub seed: u64,
}

impl Default for ExperimentSettings {
    fn default() -> Self {
        ExperimentSettings {
            roi: RoiSpec {
                variant: RoiVariant::Large,
                block_size: 16,
            },
            clahe: ClaheParams::default(),
            descriptors: DescriptorParams::default(),
            svm: SvmConfig::default(),
            mirror_training: true,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    pub dataset_root: PathBuf,
    pub combinations: Vec<Vec<Descriptor>>,
    pub settings: ExperimentSettings,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    format_version: u32,
    dataset_root: PathBuf,
    #[serde(default)]
    seed: u64,
    combinations: Vec<Vec<String>>,
    #[serde(default = "yes")]
    mirror_training: bool,
    #[serde(default)]
    roi: RawRoi,
    #[serde(default)]
    clahe: RawClahe,
    #[serde(default)]
    descriptors: RawDescriptors,
    #[serde(default)]
    svm: SvmConfig,
}

fn yes() -> bool {
    true
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields, default)]
struct RawRoi {
    variant: String,
    block_size: usize,
}

impl Default for RawRoi {
    fn default() -> Self {
        RawRoi {
            variant: "large".into(),
            block_size: 16,
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields, default)]
struct RawClahe {
    clip_limit: f64,
    tile: usize,
}

impl Default for RawClahe {
    fn default() -> Self {
        let d = ClaheParams::default();
        RawClahe {
            clip_limit: d.clip_limit,
            tile: d.tile,
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields, default)]
struct RawDescriptors {
    glcm_levels: usize,
    gabor: crate::descriptors::GaborBankParams,
    gist_bank: crate::descriptors::GaborBankParams,
    gist: crate::descriptors::GistParams,
}

impl Default for RawDescriptors {
    fn default() -> Self {
        let d = DescriptorParams::default();
        RawDescriptors {
            glcm_levels: d.glcm_levels,
            gabor: d.gabor,
            gist_bank: d.gist_bank,
            gist: d.gist,
        }
    }
}

impl Config {
    /// Parses and validates. Relative dataset paths are resolved against
    /// `base_dir` when given.
    pub fn parse(text: &str, base_dir: Option<&Path>) -> Result<Config> {
        let raw: RawConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        if raw.format_version != CONFIG_FORMAT_VERSION {
            return Err(Error::Config(format!(
                "unsupported format_version {} (expected {CONFIG_FORMAT_VERSION})",
                raw.format_version
            )));
        }
        let combinations = parse_combinations(&raw.combinations)?;
        let roi = RoiSpec::new(raw.roi.variant.parse()?, raw.roi.block_size)
            .map_err(|e| Error::Config(e.to_string()))?;
        let settings = ExperimentSettings {
            roi,
            clahe: ClaheParams {
                clip_limit: raw.clahe.clip_limit,
                tile: raw.clahe.tile,
            },
            descriptors: DescriptorParams {
                glcm_levels: raw.descriptors.glcm_levels,
                gabor: raw.descriptors.gabor,
                gist_bank: raw.descriptors.gist_bank,
                gist: raw.descriptors.gist,
            },
            svm: raw.svm,
            mirror_training: raw.mirror_training,
            seed: raw.seed,
        };
        validate_settings(&settings)?;
        let dataset_root = match base_dir {
            Some(base) if raw.dataset_root.is_relative() => base.join(&raw.dataset_root),
            _ => raw.dataset_root,
        };
        Ok(Config {
            dataset_root,
            combinations,
            settings,
        })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Config> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Config::parse(&text, path.parent())
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }

    /// Renders back to TOML; `parse` of the output yields the same config.
    pub fn to_toml(&self) -> String {
        let s = &self.settings;
        let d = &s.descriptors;
        let bank = |b: &crate::descriptors::GaborBankParams| {
            format!(
                "{{ num_freq = {}, num_orient = {}, f_max = {:?}, bandwidth_octaves = {:?} }}",
                b.num_freq, b.num_orient, b.f_max, b.bandwidth_octaves
            )
        };
        let combos: Vec<String> = self
            .combinations
            .iter()
            .map(|c| {
                let names: Vec<String> = c.iter().map(|d| format!("\"{d}\"")).collect();
                format!("[{}]", names.join(", "))
            })
            .collect();
        format!(
            "format_version = {CONFIG_FORMAT_VERSION}\n\
             dataset_root = {root}\n\
             seed = {seed}\n\
             combinations = [{combos}]\n\
             mirror_training = {mirror}\n\n\
             [roi]\nvariant = \"{variant}\"\nblock_size = {bs}\n\n\
             [clahe]\nclip_limit = {clip:?}\ntile = {tile}\n\n\
             [descriptors]\nglcm_levels = {levels}\ngabor = {gabor}\ngist_bank = {gist_bank}\n\
             gist = {{ epsilon = {eps:?}, window_fraction = {wf:?} }}\n\n\
             [svm]\nc = {c:?}\ntol = {tol:?}\nmax_updates = {mu}\n",
            root = toml::Value::String(self.dataset_root.display().to_string()),
            seed = s.seed,
            combos = combos.join(", "),
            mirror = s.mirror_training,
            variant = s.roi.variant,
            bs = s.roi.block_size,
            clip = s.clahe.clip_limit,
            tile = s.clahe.tile,
            levels = d.glcm_levels,
            gabor = bank(&d.gabor),
            gist_bank = bank(&d.gist_bank),
            eps = d.gist.epsilon,
            wf = d.gist.window_fraction,
            c = s.svm.c,
            tol = s.svm.tol,
            mu = s.svm.max_updates,
        )
    }
}

fn parse_combinations(raw: &[Vec<String>]) -> Result<Vec<Vec<Descriptor>>> {
    if raw.is_empty() {
        return Err(Error::Config("`combinations` must list at least one entry".into()));
    }
    raw.iter()
        .map(|combo| {
            if combo.is_empty() {
                return Err(Error::Config("empty descriptor combination".into()));
            }
            let parsed = combo
                .iter()
                .map(|name| name.parse::<Descriptor>())
                .collect::<Result<Vec<_>>>()?;
            if parsed.contains(&Descriptor::Fused) {
                return Err(Error::Config(
                    "FUSED is not a descriptor; list the components to fuse instead".into(),
                ));
            }
            Ok(parsed)
        })
        .collect()
}

/// Checks the numeric settings so bad values fail before any compute.
pub fn validate_settings(s: &ExperimentSettings) -> Result<()> {
    let cfg = |m: String| Err(Error::Config(m));
    s.roi.validate().map_err(|e| Error::Config(e.to_string()))?;
    if !(s.clahe.clip_limit >= 1.0) || s.clahe.tile == 0 {
        return cfg(format!(
            "clahe needs clip_limit >= 1 and tile > 0, got {} and {}",
            s.clahe.clip_limit, s.clahe.tile
        ));
    }
    if !(s.svm.c > 0.0) || !(s.svm.tol > 0.0) || s.svm.max_updates == 0 {
        return cfg("svm needs c > 0, tol > 0 and max_updates > 0".into());
    }
    if !(s.descriptors.gist.epsilon > 0.0) || !(s.descriptors.gist.window_fraction > 0.0) {
        return cfg("gist epsilon and window_fraction must be positive".into());
    }
    crate::descriptors::FeatureExtractor::new(s.descriptors).map_err(|e| Error::Config(e.to_string()))?;
    Ok(())
}

/// Display name of a combination, e.g. `LBP+HOG+GLCM`.
pub fn combination_name(combo: &[Descriptor]) -> String {
    combo.iter().map(|d| d.name()).collect::<Vec<_>>().join("+")
}

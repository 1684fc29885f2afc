//! Synthetic phantom datasets: NPY volumes plus a ready-to-extract
//! manifest.
//!
//! ```toml
//! seed = 7
//! count = 60                 # volumes per class
//!
//! [[classes]]
//! label = "NC"
//! shape = "solid_ball"
//! center = [7.5, 7.5, 7.5]
//! radius = 4.0
//! dims = [16, 16, 16]
//! foreground_bin = 20
//! background_bin = 80
//! jitter = 1
//! ```

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use voxph_core::phantom::{generate, PhantomSpec};

use crate::config::{ExtractOverrides, RangeArg};
use crate::io::encode_npy_u16;
use crate::manifest::{Manifest, ManifestEntry};
use crate::Error;
use voxph_core::volume::RangeMode;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthClass {
    pub label: String,
    /// Its `seed` is replaced per volume.
    #[serde(flatten)]
    pub spec: PhantomSpec,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SynthConfig {
    #[serde(default)]
    pub seed: u64,
    pub count: usize,
    pub classes: Vec<SynthClass>,
}

impl SynthConfig {
    /// Seed of volume `index` in class `class`.
    pub fn volume_seed(&self, class: usize, index: usize) -> u64 {
        self.seed.wrapping_add((class * self.count + index) as u64)
    }

    /// The phantom spec of every volume, in output order.
    pub fn volumes(&self) -> Vec<(String, PhantomSpec)> {
        let mut out = Vec::with_capacity(self.count * self.classes.len());
        for (c, class) in self.classes.iter().enumerate() {
            for i in 0..self.count {
                let mut spec = class.spec.clone();
                spec.seed = self.volume_seed(c, i);
                out.push((format!("{}_{i:03}", class.label), spec));
            }
        }
        out
    }
}

/// Writes `<label>_<index>.npy` files and `manifest.toml` into `out_dir`,
/// returning the manifest path. The manifest fixes the range to
/// `1..=levels`, so extraction reads the bins back unchanged.
pub fn write_dataset(cfg: &SynthConfig, out_dir: &Path) -> Result<PathBuf, Error> {
    let levels = match cfg.classes.first() {
        Some(c) => c.spec.levels,
        None => return Err(Error::Invalid("synth config has no classes".into())),
    };
    if cfg.classes.iter().any(|c| c.spec.levels != levels) {
        return Err(Error::Invalid("all synth classes must share one level count".into()));
    }
    let mut labels: Vec<String> = Vec::new();
    for c in &cfg.classes {
        if labels.contains(&c.label) {
            return Err(Error::Invalid(format!("duplicate synth class label '{}'", c.label)));
        }
        labels.push(c.label.clone());
    }
    for c in &cfg.classes {
        c.spec.validate()?;
    }
    fs::create_dir_all(out_dir).map_err(Error::file(out_dir))?;

    let mut volumes = Vec::new();
    for (c, (name, spec)) in cfg.volumes().into_iter().enumerate() {
        let vol = generate(&spec)?;
        let file = format!("{name}.npy");
        let path = out_dir.join(&file);
        fs::write(&path, encode_npy_u16(vol.dims(), vol.bins())).map_err(Error::file(&path))?;
        volumes.push(ManifestEntry {
            path: file.into(),
            label: cfg.classes[c / cfg.count.max(1)].label.clone(),
            subject: None,
        });
    }
    let manifest = Manifest {
        classes: Some(labels),
        extract: ExtractOverrides {
            levels: Some(levels),
            range: Some(RangeArg(RangeMode::Fixed {
                lo: 1.0,
                hi: f64::from(levels),
            })),
            ..ExtractOverrides::default()
        },
        volumes,
    };
    let path = out_dir.join("manifest.toml");
    fs::write(&path, manifest.to_toml()).map_err(Error::file(&path))?;
    Ok(path)
}

#[cfg(test)]
mod tests {
    use super::*;

    const CONFIG: &str = r#"
seed = 3
count = 2

[[classes]]
label = "ball"
shape = "solid_ball"
center = [5.0, 5.0, 5.0]
radius = 3.0
dims = [11, 11, 11]
foreground_bin = 20
background_bin = 80
jitter = 1

[[classes]]
label = "noise"
shape = "random_noise"
dims = [4, 4, 4]
foreground_bin = 20
background_bin = 80
"#;

    #[test]
    fn parses_and_seeds_each_volume() {
        let cfg: SynthConfig = toml::from_str(CONFIG).unwrap();
        let vols = cfg.volumes();
        assert_eq!(vols.len(), 4);
        assert_eq!(vols[3].0, "noise_001");
        let seeds: Vec<u64> = vols.iter().map(|(_, s)| s.seed).collect();
        assert_eq!(seeds, [3, 4, 5, 6]);
    }
}

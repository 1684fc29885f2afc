//! Dataset manifests (TOML):
//!
//! ```toml
//! classes = ["NC", "MCI", "AD"]   # optional; labels must come from it
//!
//! [extract]                       # optional ExtractConfig overrides
//! levels = 100
//! range = "fixed:0:255"
//!
//! [[volumes]]
//! path = "scans/s01.nii.gz"       # relative to the manifest
//! label = "NC"
//! subject = "s01"                 # optional, becomes the CSV id
//! ```

use std::collections::HashSet;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::config::ExtractOverrides;
use crate::error::read_toml;
use crate::Error;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManifestEntry {
    pub path: PathBuf,
    pub label: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subject: Option<String>,
}

impl ManifestEntry {
    /// The subject if given, else the file name without volume extensions.
    pub fn id(&self) -> String {
        if let Some(s) = &self.subject {
            return s.clone();
        }
        let name = self.path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
        for ext in [".nii.gz", ".nii", ".npy", ".raw", ".bin"] {
            if let Some(stem) = name.strip_suffix(ext) {
                return stem.to_string();
            }
        }
        name
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Manifest {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub classes: Option<Vec<String>>,
    pub extract: ExtractOverrides,
    pub volumes: Vec<ManifestEntry>,
}

impl Manifest {
    /// Reads and validates a manifest; relative volume paths are resolved
    /// against its directory.
    pub fn load(path: &Path) -> Result<Self, Error> {
        let mut m: Manifest = read_toml(path)?;
        let base = path.parent().unwrap_or(Path::new(""));
        for e in &mut m.volumes {
            if e.path.is_relative() {
                e.path = base.join(&e.path);
            }
        }
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<(), Error> {
        let mut seen = HashSet::new();
        for e in &self.volumes {
            if !seen.insert(&e.path) {
                return Err(Error::Invalid(format!("duplicate manifest path {}", e.path.display())));
            }
            if let Some(classes) = &self.classes {
                if !classes.contains(&e.label) {
                    return Err(Error::Invalid(format!(
                        "label '{}' of {} is not among the declared classes {classes:?}",
                        e.label,
                        e.path.display()
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("manifest serializes")
    }
}

//! File formats, batch extraction and the `voxph` command line on top of
//! [`voxph_core`].
//!
//! ```text
//! voxph synth phantoms.toml --out data/
//! voxph extract data/manifest.toml --out features.csv --workers 8
//! voxph classify features.csv --task three-class --out report/
//! voxph diagram data/NC_000.npy --levels 100
//! ```

pub mod classify;
pub mod cli;
pub mod config;
pub mod diagram;
mod error;
pub mod extract;
pub mod features;
pub mod io;
pub mod manifest;
pub mod synth;

pub use error::Error;

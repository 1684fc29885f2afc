//! # voxph-core
//!
//! Cubical persistent homology for 3D (and 2D) grayscale volumes, with the
//! downstream pieces needed to turn diagrams into classifier inputs:
//!
//! * [`volume`] - in-memory volumes, middle-slice selection and quantization
//!   onto a grid of `N` thresholds.
//! * [`filtration`] - the filtered cubical complex of a quantized volume
//!   (voxels are vertices of a `(2nx-1) x (2ny-1) x (2nz-1)` cell grid).
//! * [`persistence`] - diagrams in dimensions 0, 1 and 2 by sparse column
//!   reduction with clearing, plus two slow reference paths (dense reduction
//!   and a union-find pass for dimension 0) and the Euler characteristic
//!   profile used to cross-check them.
//! * [`vectorize`] - Betti curves, silhouettes and fixed-length feature
//!   vectors.
//! * [`phantom`] - deterministic synthetic volumes with known topology.
//! * [`classifier`] - gradient-boosted trees, importance-based feature
//!   selection, stratified cross-validation and metrics.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, the CLI and the
//! worker pool live in the `voxph` crate.
//!
//! ```
//! use voxph_core::filtration::{build_filtration, Direction};
//! use voxph_core::persistence::{compute_diagrams, Death};
//! use voxph_core::volume::QuantizedVolume;
//!
//! // Two low voxels separated by a high one.
//! let vol = QuantizedVolume::new([3, 1, 1], vec![2, 9, 3], 10).unwrap();
//! let filt = build_filtration(&vol, Direction::Sublevel);
//! let diagrams = compute_diagrams(&filt);
//! let pairs: Vec<_> = diagrams[0].pairs().iter().map(|p| (p.birth, p.death)).collect();
//! assert_eq!(pairs, vec![(2, Death::Infinite), (3, Death::Finite(9))]);
//! ```

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod classifier;
pub mod filtration;
pub mod persistence;
pub mod phantom;
pub mod vectorize;
pub mod volume;

/// A threshold index on the quantization grid, `1..=N`.
pub type Bin = u16;

/// Voxel extents `(nx, ny, nz)`.
pub type Dims = [usize; 3];

/// Default number of thresholds.
pub const DEFAULT_LEVELS: Bin = 100;

//! Synthetic volumes with known topology.
//!
//! A voxel belongs to the shape when its center (integer grid coordinates)
//! satisfies the shape's implicit inequality. Shape voxels get the foreground
//! bin, the rest the background bin, and optional jitter adds a uniform
//! integer offset in `[-jitter, jitter]` to every voxel before clamping to
//! `1..=levels`.

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::volume::QuantizedVolume;
use crate::{Bin, Dims, DEFAULT_LEVELS};

/// Smallest radius that survives voxelization with its intended topology.
pub const MIN_RADIUS: f64 = 2.0;
/// Smallest gap between the two blobs of [`Shape::TwoBlobs`].
pub const MIN_BLOB_GAP: f64 = 3.0;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PhantomError {
    #[error("foreground bin {foreground} must be below background bin {background}, both within 1..={levels}")]
    Bins { foreground: Bin, background: Bin, levels: Bin },
    #[error("radius {0} is below the minimum of 2 voxels")]
    RadiusTooSmall(f64),
    #[error("shape does not fit inside {dims:?} with a one-voxel margin")]
    OutOfBounds { dims: Dims },
    #[error("{0}")]
    Geometry(&'static str),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "snake_case")]
pub enum Shape {
    SolidBall {
        center: [f64; 3],
        radius: f64,
    },
    HollowShell {
        center: [f64; 3],
        inner_radius: f64,
        outer_radius: f64,
    },
    /// Ring around the z axis through `center`.
    SolidTorus {
        center: [f64; 3],
        major_radius: f64,
        minor_radius: f64,
    },
    TwoBlobs {
        centers: [[f64; 3]; 2],
        radius: f64,
    },
    /// Every voxel uniform in `[foreground_bin, background_bin]`.
    RandomNoise,
}

impl Shape {
    /// `(beta_0, beta_1, beta_2)` on `[foreground_bin, background_bin)` for an
    /// unjittered phantom.
    pub fn expected_betti(&self) -> Option<[usize; 3]> {
        match self {
            Shape::SolidBall { .. } => Some([1, 0, 0]),
            Shape::HollowShell { .. } => Some([1, 0, 1]),
            Shape::SolidTorus { .. } => Some([1, 1, 0]),
            Shape::TwoBlobs { .. } => Some([2, 0, 0]),
            Shape::RandomNoise => None,
        }
    }

    fn contains(&self, p: [f64; 3]) -> bool {
        match *self {
            Shape::SolidBall { center, radius } => dist(p, center) <= radius,
            Shape::HollowShell {
                center,
                inner_radius,
                outer_radius,
            } => {
                let r = dist(p, center);
                inner_radius <= r && r <= outer_radius
            }
            Shape::SolidTorus {
                center,
                major_radius,
                minor_radius,
            } => {
                let [x, y, z] = [p[0] - center[0], p[1] - center[1], p[2] - center[2]];
                let ring = libm::sqrt(x * x + y * y) - major_radius;
                ring * ring + z * z <= minor_radius * minor_radius
            }
            Shape::TwoBlobs { centers, radius } => centers.iter().any(|&c| dist(p, c) <= radius),
            Shape::RandomNoise => false,
        }
    }

    fn validate(&self, dims: Dims) -> Result<(), PhantomError> {
        let fits = |center: [f64; 3], half: [f64; 3]| {
            (0..3).all(|a| center[a] - half[a] >= 1.0 && center[a] + half[a] <= dims[a] as f64 - 2.0)
        };
        let radius_ok = |r: f64| {
            if r.is_finite() && r >= MIN_RADIUS {
                Ok(())
            } else {
                Err(PhantomError::RadiusTooSmall(r))
            }
        };
        let ok = match *self {
            Shape::SolidBall { center, radius } => {
                radius_ok(radius)?;
                fits(center, [radius; 3])
            }
            Shape::HollowShell {
                center,
                inner_radius,
                outer_radius,
            } => {
                radius_ok(inner_radius)?;
                if outer_radius < inner_radius + 1.0 {
                    return Err(PhantomError::Geometry("shell must be at least one voxel thick"));
                }
                fits(center, [outer_radius; 3])
            }
            Shape::SolidTorus {
                center,
                major_radius,
                minor_radius,
            } => {
                radius_ok(minor_radius)?;
                if major_radius < minor_radius + MIN_RADIUS {
                    return Err(PhantomError::Geometry("torus hole must be at least 2 voxels wide"));
                }
                let outer = major_radius + minor_radius;
                fits(center, [outer, outer, minor_radius])
            }
            Shape::TwoBlobs { centers, radius } => {
                radius_ok(radius)?;
                if dist(centers[0], centers[1]) - 2.0 * radius < MIN_BLOB_GAP {
                    return Err(PhantomError::Geometry("blobs must be at least 3 voxels apart"));
                }
                centers.iter().all(|&c| fits(c, [radius; 3]))
            }
            Shape::RandomNoise => true,
        };
        if ok {
            Ok(())
        } else {
            Err(PhantomError::OutOfBounds { dims })
        }
    }
}

fn dist(a: [f64; 3], b: [f64; 3]) -> f64 {
    let d = [a[0] - b[0], a[1] - b[1], a[2] - b[2]];
    libm::sqrt(d[0] * d[0] + d[1] * d[1] + d[2] * d[2])
}

fn default_levels() -> Bin {
    DEFAULT_LEVELS
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhantomSpec {
    #[serde(flatten)]
    pub shape: Shape,
    pub dims: Dims,
    #[serde(default = "default_levels")]
    pub levels: Bin,
    pub foreground_bin: Bin,
    pub background_bin: Bin,
    #[serde(default)]
    pub jitter: u16,
    #[serde(default)]
    pub seed: u64,
}

impl PhantomSpec {
    pub fn new(shape: Shape, dims: Dims, foreground_bin: Bin, background_bin: Bin) -> Self {
        Self {
            shape,
            dims,
            levels: DEFAULT_LEVELS,
            foreground_bin,
            background_bin,
            jitter: 0,
            seed: 0,
        }
    }

    pub fn with_jitter(mut self, jitter: u16, seed: u64) -> Self {
        self.jitter = jitter;
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<(), PhantomError> {
        let (fg, bg, levels) = (self.foreground_bin, self.background_bin, self.levels);
        if levels < 2 || fg < 1 || fg >= bg || bg > levels {
            return Err(PhantomError::Bins {
                foreground: fg,
                background: bg,
                levels,
            });
        }
        if self.dims.iter().any(|&d| d == 0) {
            return Err(PhantomError::OutOfBounds { dims: self.dims });
        }
        self.shape.validate(self.dims)
    }
}

pub fn generate(spec: &PhantomSpec) -> Result<QuantizedVolume, PhantomError> {
    spec.validate()?;
    let [nx, ny, nz] = spec.dims;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let (fg, bg) = (spec.foreground_bin, spec.background_bin);
    let jitter = i32::from(spec.jitter);
    let top = i32::from(spec.levels);

    let mut bins = Vec::with_capacity(nx * ny * nz);
    for z in 0..nz {
        for y in 0..ny {
            for x in 0..nx {
                let base = match spec.shape {
                    Shape::RandomNoise => rng.gen_range(fg..=bg),
                    ref shape if shape.contains([x as f64, y as f64, z as f64]) => fg,
                    _ => bg,
                };
                let bin = if jitter > 0 {
                    (i32::from(base) + rng.gen_range(-jitter..=jitter)).clamp(1, top) as Bin
                } else {
                    base
                };
                bins.push(bin);
            }
        }
    }
    Ok(QuantizedVolume::new(spec.dims, bins, spec.levels).expect("bins clamped to range"))
}

//! Fixed-length vectors from persistence diagrams.
//!
//! Betti curves count the pairs alive at each threshold `n = 1..=N` under the
//! convention `b <= n < d`. Silhouettes average tent functions weighted by
//! `(d - b)^p`, sampled on the same grid.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::persistence::{Death, Diagrams, PersistenceDiagram};
use crate::Bin;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum VectorizeError {
    #[error("pair ({birth}, {death}) lies outside 1..={levels}")]
    OutOfRange { birth: Bin, death: Death, levels: Bin },
    #[error("at least one homology dimension must be selected")]
    EmptySubset,
    #[error("homology dimension {0} is not one of 0, 1, 2")]
    BadDimension(usize),
    #[error("silhouette power must be finite and >= 0, got {0}")]
    BadPower(f64),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BettiVector {
    pub dim: usize,
    pub values: Vec<u32>,
}

impl BettiVector {
    /// Sum of the curve, equal to the total (clipped) persistence.
    pub fn total(&self) -> u64 {
        self.values.iter().map(|&v| u64::from(v)).sum()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SilhouetteVector {
    pub dim: usize,
    pub power: f64,
    pub values: Vec<f64>,
}

/// What to do with essential pairs when building silhouettes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Essentials {
    /// Treat the death as `N + 1`.
    #[default]
    CapAtEnd,
    Drop,
}

fn check_range(pd: &PersistenceDiagram, levels: Bin) -> Result<(), VectorizeError> {
    for p in pd.pairs() {
        let death_ok = match p.death {
            Death::Finite(d) => d <= levels,
            Death::Infinite => true,
        };
        if p.birth < 1 || p.birth > levels || !death_ok {
            return Err(VectorizeError::OutOfRange {
                birth: p.birth,
                death: p.death,
                levels,
            });
        }
    }
    Ok(())
}

pub fn betti_curve(pd: &PersistenceDiagram, levels: Bin) -> Result<BettiVector, VectorizeError> {
    check_range(pd, levels)?;
    let n = usize::from(levels);
    // Difference array over 1..=N+1.
    let mut delta = alloc::vec![0i64; n + 2];
    for p in pd.pairs() {
        let end = match p.death {
            Death::Finite(d) => usize::from(d),
            Death::Infinite => n + 1,
        };
        delta[usize::from(p.birth)] += 1;
        delta[end] -= 1;
    }
    let mut running = 0i64;
    let values = (1..=n)
        .map(|i| {
            running += delta[i];
            running as u32
        })
        .collect();
    Ok(BettiVector { dim: pd.dim(), values })
}

pub fn silhouette(
    pd: &PersistenceDiagram,
    levels: Bin,
    power: f64,
    essentials: Essentials,
) -> Result<SilhouetteVector, VectorizeError> {
    check_range(pd, levels)?;
    if !power.is_finite() || power < 0.0 {
        return Err(VectorizeError::BadPower(power));
    }
    let cap = f64::from(levels) + 1.0;
    let intervals: Vec<(f64, f64)> = pd
        .pairs()
        .iter()
        .filter_map(|p| match (p.death, essentials) {
            (Death::Finite(d), _) => Some((f64::from(p.birth), f64::from(d))),
            (Death::Infinite, Essentials::CapAtEnd) => Some((f64::from(p.birth), cap)),
            (Death::Infinite, Essentials::Drop) => None,
        })
        .collect();
    let mut weights: Vec<f64> = intervals.iter().map(|&(b, d)| libm::pow(d - b, power)).collect();
    let total: f64 = weights.iter().sum();
    // Normalizing first makes a lone pair's weight exactly 1.
    weights.iter_mut().for_each(|w| *w /= total);

    let values = (1..=levels)
        .map(|n| {
            if total == 0.0 {
                return 0.0;
            }
            let t = f64::from(n);
            intervals
                .iter()
                .zip(&weights)
                .map(|(&(b, d), &w)| w * (t - b).min(d - t).max(0.0))
                .sum()
        })
        .collect();
    Ok(SilhouetteVector {
        dim: pd.dim(),
        power,
        values,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FeatureKind {
    #[default]
    Betti,
    Silhouette { power: f64 },
}

impl FeatureKind {
    pub fn prefix(self) -> char {
        match self {
            FeatureKind::Betti => 'b',
            FeatureKind::Silhouette { .. } => 's',
        }
    }
}

/// Validated, ascending set of homology dimensions.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct DimSet(Vec<usize>);

impl DimSet {
    pub fn new(dims: &[usize]) -> Result<Self, VectorizeError> {
        if dims.is_empty() {
            return Err(VectorizeError::EmptySubset);
        }
        if let Some(&bad) = dims.iter().find(|&&d| d > 2) {
            return Err(VectorizeError::BadDimension(bad));
        }
        let mut v = dims.to_vec();
        v.sort_unstable();
        v.dedup();
        Ok(Self(v))
    }

    pub fn all() -> Self {
        Self(alloc::vec![0, 1, 2])
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }
}

impl Default for DimSet {
    fn default() -> Self {
        Self::all()
    }
}

impl TryFrom<Vec<usize>> for DimSet {
    type Error = VectorizeError;

    fn try_from(v: Vec<usize>) -> Result<Self, Self::Error> {
        Self::new(&v)
    }
}

impl From<DimSet> for Vec<usize> {
    fn from(d: DimSet) -> Self {
        d.0
    }
}

/// Concatenated per-dimension vectors with their column names.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureVector {
    pub names: Vec<String>,
    pub values: Vec<f64>,
}

impl FeatureVector {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Column names in output order, e.g. `b0_001 .. b2_100`.
pub fn feature_names(kind: FeatureKind, levels: Bin, dims: &DimSet) -> Vec<String> {
    let width = format!("{levels}").len().max(3);
    let prefix = kind.prefix();
    dims.as_slice()
        .iter()
        .flat_map(|&k| (1..=levels).map(move |n| format!("{prefix}{k}_{n:0width$}")))
        .collect()
}

pub fn assemble_features(
    diagrams: &Diagrams,
    levels: Bin,
    kind: FeatureKind,
    dims: &DimSet,
) -> Result<FeatureVector, VectorizeError> {
    let mut values = Vec::with_capacity(usize::from(levels) * dims.as_slice().len());
    for &k in dims.as_slice() {
        match kind {
            FeatureKind::Betti => {
                let curve = betti_curve(&diagrams[k], levels)?;
                values.extend(curve.values.iter().map(|&v| f64::from(v)));
            }
            FeatureKind::Silhouette { power } => {
                let s = silhouette(&diagrams[k], levels, power, Essentials::CapAtEnd)?;
                values.extend_from_slice(&s.values);
            }
        }
    }
    Ok(FeatureVector {
        names: feature_names(kind, levels, dims),
        values,
    })
}

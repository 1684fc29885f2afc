//! Persistence diagrams of cubical filtrations over the two-element field.
//!
//! [`compute_diagrams`] is the production path: sparse columns reduced one
//! dimension at a time from the top down, with clearing. [`reduce_naive`]
//! and [`dim0_unionfind`] are slower, independent routes kept for
//! verification, and [`euler_profile`] gives the alternating cell-count sum
//! every diagram triple has to agree with.
//!
//! Coordinates are filtration bins. Pairs with equal birth and death are
//! never reported.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::Index;

use thiserror::Error;

use crate::filtration::CubicalFiltration;
use crate::Bin;

mod naive;
mod union_find;

pub use naive::{reduce_naive, DEFAULT_ORACLE_LIMIT};
pub use union_find::dim0_unionfind;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PersistenceError {
    #[error("filtration has {cells} cells, above the reference-reduction limit of {limit}")]
    OracleLimit { cells: usize, limit: usize },
}

/// Death coordinate of a pair; `Infinite` sorts after every finite bin.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Death {
    Finite(Bin),
    Infinite,
}

impl Death {
    /// The bin, or `None` for an essential class.
    pub fn finite(self) -> Option<Bin> {
        match self {
            Death::Finite(b) => Some(b),
            Death::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Death::Infinite)
    }
}

impl From<Option<Bin>> for Death {
    fn from(value: Option<Bin>) -> Self {
        value.map_or(Death::Infinite, Death::Finite)
    }
}

impl fmt::Display for Death {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Death::Finite(b) => write!(f, "{b}"),
            Death::Infinite => f.write_str("inf"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Pair {
    pub birth: Bin,
    pub death: Death,
}

impl Pair {
    pub fn new(birth: Bin, death: Death) -> Self {
        Self { birth, death }
    }

    pub fn finite(birth: Bin, death: Bin) -> Self {
        Self::new(birth, Death::Finite(death))
    }

    pub fn essential(birth: Bin) -> Self {
        Self::new(birth, Death::Infinite)
    }

    /// `d - b` for finite pairs.
    pub fn persistence(&self) -> Option<Bin> {
        self.death.finite().map(|d| d - self.birth)
    }

    /// Whether the class is alive at threshold `n`: `b <= n < d`.
    pub fn alive_at(&self, n: Bin) -> bool {
        self.birth <= n && Death::Finite(n) < self.death
    }
}

/// Multiset of pairs in one homology dimension.
///
/// Pairs are kept sorted by `(birth, death)`, so two diagrams compare equal
/// exactly when they are equal as multisets.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct PersistenceDiagram {
    dim: usize,
    pairs: Vec<Pair>,
}

impl PersistenceDiagram {
    /// Builds a diagram, dropping pairs whose death equals their birth.
    pub fn new(dim: usize, pairs: impl IntoIterator<Item = Pair>) -> Self {
        let mut pairs: Vec<Pair> = pairs
            .into_iter()
            .filter(|p| p.death != Death::Finite(p.birth))
            .collect();
        pairs.sort();
        Self { dim, pairs }
    }

    pub fn empty(dim: usize) -> Self {
        Self { dim, pairs: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn pairs(&self) -> &[Pair] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Number of classes alive at threshold `n`.
    pub fn betti_at(&self, n: Bin) -> usize {
        self.pairs.iter().filter(|p| p.alive_at(n)).count()
    }

    pub fn essential_count(&self) -> usize {
        self.pairs.iter().filter(|p| p.death.is_infinite()).count()
    }

    /// Applies `f` to every coordinate. `f` must be strictly increasing for
    /// the result to be the diagram of the relabelled filtration.
    pub fn map_bins(&self, f: impl Fn(Bin) -> Bin) -> Self {
        Self::new(
            self.dim,
            self.pairs.iter().map(|p| Pair {
                birth: f(p.birth),
                death: match p.death {
                    Death::Finite(d) => Death::Finite(f(d)),
                    Death::Infinite => Death::Infinite,
                },
            }),
        )
    }
}

/// Diagrams for dimensions 0, 1 and 2, indexable by dimension.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Diagrams {
    levels: Bin,
    by_dim: [PersistenceDiagram; 3],
}

impl Diagrams {
    pub fn new(levels: Bin, by_dim: [PersistenceDiagram; 3]) -> Self {
        Self { levels, by_dim }
    }

    pub fn levels(&self) -> Bin {
        self.levels
    }

    pub fn iter(&self) -> impl Iterator<Item = &PersistenceDiagram> {
        self.by_dim.iter()
    }

    /// `(beta_0, beta_1, beta_2)` at threshold `n`.
    pub fn betti_at(&self, n: Bin) -> [usize; 3] {
        [
            self.by_dim[0].betti_at(n),
            self.by_dim[1].betti_at(n),
            self.by_dim[2].betti_at(n),
        ]
    }

    pub fn map_bins(&self, levels: Bin, f: impl Fn(Bin) -> Bin + Copy) -> Self {
        Self {
            levels,
            by_dim: [
                self.by_dim[0].map_bins(f),
                self.by_dim[1].map_bins(f),
                self.by_dim[2].map_bins(f),
            ],
        }
    }
}

impl Index<usize> for Diagrams {
    type Output = PersistenceDiagram;

    fn index(&self, dim: usize) -> &PersistenceDiagram {
        &self.by_dim[dim]
    }
}

pub(crate) fn collect_diagrams(levels: Bin, raw: [Vec<Pair>; 3]) -> Diagrams {
    let [d0, d1, d2] = raw;
    Diagrams::new(
        levels,
        [
            PersistenceDiagram::new(0, d0),
            PersistenceDiagram::new(1, d1),
            PersistenceDiagram::new(2, d2),
        ],
    )
}

const NONE: u32 = u32::MAX;

/// Diagrams by top-down sparse reduction with clearing.
///
/// Columns of dimension 3 are reduced first; every row that becomes a pivot
/// is a positive cell whose own column would reduce to zero, so it is skipped
/// when its dimension is processed. Columns are sorted row lists over
/// filtration positions and pivots are found through a row-indexed table.
pub fn compute_diagrams(f: &CubicalFiltration) -> Diagrams {
    let order = f.order();
    let n = order.len();
    let mut position = vec![0u32; n];
    for (pos, &id) in order.iter().enumerate() {
        position[id as usize] = pos as u32;
    }
    let dim_at: Vec<u8> = order.iter().map(|&id| f.dim_of(id as usize)).collect();

    // pivot_owner[row] indexes `reduced` for the column whose pivot is `row`.
    let mut pivot_owner = vec![NONE; n];
    let mut reduced: Vec<Vec<u32>> = Vec::new();
    let mut negative = vec![false; n];
    let mut raw: [Vec<Pair>; 3] = Default::default();

    let mut column: Vec<u32> = Vec::with_capacity(6);
    let mut scratch: Vec<u32> = Vec::new();

    for dim in (1..=3u8).rev() {
        for pos in 0..n {
            if dim_at[pos] != dim || pivot_owner[pos] != NONE {
                continue;
            }
            let id = order[pos] as usize;
            column.clear();
            column.extend(f.boundary(id).map(|face| position[face]));
            column.sort_unstable();

            while let Some(&pivot) = column.last() {
                let owner = pivot_owner[pivot as usize];
                if owner == NONE {
                    break;
                }
                add_into(&mut column, &reduced[owner as usize], &mut scratch);
            }

            if let Some(&pivot) = column.last() {
                pivot_owner[pivot as usize] = reduced.len() as u32;
                reduced.push(column.clone());
                negative[pos] = true;
                let birth = f.bin(order[pivot as usize] as usize);
                let death = f.bin(id);
                raw[usize::from(dim - 1)].push(Pair::finite(birth, death));
            }
        }
    }

    for pos in 0..n {
        let dim = usize::from(dim_at[pos]);
        if dim < 3 && !negative[pos] && pivot_owner[pos] == NONE {
            raw[dim].push(Pair::essential(f.bin(order[pos] as usize)));
        }
    }

    collect_diagrams(f.levels(), raw)
}

/// `column ^= other` for sorted row lists.
fn add_into(column: &mut Vec<u32>, other: &[u32], scratch: &mut Vec<u32>) {
    scratch.clear();
    let (mut i, mut j) = (0, 0);
    while i < column.len() && j < other.len() {
        match column[i].cmp(&other[j]) {
            core::cmp::Ordering::Less => {
                scratch.push(column[i]);
                i += 1;
            }
            core::cmp::Ordering::Greater => {
                scratch.push(other[j]);
                j += 1;
            }
            core::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    scratch.extend_from_slice(&column[i..]);
    scratch.extend_from_slice(&other[j..]);
    core::mem::swap(column, scratch);
}

/// Euler characteristic of every sublevel complex: entry `n - 1` is
/// `c0 - c1 + c2 - c3` over the cells with bin `<= n`.
pub fn euler_profile(f: &CubicalFiltration) -> Vec<i64> {
    f.cumulative_counts()
        .into_iter()
        .map(|c| c[0] as i64 - c[1] as i64 + c[2] as i64 - c[3] as i64)
        .collect()
}

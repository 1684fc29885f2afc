//! Filtered cubical complexes built from quantized volumes.
//!
//! A volume with extents `(nx, ny, nz)` induces a cell grid of extents
//! `(2nx-1, 2ny-1, 2nz-1)`. A cell at grid coordinate `(x, y, z)` has
//! dimension equal to the number of odd coordinates; cells with all-even
//! coordinates are the voxels themselves (vertices of the complex). A cell
//! enters the filtration at the largest bin among the voxels it spans, so
//! every face enters no later than the cells it bounds. Axes of extent 1
//! collapse to a single grid layer, so 2D inputs produce no 3-cells.
//!
//! Within a bin, cells are ordered by dimension and then by linear id, which
//! places every boundary before its coface.

use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::volume::QuantizedVolume;
use crate::{Bin, Dims};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum Direction {
    /// Voxels activate in increasing bin order.
    #[default]
    #[serde(rename = "sub")]
    Sublevel,
    /// Voxels activate in decreasing bin order. Filtration step `n` contains
    /// the voxels whose bin is at least `N + 1 - n`.
    #[serde(rename = "super")]
    Superlevel,
}

impl Direction {
    pub fn as_str(self) -> &'static str {
        match self {
            Direction::Sublevel => "sub",
            Direction::Superlevel => "super",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Cell {
    pub id: usize,
    pub dim: u8,
    pub bin: Bin,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CubicalFiltration {
    dims: Dims,
    grid: Dims,
    levels: Bin,
    direction: Direction,
    bins: Vec<Bin>,
    order: Vec<u32>,
}

pub fn build_filtration(qvol: &QuantizedVolume, direction: Direction) -> CubicalFiltration {
    let top = qvol.levels() + 1;
    let bins = match direction {
        Direction::Sublevel => spread(qvol, Bin::max),
        Direction::Superlevel => {
            // A cell is present once all of its voxels are, i.e. at the
            // smallest original bin it spans, read on the reversed axis.
            let mut bins = spread(qvol, Bin::min);
            bins.iter_mut().for_each(|b| *b = top - *b);
            bins
        }
    };
    CubicalFiltration::from_cell_bins(qvol.dims(), qvol.levels(), direction, bins)
}

fn grid_of(dims: Dims) -> Dims {
    [2 * dims[0] - 1, 2 * dims[1] - 1, 2 * dims[2] - 1]
}

/// Assigns each cell the `combine`-fold of the voxels it spans, one axis at
/// a time.
fn spread(qvol: &QuantizedVolume, combine: fn(Bin, Bin) -> Bin) -> Vec<Bin> {
    let [nx, ny, nz] = qvol.dims();
    let [gx, gy, gz] = grid_of(qvol.dims());

    let mut along_x = vec![0; gx * ny * nz];
    for (row_out, row_in) in along_x.chunks_exact_mut(gx).zip(qvol.bins().chunks_exact(nx)) {
        for (c, out) in row_out.iter_mut().enumerate() {
            *out = if c % 2 == 0 {
                row_in[c / 2]
            } else {
                combine(row_in[c / 2], row_in[c / 2 + 1])
            };
        }
    }

    let mut along_y = vec![0; gx * gy * nz];
    for z in 0..nz {
        for c in 0..gy {
            let (lo, hi) = (c / 2, (c + 1) / 2);
            for x in 0..gx {
                let a = along_x[x + gx * (lo + ny * z)];
                let b = along_x[x + gx * (hi + ny * z)];
                along_y[x + gx * (c + gy * z)] = combine(a, b);
            }
        }
    }

    let plane = gx * gy;
    let mut cells = vec![0; plane * gz];
    for c in 0..gz {
        let (lo, hi) = (c / 2, (c + 1) / 2);
        for i in 0..plane {
            cells[i + plane * c] = combine(along_y[i + plane * lo], along_y[i + plane * hi]);
        }
    }
    cells
}

impl CubicalFiltration {
    fn from_cell_bins(dims: Dims, levels: Bin, direction: Direction, bins: Vec<Bin>) -> Self {
        let grid = grid_of(dims);
        assert!(bins.len() < u32::MAX as usize, "cell grid too large");
        let mut filt = Self {
            dims,
            grid,
            levels,
            direction,
            bins,
            order: Vec::new(),
        };
        filt.order = filt.sort_cells();
        filt
    }

    /// Counting sort on `(bin, dim)`; ids stay ascending within a key.
    fn sort_cells(&self) -> Vec<u32> {
        let keys = 4 * (usize::from(self.levels) + 1);
        let key = |id: usize| 4 * usize::from(self.bins[id]) + usize::from(self.dim_of(id));
        let mut starts = vec![0usize; keys + 1];
        for id in 0..self.bins.len() {
            starts[key(id) + 1] += 1;
        }
        for k in 0..keys {
            starts[k + 1] += starts[k];
        }
        let mut order = vec![0u32; self.bins.len()];
        for id in 0..self.bins.len() {
            let slot = &mut starts[key(id)];
            order[*slot] = id as u32;
            *slot += 1;
        }
        order
    }

    pub fn dims(&self) -> Dims {
        self.dims
    }

    /// Extents of the cell grid.
    pub fn grid(&self) -> Dims {
        self.grid
    }

    pub fn levels(&self) -> Bin {
        self.levels
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn len(&self) -> usize {
        self.bins.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bins.is_empty()
    }

    /// Filtration bin of every cell, indexed by cell id.
    pub fn bins(&self) -> &[Bin] {
        &self.bins
    }

    pub fn bin(&self, id: usize) -> Bin {
        self.bins[id]
    }

    /// Cell ids in filtration order.
    pub fn order(&self) -> &[u32] {
        &self.order
    }

    pub fn coords(&self, id: usize) -> [usize; 3] {
        let [gx, gy, _] = self.grid;
        [id % gx, (id / gx) % gy, id / (gx * gy)]
    }

    pub fn dim_of(&self, id: usize) -> u8 {
        self.coords(id).iter().map(|&c| (c & 1) as u8).sum()
    }

    pub fn cell(&self, id: usize) -> Cell {
        Cell {
            id,
            dim: self.dim_of(id),
            bin: self.bins[id],
        }
    }

    /// Codimension-1 faces of `id`: for each odd coordinate in axis order
    /// x, y, z, the lower neighbour then the upper one.
    pub fn boundary(&self, id: usize) -> Faces {
        let c = self.coords(id);
        let strides = [1, self.grid[0], self.grid[0] * self.grid[1]];
        let mut faces = Faces {
            ids: [0; 6],
            len: 0,
            pos: 0,
        };
        for axis in 0..3 {
            if c[axis] & 1 == 1 {
                faces.ids[faces.len] = id - strides[axis];
                faces.ids[faces.len + 1] = id + strides[axis];
                faces.len += 2;
            }
        }
        faces
    }

    /// Number of cells of each dimension with bin `<= bin`.
    pub fn cells_at_or_below(&self, bin: Bin) -> [usize; 4] {
        let mut counts = [0; 4];
        for (id, &b) in self.bins.iter().enumerate() {
            if b <= bin {
                counts[usize::from(self.dim_of(id))] += 1;
            }
        }
        counts
    }

    /// `out[n - 1]` holds the per-dimension counts for bins `<= n`, `n = 1..=N`.
    pub(crate) fn cumulative_counts(&self) -> Vec<[usize; 4]> {
        let n = usize::from(self.levels);
        let mut out = vec![[0usize; 4]; n];
        for (id, &b) in self.bins.iter().enumerate() {
            out[usize::from(b) - 1][usize::from(self.dim_of(id))] += 1;
        }
        for i in 1..n {
            for d in 0..4 {
                out[i][d] += out[i - 1][d];
            }
        }
        out
    }
}

/// Iterator over the boundary of a cell.
#[derive(Debug, Clone)]
pub struct Faces {
    ids: [usize; 6],
    len: usize,
    pos: usize,
}

impl Iterator for Faces {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.pos < self.len {
            self.pos += 1;
            Some(self.ids[self.pos - 1])
        } else {
            None
        }
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let rest = self.len - self.pos;
        (rest, Some(rest))
    }
}

impl ExactSizeIterator for Faces {}

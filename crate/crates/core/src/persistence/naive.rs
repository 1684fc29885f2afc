use alloc::vec;
use alloc::vec::Vec;

use super::{collect_diagrams, Diagrams, Pair, PersistenceError};
use crate::filtration::CubicalFiltration;

/// Default cell-count ceiling for [`reduce_naive`].
pub const DEFAULT_ORACLE_LIMIT: usize = 20_000;

/// Reference reduction: every column of every dimension in one left-to-right
/// pass, no clearing, columns held as dense bit vectors.
///
/// Memory grows quadratically with the cell count, hence `limit`.
pub fn reduce_naive(f: &CubicalFiltration, limit: usize) -> Result<Diagrams, PersistenceError> {
    let n = f.len();
    if n > limit {
        return Err(PersistenceError::OracleLimit { cells: n, limit });
    }
    let order = f.order();
    let mut position = vec![0usize; n];
    for (pos, &id) in order.iter().enumerate() {
        position[id as usize] = pos;
    }

    // Column j only has rows below j, so it needs ceil(j / 64) words.
    let mut columns: Vec<Vec<u64>> = Vec::with_capacity(n);
    let mut low = vec![None::<usize>; n];
    let mut low_owner = vec![None::<usize>; n];

    for j in 0..n {
        let mut col = vec![0u64; j.div_ceil(64)];
        for face in f.boundary(order[j] as usize) {
            let r = position[face];
            col[r / 64] ^= 1 << (r % 64);
        }
        let mut pivot = lowest_one(&col);
        while let Some(r) = pivot {
            let Some(k) = low_owner[r] else { break };
            for (w, &v) in col.iter_mut().zip(&columns[k]) {
                *w ^= v;
            }
            pivot = lowest_one(&col);
        }
        if let Some(r) = pivot {
            low_owner[r] = Some(j);
        }
        low[j] = pivot;
        columns.push(col);
    }

    let mut raw: [Vec<Pair>; 3] = Default::default();
    let mut is_pivot_row = vec![false; n];
    for j in 0..n {
        if let Some(r) = low[j] {
            is_pivot_row[r] = true;
            let birth_cell = order[r] as usize;
            let dim = usize::from(f.dim_of(birth_cell));
            raw[dim].push(Pair::finite(f.bin(birth_cell), f.bin(order[j] as usize)));
        }
    }
    for j in 0..n {
        let id = order[j] as usize;
        let dim = usize::from(f.dim_of(id));
        if low[j].is_none() && !is_pivot_row[j] && dim < 3 {
            raw[dim].push(Pair::essential(f.bin(id)));
        }
    }
    Ok(collect_diagrams(f.levels(), raw))
}

fn lowest_one(col: &[u64]) -> Option<usize> {
    col.iter()
        .enumerate()
        .rev()
        .find(|(_, &w)| w != 0)
        .map(|(i, &w)| 64 * i + 63 - w.leading_zeros() as usize)
}

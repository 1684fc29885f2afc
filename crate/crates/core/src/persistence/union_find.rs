use alloc::vec;
use alloc::vec::Vec;

use super::{Pair, PersistenceDiagram};
use crate::filtration::CubicalFiltration;
use crate::Bin;

/// Dimension-0 diagram by a Kruskal pass over vertices and edges.
///
/// When an edge joins two components, the one born later dies at the edge's
/// bin. Equal births keep the component whose oldest vertex has the smaller
/// cell id.
pub fn dim0_unionfind(f: &CubicalFiltration) -> PersistenceDiagram {
    let mut sets = DisjointSets::new(f.len());
    let mut pairs = Vec::new();
    for &id in f.order() {
        let id = id as usize;
        match f.dim_of(id) {
            0 => sets.make(id, f.bin(id)),
            1 => {
                let mut ends = f.boundary(id);
                let (a, b) = (ends.next().unwrap(), ends.next().unwrap());
                let (ra, rb) = (sets.find(a), sets.find(b));
                if ra == rb {
                    continue;
                }
                let (elder, younger) = if sets.key(ra) <= sets.key(rb) { (ra, rb) } else { (rb, ra) };
                pairs.push(Pair::finite(sets.birth[younger], f.bin(id)));
                sets.parent[younger] = elder;
            }
            _ => {}
        }
    }
    for v in 0..f.len() {
        if sets.parent[v] == v && sets.live[v] {
            pairs.push(Pair::essential(sets.birth[v]));
        }
    }
    PersistenceDiagram::new(0, pairs)
}

struct DisjointSets {
    parent: Vec<usize>,
    birth: Vec<Bin>,
    live: Vec<bool>,
}

impl DisjointSets {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
            birth: vec![0; n],
            live: vec![false; n],
        }
    }

    fn make(&mut self, v: usize, birth: Bin) {
        self.birth[v] = birth;
        self.live[v] = true;
    }

    /// Roots are the oldest vertex of their component, so `(birth, id)`
    /// orders components by age.
    fn key(&self, root: usize) -> (Bin, usize) {
        (self.birth[root], root)
    }

    fn find(&mut self, mut v: usize) -> usize {
        let mut root = v;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        while self.parent[v] != root {
            let next = self.parent[v];
            self.parent[v] = root;
            v = next;
        }
        root
    }
}

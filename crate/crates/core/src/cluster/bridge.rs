use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::linalg::{hermite_normal_form, sublattice_index, LatticeVector};
use crate::periodic::PeriodicSet;
use crate::GEOMETRY_TOLERANCE;

/// Edge from motif point `from` to the translate of motif point `to` by the
/// lattice vector `cell`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BridgeEdge {
    pub from: usize,
    pub to: usize,
    pub cell: LatticeVector,
    pub distance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BridgeResult {
    pub beta: f64,
    /// Edges that merged two components or enlarged the generated
    /// translation group, in sweep order. Together they connect the whole
    /// infinite set.
    pub witness_edges: Vec<BridgeEdge>,
}

/// Union-find over motif indices. Each node stores the lattice offset of its
/// connected copy relative to its parent, and each root the Hermite basis of
/// the translations that map its component onto itself.
struct OffsetForest {
    dim: usize,
    parent: Vec<usize>,
    offset: Vec<LatticeVector>,
    generators: Vec<Vec<LatticeVector>>,
    components: usize,
}

fn add(a: LatticeVector, b: LatticeVector) -> LatticeVector {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

fn sub(a: LatticeVector, b: LatticeVector) -> LatticeVector {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

impl OffsetForest {
    fn new(size: usize, dim: usize) -> Self {
        OffsetForest {
            dim,
            parent: (0..size).collect(),
            offset: vec![[0; 3]; size],
            generators: vec![Vec::new(); size],
            components: size,
        }
    }

    /// Root of `i` and the offset of the copy of `i` connected to the root's
    /// copy in the zero cell.
    fn find(&mut self, i: usize) -> (usize, LatticeVector) {
        let p = self.parent[i];
        if p == i {
            return (i, [0; 3]);
        }
        let (root, to_root) = self.find(p);
        self.offset[i] = add(self.offset[i], to_root);
        self.parent[i] = root;
        (root, self.offset[i])
    }

    /// Processes an edge and reports whether it changed the state.
    fn insert(&mut self, edge: &BridgeEdge) -> bool {
        let (ri, ti) = self.find(edge.from);
        let (rj, tj) = self.find(edge.to);
        let shift = sub(add(ti, edge.cell), tj);
        if ri != rj {
            self.parent[rj] = ri;
            self.offset[rj] = shift;
            let moved = std::mem::take(&mut self.generators[rj]);
            let mut gens = std::mem::take(&mut self.generators[ri]);
            gens.extend(moved);
            self.generators[ri] = hermite_normal_form(&gens, self.dim);
            self.components -= 1;
            return true;
        }
        if shift[..self.dim].iter().all(|&x| x == 0) {
            return false;
        }
        let mut gens = self.generators[ri].clone();
        gens.push(shift);
        let reduced = hermite_normal_form(&gens, self.dim);
        if reduced == self.generators[ri] {
            return false;
        }
        self.generators[ri] = reduced;
        true
    }

    fn spans_everything(&mut self) -> bool {
        if self.components != 1 {
            return false;
        }
        let (root, _) = self.find(0);
        sublattice_index(&self.generators[root], self.dim) == Some(1)
    }
}

fn candidate_edges(set: &PeriodicSet, radius: f64) -> Vec<BridgeEdge> {
    let mut edges = Vec::new();
    for (i, p) in set.cartesian().iter().enumerate() {
        let near = set
            .points_in_ball(p, radius)
            .expect("finite non-negative radius");
        for q in near {
            let keep = match q.motif.cmp(&i) {
                Ordering::Greater => true,
                Ordering::Less => false,
                Ordering::Equal => q.cell > [0, 0, 0],
            };
            if keep {
                edges.push(BridgeEdge {
                    from: i,
                    to: q.motif,
                    cell: q.cell,
                    distance: (q.position - p).norm(),
                });
            }
        }
    }
    edges.sort_by(|a, b| {
        a.distance
            .total_cmp(&b.distance)
            .then(a.from.cmp(&b.from))
            .then(a.to.cmp(&b.to))
            .then(a.cell.cmp(&b.cell))
    });
    edges
}

/// Exact bridge length: the least threshold at which the graph on the
/// infinite set, joining points at distance at most the threshold, becomes
/// connected.
pub fn bridge_length(set: &PeriodicSet) -> BridgeResult {
    let geometry = set.geometry();
    let mut radius = geometry.reach() + GEOMETRY_TOLERANCE;
    loop {
        let mut forest = OffsetForest::new(set.len(), set.dim());
        let mut witness_edges = Vec::new();
        for edge in candidate_edges(set, radius) {
            if forest.insert(&edge) {
                witness_edges.push(edge);
                if forest.spans_everything() {
                    return BridgeResult {
                        beta: edge.distance,
                        witness_edges,
                    };
                }
            }
        }
        // unreachable for valid input; widening keeps rounding from looping forever
        log::warn!("bridge search exhausted radius {radius}, widening");
        radius *= 2.0;
    }
}

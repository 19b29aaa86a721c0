//! Lattices, unit cells and periodic point sets `S = Λ + M`.

mod lattice;
mod set;

pub use lattice::{CellGeometry, Lattice};
pub use set::{PeriodicPoint, PeriodicSet};

//! Complete isometry invariants and continuous metrics for periodic point
//! sets in dimensions 1 to 3.
//!
//! A periodic point set `S = Λ + M` is a lattice `Λ` plus a finite motif `M`.
//! The crate computes
//!
//! * local α-clusters, bridge lengths, stable radii and the isotree of
//!   α-partitions ([`cluster`]);
//! * isometry classes of clusters, symmetry groups and isosets, and decides
//!   whether two periodic sets are isometric ([`congruence`]);
//! * the boundary-tolerant cluster distance and the Earth Mover's Distance on
//!   isosets, with a guaranteed approximation factor ([`metrics`]);
//! * Pointwise Distance Distributions, Average Minimum Distances and the lower
//!   bound they give for the isoset metric ([`pdd`]);
//! * crystal file ingestion and the staged near-duplicate scan ([`io`],
//!   [`scan`]).
//!
//! Geometry is evaluated in double precision with an absolute tolerance of
//! [`GEOMETRY_TOLERANCE`]; isometry tests use a tolerance relative to the
//! cluster radius (see [`congruence::isometry_tolerance`]).

pub mod cluster;
pub mod congruence;
mod error;
pub mod io;
pub mod linalg;
pub mod metrics;
pub mod pdd;
pub mod periodic;
pub mod scan;
pub mod spatial;

pub use error::{Error, Result};
pub use linalg::Point;
pub use periodic::{CellGeometry, Lattice, PeriodicPoint, PeriodicSet};

/// Absolute tolerance for distance comparisons, in input length units.
pub const GEOMETRY_TOLERANCE: f64 = 1e-9;

/// Rational weight `k/m` of an isometry class or a PDD row.
pub type Weight = num_rational::Ratio<u64>;

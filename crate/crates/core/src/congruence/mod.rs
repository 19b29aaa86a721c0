//! Isometry testing of clusters, symmetry groups, α-partitions and isosets.

mod isoset;
pub(crate) mod matcher;
mod symmetry;

pub use isoset::{
    alpha_partition, common_stable_radius, isometric, isometric_at, isoset, isosets_match, IsometryClass, Isoset,
};
pub(crate) use isoset::{all_clusters, check_dims, match_classes, partition_clusters};
pub use matcher::{cluster_isometries, cluster_isometry};
pub use symmetry::{cluster_symmetry_group, symmetry_group, SymmetryGroup, SymmetryOrder};

use nalgebra::Matrix3;

use crate::linalg::Point;

/// Relative factor of the isometry tolerance.
pub const ISOMETRY_RELATIVE_TOLERANCE: f64 = 1e-6;

/// Tolerance for matching clusters of the given radius: proportional to the
/// radius with an absolute floor.
pub fn isometry_tolerance(radius: f64) -> f64 {
    (ISOMETRY_RELATIVE_TOLERANCE * radius).max(1e-9)
}

/// A linear isometry fixing the origin, acting on the first `dim` axes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrthogonalMap {
    matrix: Matrix3<f64>,
    dim: usize,
}

impl OrthogonalMap {
    pub fn identity(dim: usize) -> Self {
        OrthogonalMap {
            matrix: Matrix3::identity(),
            dim,
        }
    }

    /// Wraps a matrix that acts as the identity beyond `dim` axes. Returns
    /// `None` unless it is orthogonal within `1e-9`.
    pub fn from_matrix(matrix: Matrix3<f64>, dim: usize) -> Option<Self> {
        let defect = (matrix * matrix.transpose() - Matrix3::identity()).abs().max();
        (defect <= 1e-9).then_some(OrthogonalMap { matrix, dim })
    }

    pub(crate) fn new_unchecked(matrix: Matrix3<f64>, dim: usize) -> Self {
        OrthogonalMap { matrix, dim }
    }

    pub fn matrix(&self) -> &Matrix3<f64> {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_reflection(&self) -> bool {
        self.matrix.determinant() < 0.0
    }

    pub fn apply(&self, p: &Point) -> Point {
        self.matrix * p
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &OrthogonalMap) -> OrthogonalMap {
        OrthogonalMap {
            matrix: self.matrix * other.matrix,
            dim: self.dim,
        }
    }

    pub fn inverse(&self) -> OrthogonalMap {
        OrthogonalMap {
            matrix: self.matrix.transpose(),
            dim: self.dim,
        }
    }

    /// Largest entry-wise difference between two maps.
    pub fn distance(&self, other: &OrthogonalMap) -> f64 {
        (self.matrix - other.matrix).abs().max()
    }

    /// Matrix rows restricted to the first `dim` axes.
    pub fn rows(&self) -> Vec<Vec<f64>> {
        (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self.matrix[(i, j)]).collect())
            .collect()
    }
}

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use super::matcher::{cluster_isometries, extremal_anchors};
use super::{isometry_tolerance, OrthogonalMap};
use crate::cluster::{alpha_cluster, Cluster};
use crate::error::Result;
use crate::periodic::PeriodicSet;

/// Center-fixing self-isometries of a cluster.
#[derive(Debug, Clone, PartialEq)]
pub enum SymmetryGroup {
    /// The cluster spans at most `dim - 2` axes, so rotations about its span
    /// form a continuous family. `span_order` counts the distinct actions on
    /// the span itself.
    Continuous { span_dim: usize, span_order: usize },
    Finite(Vec<OrthogonalMap>),
}

/// Size of a symmetry group, enough to compare nested groups.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SymmetryOrder {
    Finite(usize),
    Continuous { span_dim: usize, span_order: usize },
}

impl SymmetryGroup {
    pub fn order(&self) -> SymmetryOrder {
        match self {
            SymmetryGroup::Continuous {
                span_dim,
                span_order,
            } => SymmetryOrder::Continuous {
                span_dim: *span_dim,
                span_order: *span_order,
            },
            SymmetryGroup::Finite(maps) => SymmetryOrder::Finite(maps.len()),
        }
    }

    pub fn maps(&self) -> Option<&[OrthogonalMap]> {
        match self {
            SymmetryGroup::Finite(maps) => Some(maps),
            SymmetryGroup::Continuous { .. } => None,
        }
    }
}

impl SymmetryOrder {
    /// Number of elements, or `None` for a continuous group.
    pub fn finite(&self) -> Option<usize> {
        match self {
            SymmetryOrder::Finite(n) => Some(*n),
            SymmetryOrder::Continuous { .. } => None,
        }
    }
}

impl PartialOrd for SymmetryOrder {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for SymmetryOrder {
    /// Orders by group size: continuous groups exceed finite ones, and a
    /// continuous group over a smaller span is larger.
    fn cmp(&self, other: &Self) -> Ordering {
        use SymmetryOrder::*;
        match (self, other) {
            (Finite(a), Finite(b)) => a.cmp(b),
            (Finite(_), Continuous { .. }) => Ordering::Less,
            (Continuous { .. }, Finite(_)) => Ordering::Greater,
            (
                Continuous {
                    span_dim: a,
                    span_order: x,
                },
                Continuous {
                    span_dim: b,
                    span_order: y,
                },
            ) => b.cmp(a).then(x.cmp(y)),
        }
    }
}

/// Symmetry group of an origin-centered cluster, with the isometry tolerance
/// scaled to its radius.
pub fn cluster_symmetry_group(cluster: &Cluster) -> SymmetryGroup {
    let dim = cluster.dim();
    let tol = isometry_tolerance(cluster.radius());
    let (anchors, _) = extremal_anchors(cluster.points(), dim, tol);
    let maps = cluster_isometries(cluster, cluster, tol).expect("same dimension");
    if anchors.len() + 2 <= dim {
        SymmetryGroup::Continuous {
            span_dim: anchors.len(),
            span_order: maps.len(),
        }
    } else {
        SymmetryGroup::Finite(maps)
    }
}

/// Symmetry group of the α-cluster of motif point `index`.
pub fn symmetry_group(set: &PeriodicSet, index: usize, alpha: f64) -> Result<SymmetryGroup> {
    Ok(cluster_symmetry_group(&alpha_cluster(set, index, alpha)?))
}

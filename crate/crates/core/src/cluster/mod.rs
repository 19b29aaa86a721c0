//! Local α-clusters, bridge length, stable radii and the isotree.

mod bridge;
mod stability;

pub use bridge::{bridge_length, BridgeEdge, BridgeResult};
pub use stability::{
    is_stable_radius, isotree, min_stable_radius, stable_radius_upper_bound, Isotree, IsotreeLevel, StableRadiusBound,
};

use crate::error::{Error, Result};
use crate::linalg::{norm_lex_cmp, Point};
use crate::periodic::PeriodicSet;
use crate::GEOMETRY_TOLERANCE;

/// A finite point cloud of vectors relative to a center, together with the
/// radius it was cut at. Points are kept sorted by norm, then
/// lexicographically. Clusters cut from a periodic set contain the zero
/// vector exactly once.
#[derive(Debug, Clone, PartialEq)]
pub struct Cluster {
    dim: usize,
    radius: f64,
    center: Point,
    points: Vec<Point>,
}

impl Cluster {
    /// Wraps arbitrary center-relative vectors. Every vector must lie within
    /// `radius` up to the geometric tolerance.
    pub fn new(dim: usize, radius: f64, mut points: Vec<Point>) -> Result<Self> {
        if !(1..=3).contains(&dim) {
            return Err(Error::InvalidMotif(format!("unsupported dimension {dim}")));
        }
        if !(radius.is_finite() && radius >= 0.0) {
            return Err(Error::InvalidRadius(radius));
        }
        if points.is_empty() {
            return Err(Error::EmptyInput);
        }
        for p in &points {
            if p.iter().skip(dim).any(|&x| x != 0.0) || p.iter().any(|x| !x.is_finite()) {
                return Err(Error::InvalidMotif(format!(
                    "cluster vector {p:?} is not a finite {dim}-dimensional vector"
                )));
            }
            if p.norm() > radius + GEOMETRY_TOLERANCE {
                return Err(Error::InvalidRadius(radius));
            }
        }
        points.sort_by(norm_lex_cmp);
        Ok(Cluster {
            dim,
            radius,
            center: Point::zeros(),
            points,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// Cartesian position of the center in the periodic set it came from.
    pub fn center(&self) -> &Point {
        &self.center
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Sub-cluster of all vectors within a smaller radius.
    pub fn restrict(&self, radius: f64) -> Cluster {
        let end = self
            .points
            .partition_point(|p| p.norm() <= radius + GEOMETRY_TOLERANCE);
        Cluster {
            dim: self.dim,
            radius,
            center: self.center,
            points: self.points[..end].to_vec(),
        }
    }

    /// Points as rows of `dim` components.
    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.points
            .iter()
            .map(|p| p.as_slice()[..self.dim].to_vec())
            .collect()
    }
}

/// The α-cluster of motif point `index`: all vectors `q - p` with `q` in the
/// set and `|q - p| <= alpha`.
pub fn alpha_cluster(set: &PeriodicSet, index: usize, alpha: f64) -> Result<Cluster> {
    if index >= set.len() {
        return Err(Error::InvalidMotifIndex {
            index,
            size: set.len(),
        });
    }
    let center = set.cartesian()[index];
    let found = set.points_in_ball(&center, alpha)?;
    let mut points: Vec<Point> = found
        .iter()
        .map(|q| {
            if q.motif == index && q.cell == [0, 0, 0] {
                Point::zeros()
            } else {
                q.position - center
            }
        })
        .collect();
    points.sort_by(norm_lex_cmp);
    Ok(Cluster {
        dim: set.dim(),
        radius: alpha,
        center,
        points,
    })
}

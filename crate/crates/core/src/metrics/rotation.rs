use nalgebra::Matrix3;

use super::{approximation_factor, ApproxValue};
use crate::cluster::Cluster;
use crate::congruence::matcher::{extremal_anchors, frame_completions, gram_schmidt};
use crate::congruence::OrthogonalMap;
use crate::error::{Error, Result};
use crate::linalg::Point;
use crate::spatial::KdTree;

/// Vectors shorter than this are treated as the origin when choosing anchors.
const FLAT: f64 = 1e-12;

/// Best map found by a directed search and the Hausdorff distance it gives.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Alignment {
    pub distance: f64,
    pub map: OrthogonalMap,
}

/// Anchored search for `min_f d_H(f(source), target)` over center-fixing
/// orthogonal maps, against a fixed target cloud.
pub(crate) struct Aligner<'a> {
    dim: usize,
    target: &'a [Point],
    tree: KdTree,
    /// Target indices sorted by norm for shell pruning.
    by_norm: Vec<usize>,
}

impl<'a> Aligner<'a> {
    pub fn new(target: &'a [Point], dim: usize) -> Self {
        let mut by_norm: Vec<usize> = (0..target.len()).collect();
        by_norm.sort_by(|&a, &b| target[a].norm().total_cmp(&target[b].norm()));
        Aligner {
            dim,
            target,
            tree: KdTree::new(target),
            by_norm,
        }
    }

    /// `d_H(map(source), target)`, abandoned as soon as it reaches `bound`
    /// (then the returned value is at least `bound`).
    fn hausdorff_below(&self, map: &OrthogonalMap, source: &[Point], bound: f64) -> f64 {
        let mut worst: f64 = 0.0;
        // far points are the most likely to fail, so test them first
        for p in source.iter().rev() {
            match self.tree.nearest_within(&map.apply(p), bound) {
                Some((_, d)) => worst = worst.max(d),
                None => return bound,
            }
        }
        worst
    }

    /// Target points whose norm is within `slack` of `norm`, closest first.
    fn shell(&self, norm: f64, slack: f64) -> Vec<usize> {
        let mut shell: Vec<usize> = self
            .by_norm
            .iter()
            .copied()
            .filter(|&j| (self.target[j].norm() - norm).abs() <= slack)
            .collect();
        shell.sort_by(|&a, &b| {
            let da = (self.target[a].norm() - norm).abs();
            let db = (self.target[b].norm() - norm).abs();
            da.total_cmp(&db).then(a.cmp(&b))
        });
        shell
    }

    /// Searches anchored maps for `source`. The search stops once the best
    /// distance is at most `good_enough`; `warm` is tried first.
    pub fn align(&self, source: &[Point], good_enough: f64, warm: Option<&OrthogonalMap>) -> Alignment {
        let mut best = Alignment {
            distance: f64::INFINITY,
            map: OrthogonalMap::identity(self.dim),
        };
        let consider = |map: OrthogonalMap, best: &mut Alignment| {
            let d = self.hausdorff_below(&map, source, best.distance);
            if d < best.distance {
                *best = Alignment { distance: d, map };
            }
        };
        if let Some(w) = warm {
            consider(*w, &mut best);
        }
        consider(OrthogonalMap::identity(self.dim), &mut best);
        if best.distance <= good_enough || source.is_empty() {
            return best;
        }
        if self.dim == 1 {
            let flip = OrthogonalMap::new_unchecked(Matrix3::from_diagonal(&Point::new(-1.0, 1.0, 1.0)), 1);
            consider(flip, &mut best);
            return best;
        }
        let (anchor_idx, frame) = extremal_anchors(source, self.dim - 1, FLAT);
        if anchor_idx.is_empty() {
            // every source point is the origin, so all maps agree
            return best;
        }
        let p1 = source[anchor_idx[0]];
        for j1 in self.shell(p1.norm(), best.distance) {
            if (self.target[j1].norm() - p1.norm()).abs() > best.distance {
                continue;
            }
            let q1 = self.target[j1];
            if anchor_idx.len() == 1 {
                let Some(target_frame) = gram_schmidt(&[q1], FLAT) else {
                    continue;
                };
                for map in frame_completions(&frame, &target_frame, self.dim, true) {
                    consider(map, &mut best);
                }
            } else {
                let p2 = source[anchor_idx[1]];
                let span = (p2 - p1).norm();
                for j2 in self.shell(p2.norm(), best.distance) {
                    let q2 = self.target[j2];
                    if (q2.norm() - p2.norm()).abs() > best.distance
                        || ((q2 - q1).norm() - span).abs() > 2.0 * best.distance
                    {
                        continue;
                    }
                    let Some(target_frame) = gram_schmidt(&[q1, q2], FLAT) else {
                        continue;
                    };
                    for map in frame_completions(&frame, &target_frame, self.dim, true) {
                        consider(map, &mut best);
                    }
                    if best.distance <= good_enough {
                        return best;
                    }
                }
            }
            if best.distance <= good_enough {
                return best;
            }
        }
        best
    }
}

/// Approximate rotation-invariant distance between two point clouds: the
/// larger of the two directed minima over center-fixing orthogonal maps.
/// The value is an upper bound within the returned factor of the true one.
pub fn rotation_invariant_distance(c: &Cluster, d: &Cluster, delta: f64) -> Result<ApproxValue> {
    if c.dim() != d.dim() {
        return Err(Error::DimensionMismatch {
            left: c.dim(),
            right: d.dim(),
        });
    }
    let forward = Aligner::new(d.points(), d.dim()).align(c.points(), 0.0, None);
    let backward = Aligner::new(c.points(), c.dim()).align(d.points(), 0.0, None);
    Ok(ApproxValue {
        value: forward.distance.max(backward.distance),
        factor: approximation_factor(c.dim(), delta),
    })
}

use super::OrthogonalMap;
use crate::cluster::Cluster;
use crate::error::{Error, Result};
use crate::linalg::{complete_basis, frame_map, reject, Point};
use crate::spatial::KdTree;

/// Extremal anchors of a point cloud: a point of maximal norm, then
/// repeatedly a point of maximal distance to the span of the previous ones.
/// Stops after `limit` anchors or once every point lies within `flat` of the
/// current span. Returns anchor indices and the orthonormal frame they span.
pub(crate) fn extremal_anchors(points: &[Point], limit: usize, flat: f64) -> (Vec<usize>, Vec<Point>) {
    let mut anchors = Vec::new();
    let mut frame: Vec<Point> = Vec::new();
    while anchors.len() < limit {
        let mut best: Option<(usize, f64)> = None;
        for (i, p) in points.iter().enumerate() {
            let h = reject(p, &frame).norm();
            if best.is_none_or(|(_, b)| h > b) {
                best = Some((i, h));
            }
        }
        match best {
            Some((i, h)) if h > flat => {
                frame.push(reject(&points[i], &frame) / h);
                anchors.push(i);
            }
            _ => break,
        }
    }
    (anchors, frame)
}

/// Orthonormal frame spanned by `vectors` via Gram-Schmidt, or `None` when a
/// vector has no component beyond `flat` outside the span of its predecessors.
pub(crate) fn gram_schmidt(vectors: &[Point], flat: f64) -> Option<Vec<Point>> {
    let mut frame = Vec::with_capacity(vectors.len());
    for v in vectors {
        let r = reject(v, &frame);
        let h = r.norm();
        if h <= flat {
            return None;
        }
        frame.push(r / h);
    }
    Some(frame)
}

/// Orthogonal maps sending the frame `from` onto `to` that agree on the
/// anchors: one map when the complement has dimension other than one, and
/// both orientations when it is a single axis.
pub(crate) fn frame_completions(from: &[Point], to: &[Point], dim: usize, both: bool) -> Vec<OrthogonalMap> {
    let source = complete_basis(from, dim);
    let mut target = complete_basis(to, dim);
    let mut maps = vec![OrthogonalMap::new_unchecked(frame_map(&source, &target, dim), dim)];
    if both && dim - from.len() == 1 {
        let last = target.len() - 1;
        target[last] = -target[last];
        maps.push(OrthogonalMap::new_unchecked(frame_map(&source, &target, dim), dim));
    }
    maps
}

/// Whether `map` sends `source` bijectively onto `target` with every point
/// within `tol` of its partner.
pub(crate) fn verify_map(map: &OrthogonalMap, source: &[Point], target: &KdTree, tol: f64) -> bool {
    let mut used = vec![false; target.len()];
    for p in source {
        let image = map.apply(p);
        match target.nearest_within(&image, tol * (1.0 + 1e-12) + f64::MIN_POSITIVE) {
            Some((j, _)) if !used[j] => used[j] = true,
            Some(_) => {
                // duplicate nearest partner: fall back to a full matching
                let all: Vec<Point> = source.iter().map(|p| map.apply(p)).collect();
                return perfect_matching(&all, target, tol);
            }
            None => return false,
        }
    }
    true
}

/// Maximum bipartite matching between points and tree points within `tol`
/// (augmenting paths); true when every point is matched.
fn perfect_matching(points: &[Point], target: &KdTree, tol: f64) -> bool {
    let adjacency: Vec<Vec<usize>> = points.iter().map(|p| target.within(p, tol)).collect();
    let mut owner: Vec<Option<usize>> = vec![None; target.len()];
    fn augment(
        u: usize,
        adjacency: &[Vec<usize>],
        owner: &mut [Option<usize>],
        seen: &mut [bool],
    ) -> bool {
        for &v in &adjacency[u] {
            if seen[v] {
                continue;
            }
            seen[v] = true;
            if owner[v].is_none_or(|w| augment(w, adjacency, owner, seen)) {
                owner[v] = Some(u);
                return true;
            }
        }
        false
    }
    for u in 0..points.len() {
        let mut seen = vec![false; target.len()];
        if !augment(u, &adjacency, &mut owner, &mut seen) {
            return false;
        }
    }
    true
}

fn check_dims(c: &Cluster, d: &Cluster) -> Result<()> {
    if c.dim() != d.dim() {
        return Err(Error::DimensionMismatch {
            left: c.dim(),
            right: d.dim(),
        });
    }
    Ok(())
}

fn same_norm_profile(c: &Cluster, d: &Cluster, tol: f64) -> bool {
    c.len() == d.len()
        && c
            .points()
            .iter()
            .zip(d.points())
            .all(|(p, q)| (p.norm() - q.norm()).abs() <= tol)
}

/// Enumerates center-fixing maps sending `c` onto `d` within `tol`, calling
/// `visit` on each verified map until it returns `false`. Set `all` to also
/// try both orientations of every anchor alignment.
fn search(c: &Cluster, d: &Cluster, tol: f64, all: bool, visit: &mut dyn FnMut(OrthogonalMap) -> bool) {
    if !same_norm_profile(c, d, tol) {
        return;
    }
    let dim = c.dim();
    let (anchor_idx, source_frame) = extremal_anchors(c.points(), dim, tol);
    let rank = anchor_idx.len();
    let used = rank.min(dim - 1);
    let anchors: Vec<Point> = anchor_idx[..used].iter().map(|&i| c.points()[i]).collect();
    let source_frame = &source_frame[..used];
    let tree = KdTree::new(d.points());
    // both orientations only matter when the anchors leave a single free axis
    let both = dim - used == 1;
    let mut chosen: Vec<Point> = Vec::with_capacity(used);
    let mut stop = false;
    extend(
        &anchors,
        source_frame,
        d.points(),
        tol,
        &mut chosen,
        &mut |targets: &[Point]| {
            let Some(target_frame) = gram_schmidt(targets, tol * 0.5) else {
                return true;
            };
            for map in frame_completions(source_frame, &target_frame, dim, both || all) {
                if verify_map(&map, c.points(), &tree, tol) && !visit(map) {
                    return false;
                }
            }
            true
        },
        &mut stop,
    );
}

/// Depth-first choice of images for the anchors, keeping norms and mutual
/// distances consistent within `tol`.
fn extend(
    anchors: &[Point],
    frame: &[Point],
    candidates: &[Point],
    tol: f64,
    chosen: &mut Vec<Point>,
    leaf: &mut dyn FnMut(&[Point]) -> bool,
    stop: &mut bool,
) {
    if *stop {
        return;
    }
    let level = chosen.len();
    if level == anchors.len() {
        if !leaf(chosen) {
            *stop = true;
        }
        return;
    }
    let p = anchors[level];
    let height = reject(&p, &frame[..level]).norm();
    for q in candidates {
        if (q.norm() - p.norm()).abs() > tol {
            continue;
        }
        let consistent = chosen
            .iter()
            .zip(anchors)
            .all(|(qk, pk)| ((q - qk).norm() - (p - pk).norm()).abs() <= 2.0 * tol);
        if !consistent {
            continue;
        }
        if level > 0 {
            let target_frame = match gram_schmidt(chosen, 0.0) {
                Some(f) => f,
                None => continue,
            };
            if (reject(q, &target_frame).norm() - height).abs() > 4.0 * tol {
                continue;
            }
        }
        chosen.push(*q);
        extend(anchors, frame, candidates, tol, chosen, leaf, stop);
        chosen.pop();
        if *stop {
            return;
        }
    }
}

/// A center-fixing orthogonal map sending `c` onto `d` point by point within
/// `tol`, if one exists.
pub fn cluster_isometry(c: &Cluster, d: &Cluster, tol: f64) -> Result<Option<OrthogonalMap>> {
    check_dims(c, d)?;
    let mut found = None;
    search(c, d, tol, false, &mut |map| {
        found = Some(map);
        false
    });
    Ok(found)
}

/// All distinct center-fixing maps sending `c` onto `d` that are determined
/// by an anchor alignment. When the anchors span all but at most one axis
/// this is the complete set of such maps.
pub fn cluster_isometries(c: &Cluster, d: &Cluster, tol: f64) -> Result<Vec<OrthogonalMap>> {
    check_dims(c, d)?;
    let mut maps: Vec<OrthogonalMap> = Vec::new();
    search(c, d, tol, true, &mut |map| {
        if !maps.iter().any(|m| m.distance(&map) <= 1e-6) {
            maps.push(map);
        }
        true
    });
    Ok(maps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cluster::alpha_cluster;
    use crate::congruence::isometry_tolerance;
    use crate::periodic::{Lattice, PeriodicSet};
    use nalgebra::Rotation3;

    fn square() -> PeriodicSet {
        PeriodicSet::new(Lattice::integer(2).unwrap(), &[vec![0.0, 0.0]]).unwrap()
    }

    fn hexagonal() -> PeriodicSet {
        let h = 3f64.sqrt() / 2.0;
        let lat = Lattice::from_vectors(&[vec![1.0, 0.0], vec![0.5, h]]).unwrap();
        PeriodicSet::new(lat, &[vec![0.0, 0.0]]).unwrap()
    }

    fn rotate(c: &Cluster, m: &nalgebra::Matrix3<f64>) -> Cluster {
        Cluster::new(c.dim(), c.radius(), c.points().iter().map(|p| m * p).collect()).unwrap()
    }

    #[test]
    fn rotated_square_cluster_matches() {
        let c = alpha_cluster(&square(), 0, 2.0).unwrap();
        let rot = *Rotation3::from_axis_angle(&nalgebra::Vector3::z_axis(), 0.7).matrix();
        let d = rotate(&c, &rot);
        let map = cluster_isometry(&c, &d, isometry_tolerance(2.0)).unwrap().unwrap();
        for p in c.points() {
            let image = map.apply(p);
            assert!(d.points().iter().any(|q| (q - image).norm() < 1e-9));
        }
    }

    #[test]
    fn square_and_hexagonal_clusters_differ() {
        let c = alpha_cluster(&square(), 0, 2.0).unwrap();
        let d = alpha_cluster(&hexagonal(), 0, 2.0).unwrap();
        assert_eq!((c.len(), d.len()), (13, 19));
        assert!(cluster_isometry(&c, &d, 1e-6).unwrap().is_none());
        let c1 = alpha_cluster(&square(), 0, 1.0).unwrap();
        let d1 = alpha_cluster(&hexagonal(), 0, 1.0).unwrap();
        assert!(cluster_isometry(&c1, &d1, 1e-6).unwrap().is_none());
    }

    #[test]
    fn chiral_cluster_needs_reflection() {
        let pts = vec![
            Point::zeros(),
            Point::new(1.0, 0.0, 0.0),
            Point::new(0.0, 2.0, 0.0),
            Point::new(0.0, 0.0, 3.0),
            Point::new(0.5, 0.9, 0.0),
        ];
        let c = Cluster::new(3, 3.0, pts.clone()).unwrap();
        let mirror = Cluster::new(3, 3.0, pts.iter().map(|p| Point::new(p.x, p.y, -p.z)).collect()).unwrap();
        let map = cluster_isometry(&c, &mirror, 1e-6).unwrap().unwrap();
        assert!(map.is_reflection());
        let self_maps = cluster_isometries(&c, &c, 1e-6).unwrap();
        assert_eq!(self_maps.len(), 1);
    }

    #[test]
    fn dimension_mismatch() {
        let a = Cluster::new(2, 1.0, vec![Point::zeros()]).unwrap();
        let b = Cluster::new(3, 1.0, vec![Point::zeros()]).unwrap();
        assert_eq!(
            cluster_isometry(&a, &b, 1e-6).unwrap_err(),
            Error::DimensionMismatch { left: 2, right: 3 }
        );
    }

    #[test]
    fn matching_fallback_resolves_greedy_conflicts() {
        // tolerance wider than the spacing: greedy nearest assignment collides
        let a: Vec<Point> = vec![Point::new(0.0, 0.0, 0.0), Point::new(0.1, 0.0, 0.0)];
        let b: Vec<Point> = vec![Point::new(0.04, 0.0, 0.0), Point::new(0.2, 0.0, 0.0)];
        let tree = KdTree::new(&b);
        assert!(verify_map(&OrthogonalMap::identity(1), &a, &tree, 0.11));
        assert!(!verify_map(&OrthogonalMap::identity(1), &a, &tree, 0.05));
    }
}

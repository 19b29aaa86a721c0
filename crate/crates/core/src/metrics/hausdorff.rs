use crate::error::{Error, Result};
use crate::linalg::Point;
use crate::spatial::KdTree;

/// Directed Hausdorff distance `max_{p ∈ C} min_{q ∈ D} |p - q|`.
pub fn directed_hausdorff(c: &[Point], d: &[Point]) -> Result<f64> {
    if c.is_empty() || d.is_empty() {
        return Err(Error::EmptyInput);
    }
    let tree = KdTree::new(d);
    Ok(c.iter()
        .map(|p| tree.nearest(p).expect("non-empty tree").1)
        .fold(0.0, f64::max))
}

/// Minimum over bijections of the largest displacement between paired points.
pub fn bottleneck_distance_finite(a: &[Point], b: &[Point]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::SizeMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    if a.is_empty() {
        return Ok(0.0);
    }
    let dist: Vec<Vec<f64>> = a.iter().map(|p| b.iter().map(|q| (p - q).norm()).collect()).collect();
    let mut candidates: Vec<f64> = dist.iter().flatten().copied().collect();
    candidates.sort_by(f64::total_cmp);
    candidates.dedup();
    // the answer is the smallest candidate admitting a perfect matching
    let (mut lo, mut hi) = (0, candidates.len() - 1);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if has_perfect_matching(&dist, candidates[mid]) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Ok(candidates[lo])
}

fn has_perfect_matching(dist: &[Vec<f64>], threshold: f64) -> bool {
    let n = dist.len();
    let mut owner: Vec<Option<usize>> = vec![None; n];
    fn augment(u: usize, dist: &[Vec<f64>], t: f64, owner: &mut [Option<usize>], seen: &mut [bool]) -> bool {
        for v in 0..dist[u].len() {
            if dist[u][v] > t || seen[v] {
                continue;
            }
            seen[v] = true;
            if owner[v].is_none_or(|w| augment(w, dist, t, owner, seen)) {
                owner[v] = Some(u);
                return true;
            }
        }
        false
    }
    (0..n).all(|u| augment(u, dist, threshold, &mut owner, &mut vec![false; n]))
}

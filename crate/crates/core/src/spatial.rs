//! Exact nearest-neighbour index over a fixed point cloud.

use crate::linalg::Point;

/// Static kd-tree with median splits along the axis of largest spread.
/// The tree is stored implicitly: the node of a slice `[lo, hi)` sits at its
/// midpoint in `order`.
#[derive(Debug, Clone)]
pub struct KdTree {
    points: Vec<Point>,
    order: Vec<usize>,
    axis: Vec<u8>,
}

impl KdTree {
    pub fn new(points: &[Point]) -> Self {
        let mut order: Vec<usize> = (0..points.len()).collect();
        let mut axis = vec![0u8; points.len()];
        build(points, &mut order, &mut axis);
        KdTree {
            points: points.to_vec(),
            order,
            axis,
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    /// Index and distance of a nearest point, or `None` for an empty tree.
    pub fn nearest(&self, query: &Point) -> Option<(usize, f64)> {
        self.nearest_within(query, f64::INFINITY)
    }

    /// Nearest point strictly closer than `bound`, if any.
    pub fn nearest_within(&self, query: &Point, bound: f64) -> Option<(usize, f64)> {
        let mut best = (usize::MAX, bound * bound);
        self.search(query, 0, self.order.len(), &mut best);
        (best.0 != usize::MAX).then(|| (best.0, best.1.sqrt()))
    }

    /// Indices of all points within the closed ball of `radius` around `query`.
    pub fn within(&self, query: &Point, radius: f64) -> Vec<usize> {
        let mut out = Vec::new();
        self.collect(query, radius, 0, self.order.len(), &mut out);
        out.sort_unstable();
        out
    }

    fn search(&self, q: &Point, lo: usize, hi: usize, best: &mut (usize, f64)) {
        if lo >= hi {
            return;
        }
        let mid = lo + (hi - lo) / 2;
        let idx = self.order[mid];
        let p = &self.points[idx];
        let d2 = (p - q).norm_squared();
        if d2 < best.1 || (d2 == best.1 && idx < best.0) {
            *best = (idx, d2);
        }
        let a = self.axis[mid] as usize;
        let diff = q[a] - p[a];
        let (near, far) = if diff < 0.0 {
            ((lo, mid), (mid + 1, hi))
        } else {
            ((mid + 1, hi), (lo, mid))
        };
        self.search(q, near.0, near.1, best);
        if diff * diff <= best.1 {
            self.search(q, far.0, far.1, best);
        }
    }

    fn collect(&self, q: &Point, r: f64, lo: usize, hi: usize, out: &mut Vec<usize>) {
        if lo >= hi {
            return;
        }
        let mid = lo + (hi - lo) / 2;
        let idx = self.order[mid];
        let p = &self.points[idx];
        if (p - q).norm() <= r {
            out.push(idx);
        }
        let a = self.axis[mid] as usize;
        let diff = q[a] - p[a];
        if diff - r <= 0.0 {
            self.collect(q, r, lo, mid, out);
        }
        if diff + r >= 0.0 {
            self.collect(q, r, mid + 1, hi, out);
        }
    }
}

fn build(points: &[Point], order: &mut [usize], axis: &mut [u8]) {
    if order.len() <= 1 {
        if let Some(a) = axis.first_mut() {
            *a = 0;
        }
        return;
    }
    let mut lo = Point::repeat(f64::INFINITY);
    let mut hi = Point::repeat(f64::NEG_INFINITY);
    for &i in order.iter() {
        lo = lo.inf(&points[i]);
        hi = hi.sup(&points[i]);
    }
    let a = (hi - lo).imax();
    let mid = order.len() / 2;
    order.select_nth_unstable_by(mid, |&x, &y| points[x][a].total_cmp(&points[y][a]));
    axis[mid] = a as u8;
    let (left, rest) = order.split_at_mut(mid);
    let (left_axis, rest_axis) = axis.split_at_mut(mid);
    build(points, left, left_axis);
    build(points, &mut rest[1..], &mut rest_axis[1..]);
}

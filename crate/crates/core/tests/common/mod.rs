//! Fixtures, random generators and brute-force oracles shared by the
//! integration tests. Oracles deliberately avoid the library's algorithms.

#![allow(dead_code)]

use isoset::linalg::Point;
use isoset::{Lattice, PeriodicSet, Weight};
use nalgebra::{Matrix3, Rotation3, Vector3};
use num_rational::Ratio;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

// ---------------------------------------------------------------- fixtures

pub fn line(step: f64) -> PeriodicSet {
    PeriodicSet::new(Lattice::from_vectors(&[vec![step]]).unwrap(), &[vec![0.0]]).unwrap()
}

pub fn square() -> PeriodicSet {
    PeriodicSet::new(Lattice::integer(2).unwrap(), &[vec![0.0, 0.0]]).unwrap()
}

pub fn hexagonal() -> PeriodicSet {
    let h = 3f64.sqrt() / 2.0;
    let lat = Lattice::from_vectors(&[vec![1.0, 0.0], vec![0.5, h]]).unwrap();
    PeriodicSet::new(lat, &[vec![0.0, 0.0]]).unwrap()
}

fn square_cell(side: f64, points: &[[f64; 2]]) -> PeriodicSet {
    let lat = Lattice::from_vectors(&[vec![side, 0.0], vec![0.0, side]]).unwrap();
    let frac: Vec<Vec<f64>> = points.iter().map(|p| vec![p[0] / side, p[1] / side]).collect();
    PeriodicSet::new(lat, &frac).unwrap()
}

/// Four points in the square cell of side 10.
pub fn s1() -> PeriodicSet {
    square_cell(10.0, &[[2.0, 2.0], [2.0, 8.0], [8.0, 2.0], [8.0, 8.0]])
}

/// `s1` plus the cell center.
pub fn s2() -> PeriodicSet {
    square_cell(10.0, &[[2.0, 2.0], [2.0, 8.0], [8.0, 2.0], [8.0, 8.0], [5.0, 5.0]])
}

/// `{0, 1/4, 1/3, 1/2} + Z`.
pub fn s4() -> PeriodicSet {
    PeriodicSet::new(
        Lattice::integer(1).unwrap(),
        &[vec![0.0], vec![0.25], vec![1.0 / 3.0], vec![0.5]],
    )
    .unwrap()
}

// -------------------------------------------------------------- generators

/// Random basis with lengths in `[1, 2]` and no nearly degenerate angles.
pub fn random_lattice(rng: &mut ChaCha8Rng, dim: usize) -> Lattice {
    loop {
        let vectors: Vec<Vec<f64>> = (0..dim)
            .map(|_| (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect())
            .collect();
        let norms: Vec<f64> = vectors.iter().map(|v| v.iter().map(|x| x * x).sum::<f64>().sqrt()).collect();
        if norms.iter().any(|&n| n < 0.3) {
            continue;
        }
        let scaled: Vec<Vec<f64>> = vectors
            .iter()
            .zip(&norms)
            .map(|(v, n)| {
                let len = rng.gen_range(1.0..2.0);
                v.iter().map(|x| x / n * len).collect()
            })
            .collect();
        let lattice = Lattice::from_vectors(&scaled).unwrap();
        let product: f64 = lattice.vectors().iter().map(|v| v.norm()).product();
        if lattice.volume() / product > 0.5 {
            return lattice;
        }
    }
}

/// Random periodic set with `m` motif points kept apart by at least
/// `min_gap` times the shortest basis vector.
pub fn random_set(rng: &mut ChaCha8Rng, dim: usize, m: usize, min_gap: f64) -> PeriodicSet {
    loop {
        let lattice = random_lattice(rng, dim);
        let motif: Vec<Vec<f64>> = (0..m)
            .map(|_| (0..dim).map(|_| rng.gen_range(0.0..1.0)).collect())
            .collect();
        let shortest = lattice.vectors().iter().map(|v| v.norm()).fold(f64::INFINITY, f64::min);
        if let Ok(set) = PeriodicSet::new(lattice, &motif) {
            if set.min_interpoint_distance() >= min_gap * shortest {
                return set;
            }
        }
    }
}

/// Random orthogonal map of `dim` dimensions (a reflection half the time),
/// padded with the identity.
pub fn random_orthogonal(rng: &mut ChaCha8Rng, dim: usize) -> Matrix3<f64> {
    let mut m = match dim {
        1 => Matrix3::identity(),
        2 => *Rotation3::from_axis_angle(&Vector3::z_axis(), rng.gen_range(0.0..std::f64::consts::TAU)).matrix(),
        _ => *Rotation3::from_euler_angles(
            rng.gen_range(-3.2..3.2),
            rng.gen_range(-1.6..1.6),
            rng.gen_range(-3.2..3.2),
        )
        .matrix(),
    };
    if rng.gen_bool(0.5) {
        for r in 0..3 {
            m[(r, 0)] = -m[(r, 0)];
        }
    }
    m
}

pub fn random_shift(rng: &mut ChaCha8Rng, dim: usize) -> Point {
    let mut p = Point::zeros();
    for i in 0..dim {
        p[i] = rng.gen_range(-5.0..5.0);
    }
    p
}

/// Random isometric copy of `set`, with its basis rotated and its motif
/// shifted.
pub fn random_isometric_copy(rng: &mut ChaCha8Rng, set: &PeriodicSet) -> PeriodicSet {
    let map = random_orthogonal(rng, set.dim());
    let shift = random_shift(rng, set.dim());
    set.transformed(&map, &shift).unwrap()
}

/// Random vector of length at most `eps` in `dim` dimensions.
pub fn random_displacement(rng: &mut ChaCha8Rng, dim: usize, eps: f64) -> Point {
    loop {
        let mut p = Point::zeros();
        for i in 0..dim {
            p[i] = rng.gen_range(-1.0..1.0);
        }
        if p.norm() <= 1.0 {
            return p * eps;
        }
    }
}

/// Moves every motif point by at most `eps`, so the bottleneck distance to
/// the original is at most `eps`.
pub fn perturb(rng: &mut ChaCha8Rng, set: &PeriodicSet, eps: f64) -> PeriodicSet {
    let points: Vec<Point> = set
        .cartesian()
        .iter()
        .map(|p| p + random_displacement(rng, set.dim(), eps))
        .collect();
    PeriodicSet::from_cartesian(set.lattice().clone(), &points).unwrap()
}

/// Moves only motif point `index` by exactly `eps` in a random direction.
pub fn perturb_one(rng: &mut ChaCha8Rng, set: &PeriodicSet, index: usize, eps: f64) -> PeriodicSet {
    let mut points = set.cartesian().to_vec();
    let d = loop {
        let v = random_displacement(rng, set.dim(), 1.0);
        if v.norm() > 0.1 {
            break v / v.norm();
        }
    };
    points[index] += d * eps;
    PeriodicSet::from_cartesian(set.lattice().clone(), &points).unwrap()
}

/// Stretches the whole set along the first axis, the generic deformation
/// that is not a translation when the motif has a single point.
pub fn stretch(set: &PeriodicSet, factor: f64) -> PeriodicSet {
    let map = Matrix3::from_diagonal(&Vector3::new(factor, 1.0, 1.0));
    set.transformed(&map, &Point::zeros()).unwrap()
}

// ----------------------------------------------------------------- oracles

/// Every point of the set in the closed ball, by enumerating all lattice
/// coefficients in `[-range, range]^n`.
pub fn brute_force_ball(set: &PeriodicSet, center: &Point, radius: f64, range: i64) -> Vec<Point> {
    let dim = set.dim();
    let basis = set.lattice().vectors();
    let mut out = Vec::new();
    let span = |i: usize| if i < dim { -range..=range } else { 0..=0 };
    for a in span(0) {
        for b in span(1) {
            for c in span(2) {
                let coeffs = [a as f64, b as f64, c as f64];
                let mut t = Point::zeros();
                for (j, v) in basis.iter().enumerate() {
                    t += v * coeffs[j];
                }
                for p in set.cartesian() {
                    let q = p + t;
                    if (q - center).norm() <= radius + 1e-9 {
                        out.push(q);
                    }
                }
            }
        }
    }
    out
}

/// Sorted distances from motif point `index` to all other points within a
/// brute-force window.
pub fn brute_force_neighbours(set: &PeriodicSet, index: usize, radius: f64, range: i64) -> Vec<f64> {
    let center = set.cartesian()[index];
    let mut d: Vec<f64> = brute_force_ball(set, &center, radius, range)
        .iter()
        .map(|q| (q - center).norm())
        .filter(|&d| d > 1e-12)
        .collect();
    d.sort_by(f64::total_cmp);
    d
}

/// Cluster of motif point `index` as vectors from its center.
pub fn brute_force_cluster(set: &PeriodicSet, index: usize, alpha: f64, range: i64) -> Vec<Point> {
    let center = set.cartesian()[index];
    brute_force_ball(set, &center, alpha, range)
        .into_iter()
        .map(|q| q - center)
        .collect()
}

fn directed_boundary_hausdorff_2d(c: &[Point], d: &[Point], alpha: f64, angle: f64, reflect: bool) -> f64 {
    let (s, co) = angle.sin_cos();
    let mut worst: f64 = 0.0;
    for p in c {
        let y = if reflect { -p.y } else { p.y };
        let q = Point::new(co * p.x - s * y, s * p.x + co * y, 0.0);
        // the boundary circle is always available at distance alpha - |p|
        let mut best = alpha - p.norm();
        for t in d {
            best = best.min((q - t).norm());
        }
        worst = worst.max(best);
    }
    worst
}

/// Directed boundary-tolerant distance between planar clusters of radius
/// `alpha`, minimised over a uniform grid of rotations and reflections.
pub fn dense_rotation_directed_2d(c: &[Point], d: &[Point], alpha: f64, step: f64) -> f64 {
    let steps = (std::f64::consts::TAU / step).ceil() as usize;
    let mut best = f64::INFINITY;
    for i in 0..steps {
        let angle = i as f64 * step;
        for reflect in [false, true] {
            best = best.min(directed_boundary_hausdorff_2d(c, d, alpha, angle, reflect));
        }
    }
    best
}

/// Boundary-tolerant cluster distance in the plane, from the definition:
/// both directed rotation-minimised distances with the boundary circles
/// adjoined, maximised.
pub fn dense_rotation_cluster_distance_2d(c: &[Point], d: &[Point], alpha: f64, step: f64) -> f64 {
    dense_rotation_directed_2d(c, d, alpha, step).max(dense_rotation_directed_2d(d, c, alpha, step))
}

/// Rotation-minimised symmetric Hausdorff distance of plain planar point
/// clouds, for comparison with the unbounded rotation-invariant distance.
pub fn dense_rotation_hausdorff_2d(c: &[Point], d: &[Point], step: f64) -> f64 {
    let directed = |a: &[Point], b: &[Point]| {
        dense_rotation_directed_2d(a, b, f64::INFINITY, step)
    };
    directed(c, d).max(directed(d, c))
}

/// Points evenly spaced on the circle of radius `r`.
pub fn circle_samples(r: f64, count: usize) -> Vec<Point> {
    (0..count)
        .map(|i| {
            let t = std::f64::consts::TAU * i as f64 / count as f64;
            Point::new(r * t.cos(), r * t.sin(), 0.0)
        })
        .collect()
}

/// Optimal transportation cost by enumerating every basis of `m + n - 1`
/// cells, solving it exactly in rationals, and keeping the cheapest
/// non-negative solution. Returns the cost and the optimal flows.
pub fn exhaustive_emd(source: &[Weight], sink: &[Weight], cost: &[Vec<f64>]) -> (f64, Vec<Vec<Weight>>) {
    type Q = Ratio<i128>;
    let (m, n) = (source.len(), sink.len());
    let cells: Vec<(usize, usize)> = (0..m).flat_map(|i| (0..n).map(move |j| (i, j))).collect();
    let size = m + n - 1;
    let to_q = |w: &Weight| Q::new(*w.numer() as i128, *w.denom() as i128);
    let mut best: Option<(f64, Vec<Vec<Q>>)> = None;
    let mut chosen = Vec::with_capacity(size);
    fn subsets(start: usize, total: usize, size: usize, chosen: &mut Vec<usize>, visit: &mut dyn FnMut(&[usize])) {
        if chosen.len() == size {
            visit(chosen);
            return;
        }
        for k in start..total {
            if total - k < size - chosen.len() {
                break;
            }
            chosen.push(k);
            subsets(k + 1, total, size, chosen, visit);
            chosen.pop();
        }
    }
    let mut visit = |basis: &[usize]| {
        // peel leaves: a row or column with one unknown cell fixes that cell
        let mut row_left: Vec<Q> = source.iter().map(to_q).collect();
        let mut col_left: Vec<Q> = sink.iter().map(to_q).collect();
        let mut flow: Vec<Vec<Q>> = vec![vec![Q::from_integer(0); n]; m];
        let mut open: Vec<bool> = vec![true; basis.len()];
        let mut remaining = basis.len();
        while remaining > 0 {
            let mut progressed = false;
            for line in 0..m + n {
                let members: Vec<usize> = (0..basis.len())
                    .filter(|&b| open[b] && {
                        let (i, j) = cells[basis[b]];
                        if line < m { i == line } else { j == line - m }
                    })
                    .collect();
                if members.len() != 1 {
                    continue;
                }
                let b = members[0];
                let (i, j) = cells[basis[b]];
                let value = if line < m { row_left[i] } else { col_left[j] };
                flow[i][j] = value;
                row_left[i] -= value;
                col_left[j] -= value;
                open[b] = false;
                remaining -= 1;
                progressed = true;
            }
            if !progressed {
                // the cells contain a cycle, so they are not a basis
                return;
            }
        }
        let zero = Q::from_integer(0);
        if row_left.iter().chain(&col_left).any(|r| *r != zero) {
            return;
        }
        if flow.iter().flatten().any(|f| *f < zero) {
            return;
        }
        let total: f64 = (0..m)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .map(|(i, j)| {
                let f = flow[i][j];
                *f.numer() as f64 / *f.denom() as f64 * cost[i][j]
            })
            .sum();
        if best.as_ref().is_none_or(|(b, _)| total < *b) {
            best = Some((total, flow));
        }
    };
    subsets(0, cells.len(), size, &mut chosen, &mut visit);
    let (total, flow) = best.expect("the transportation polytope is non-empty");
    let flow = flow
        .into_iter()
        .map(|row| row.into_iter().map(|f| Weight::new(*f.numer() as u64, *f.denom() as u64)).collect())
        .collect();
    (total, flow)
}

/// Certifies that a feasible plan is optimal: its residual network (forward
/// arcs everywhere, backward arcs on used cells) has no negative cycle.
pub fn plan_is_optimal(flow: &[Vec<Weight>], cost: &[Vec<f64>], tol: f64) -> bool {
    let (m, n) = (flow.len(), flow[0].len());
    let nodes = m + n;
    let mut arcs: Vec<(usize, usize, f64)> = Vec::new();
    for i in 0..m {
        for j in 0..n {
            arcs.push((i, m + j, cost[i][j]));
            if *flow[i][j].numer() > 0 {
                arcs.push((m + j, i, -cost[i][j]));
            }
        }
    }
    let mut dist = vec![0.0f64; nodes];
    for _ in 0..nodes {
        let mut changed = false;
        for &(a, b, w) in &arcs {
            if dist[a] + w < dist[b] - tol {
                dist[b] = dist[a] + w;
                changed = true;
            }
        }
        if !changed {
            return true;
        }
    }
    false
}

/// Random rational distribution over `len` atoms with denominators up to 12.
pub fn random_distribution(rng: &mut ChaCha8Rng, len: usize) -> Vec<Weight> {
    let denom: u64 = rng.gen_range(len as u64..=12.max(len as u64));
    let mut counts = vec![1u64; len];
    for _ in len as u64..denom {
        counts[rng.gen_range(0..len)] += 1;
    }
    counts.into_iter().map(|c| Weight::new(c, denom)).collect()
}

/// Minimum over all bijections of the largest paired distance.
pub fn exhaustive_bottleneck(a: &[Point], b: &[Point]) -> f64 {
    fn recurse(a: &[Point], b: &[Point], used: &mut Vec<bool>, i: usize, worst: f64, best: &mut f64) {
        if worst >= *best {
            return;
        }
        if i == a.len() {
            *best = worst;
            return;
        }
        for j in 0..b.len() {
            if !used[j] {
                used[j] = true;
                recurse(a, b, used, i + 1, worst.max((a[i] - b[j]).norm()), best);
                used[j] = false;
            }
        }
    }
    let mut best = f64::INFINITY;
    recurse(a, b, &mut vec![false; b.len()], 0, 0.0, &mut best);
    best
}

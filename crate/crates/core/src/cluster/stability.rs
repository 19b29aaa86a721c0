use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::{bridge_length, Cluster};
use crate::congruence::{cluster_symmetry_group, isometry_tolerance, SymmetryOrder};
use crate::congruence::{all_clusters, partition_clusters};
use crate::error::{Error, Result};
use crate::periodic::PeriodicSet;
use crate::GEOMETRY_TOLERANCE;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StableRadiusBound {
    pub beta: f64,
    /// `max{b, d/2}` of the given cell.
    pub reach: f64,
    /// `beta + reach`, a stable radius for any periodic set.
    pub upper_bound: f64,
    /// `2b` for lattices (single-point motifs), where `b` is the longest
    /// basis vector of the given cell.
    pub lattice_bound: Option<f64>,
}

pub fn stable_radius_upper_bound(set: &PeriodicSet) -> StableRadiusBound {
    let geometry = set.geometry();
    let beta = bridge_length(set).beta;
    let reach = geometry.reach();
    StableRadiusBound {
        beta,
        reach,
        upper_bound: beta + reach,
        lattice_bound: (set.len() == 1).then_some(2.0 * geometry.max_edge),
    }
}

/// α-partition together with the symmetry order of every motif point.
#[derive(Debug, Clone, PartialEq, Eq)]
struct State {
    partition: Vec<Vec<usize>>,
    orders: Vec<SymmetryOrder>,
}

/// Evaluates states at any radius up to the radius of the stored clusters,
/// caching by the cluster sizes that determine them.
struct StateOracle {
    clusters: Vec<Cluster>,
    cache: HashMap<Vec<usize>, State>,
}

impl StateOracle {
    fn new(set: &PeriodicSet, max_radius: f64) -> Result<Self> {
        Ok(StateOracle {
            clusters: all_clusters(set, max_radius)?,
            cache: HashMap::new(),
        })
    }

    /// Distinct distances from motif points to other points, starting at zero.
    fn events(&self) -> Vec<f64> {
        let mut radii: Vec<f64> = self
            .clusters
            .iter()
            .flat_map(|c| c.points().iter().map(|p| p.norm()))
            .collect();
        radii.push(0.0);
        radii.sort_by(f64::total_cmp);
        radii.dedup_by(|a, b| (*a - *b).abs() <= GEOMETRY_TOLERANCE);
        radii
    }

    fn state(&mut self, radius: f64) -> State {
        let restricted: Vec<Cluster> = self.clusters.iter().map(|c| c.restrict(radius)).collect();
        let key: Vec<usize> = restricted.iter().map(Cluster::len).collect();
        if let Some(state) = self.cache.get(&key) {
            return state.clone();
        }
        let partition = partition_clusters(&restricted, isometry_tolerance(radius));
        let mut orders = vec![SymmetryOrder::Finite(0); restricted.len()];
        for class in &partition {
            // isometric clusters have conjugate, hence equal-sized, groups
            let order = cluster_symmetry_group(&restricted[class[0]]).order();
            for &i in class {
                orders[i] = order;
            }
        }
        let state = State { partition, orders };
        self.cache.insert(key, state.clone());
        state
    }
}

fn check_radius(alpha: f64) -> Result<()> {
    if !(alpha.is_finite() && alpha >= 0.0) {
        return Err(Error::InvalidRadius(alpha));
    }
    Ok(())
}

/// Whether `alpha` satisfies both stability conditions for the bridge bound
/// `beta`: the α-partition and every symmetry group agree with those at
/// `alpha - beta`.
pub fn is_stable_radius(set: &PeriodicSet, alpha: f64, beta: f64) -> Result<bool> {
    check_radius(alpha)?;
    if alpha < beta {
        return Ok(false);
    }
    let mut oracle = StateOracle::new(set, alpha)?;
    Ok(oracle.state(alpha) == oracle.state((alpha - beta).max(0.0)))
}

/// Minimum stable radius for the exact bridge length.
pub fn min_stable_radius(set: &PeriodicSet) -> Result<f64> {
    let bound = stable_radius_upper_bound(set);
    let (beta, upper) = (bound.beta, bound.upper_bound);
    let mut oracle = StateOracle::new(set, upper)?;
    let events = oracle.events();
    // states only change when α or α - β crosses an event
    let mut candidates: Vec<f64> = events
        .iter()
        .flat_map(|&e| [e, e + beta])
        .chain([beta, upper])
        .filter(|&c| c >= beta - GEOMETRY_TOLERANCE && c <= upper + GEOMETRY_TOLERANCE)
        .collect();
    candidates.sort_by(f64::total_cmp);
    candidates.dedup_by(|a, b| (*a - *b).abs() <= GEOMETRY_TOLERANCE);
    for c in candidates {
        let c = c.max(beta);
        if oracle.state(c) == oracle.state((c - beta).max(0.0)) {
            return Ok(c);
        }
    }
    log::warn!("no candidate below the upper bound was stable");
    Ok(upper)
}

/// One node level of the isotree: the state on `[radius, next radius)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IsotreeLevel {
    pub radius: f64,
    pub partition: Vec<Vec<usize>>,
    pub symmetry_orders: Vec<SymmetryOrder>,
}

/// α-partitions and symmetry orders at every radius where either changes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Isotree {
    pub max_radius: f64,
    pub levels: Vec<IsotreeLevel>,
}

impl Isotree {
    pub fn critical_radii(&self) -> Vec<f64> {
        self.levels.iter().map(|l| l.radius).collect()
    }
}

/// Isotree up to `max_radius`, defaulting to the stable radius upper bound.
pub fn isotree(set: &PeriodicSet, max_radius: Option<f64>) -> Result<Isotree> {
    let max_radius = match max_radius {
        Some(r) => {
            check_radius(r)?;
            r
        }
        None => stable_radius_upper_bound(set).upper_bound,
    };
    let mut oracle = StateOracle::new(set, max_radius)?;
    let mut levels: Vec<IsotreeLevel> = Vec::new();
    for radius in oracle.events() {
        if radius > max_radius + GEOMETRY_TOLERANCE {
            break;
        }
        let state = oracle.state(radius);
        let changed = levels.last().is_none_or(|l| {
            l.partition != state.partition || l.symmetry_orders != state.orders
        });
        if changed {
            levels.push(IsotreeLevel {
                radius,
                partition: state.partition,
                symmetry_orders: state.orders,
            });
        }
    }
    Ok(Isotree { max_radius, levels })
}

use rayon::prelude::*;

use super::isometry_tolerance;
use super::matcher::cluster_isometry;
use crate::cluster::{alpha_cluster, bridge_length, Cluster};
use crate::error::{Error, Result};
use crate::linalg::lex_cmp;
use crate::periodic::PeriodicSet;
use crate::Weight;

/// One isometry class of α-clusters with its weight `k/m`.
#[derive(Debug, Clone, PartialEq)]
pub struct IsometryClass {
    pub representative: Cluster,
    pub weight: Weight,
    pub members: Vec<usize>,
}

/// Weighted distribution of isometry classes of α-clusters.
#[derive(Debug, Clone, PartialEq)]
pub struct Isoset {
    pub dim: usize,
    pub radius: f64,
    pub classes: Vec<IsometryClass>,
}

impl Isoset {
    /// Classes sorted by cardinality, then by their sorted point lists.
    pub fn canonical_classes(&self) -> Vec<&IsometryClass> {
        let mut classes: Vec<&IsometryClass> = self.classes.iter().collect();
        classes.sort_by(|a, b| {
            let (pa, pb) = (a.representative.points(), b.representative.points());
            pa.len().cmp(&pb.len()).then_with(|| {
                let mut sa = pa.to_vec();
                let mut sb = pb.to_vec();
                sa.sort_by(lex_cmp);
                sb.sort_by(lex_cmp);
                sa.iter()
                    .zip(&sb)
                    .map(|(x, y)| lex_cmp(x, y))
                    .find(|o| o.is_ne())
                    .unwrap_or(std::cmp::Ordering::Equal)
            })
        });
        classes
    }

    pub fn total_weight(&self) -> Weight {
        self.classes.iter().map(|c| c.weight).sum()
    }
}

/// Splits clusters into isometry classes, comparing each cluster with the
/// representative (first member) of every existing class. Classes come out
/// ordered by their smallest member.
pub(crate) fn partition_clusters(clusters: &[Cluster], tol: f64) -> Vec<Vec<usize>> {
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for (i, c) in clusters.iter().enumerate() {
        let home = classes.iter().position(|class| {
            cluster_isometry(&clusters[class[0]], c, tol)
                .expect("clusters of one set share a dimension")
                .is_some()
        });
        match home {
            Some(k) => classes[k].push(i),
            None => classes.push(vec![i]),
        }
    }
    classes
}

pub(crate) fn all_clusters(set: &PeriodicSet, alpha: f64) -> Result<Vec<Cluster>> {
    (0..set.len())
        .into_par_iter()
        .map(|i| alpha_cluster(set, i, alpha))
        .collect()
}

/// Partition of motif indices into α-equivalence classes.
pub fn alpha_partition(set: &PeriodicSet, alpha: f64) -> Result<Vec<Vec<usize>>> {
    let clusters = all_clusters(set, alpha)?;
    Ok(partition_clusters(&clusters, isometry_tolerance(alpha)))
}

/// Isoset of a periodic set at radius `alpha`.
pub fn isoset(set: &PeriodicSet, alpha: f64) -> Result<Isoset> {
    let clusters = all_clusters(set, alpha)?;
    let partition = partition_clusters(&clusters, isometry_tolerance(alpha));
    let m = set.len() as u64;
    let classes = partition
        .into_iter()
        .map(|members| IsometryClass {
            representative: clusters[members[0]].clone(),
            weight: Weight::new(members.len() as u64, m),
            members,
        })
        .collect();
    Ok(Isoset {
        dim: set.dim(),
        radius: alpha,
        classes,
    })
}

/// A weight-preserving bijection between the classes of two isosets, as
/// the partner index in `b` of every class of `a`, if one exists.
pub(crate) fn match_classes(a: &Isoset, b: &Isoset) -> Result<Option<Vec<usize>>> {
    if a.dim != b.dim {
        return Err(Error::DimensionMismatch {
            left: a.dim,
            right: b.dim,
        });
    }
    if a.classes.len() != b.classes.len() {
        return Ok(None);
    }
    let tol = isometry_tolerance(a.radius.max(b.radius));
    let mut used = vec![false; b.classes.len()];
    let mut pairing = Vec::with_capacity(a.classes.len());
    for class in &a.classes {
        // classes of one isoset are pairwise non-isometric, so greedy is exact
        let partner = b.classes.iter().enumerate().position(|(j, other)| {
            !used[j]
                && other.weight == class.weight
                && cluster_isometry(&class.representative, &other.representative, tol)
                    .expect("same dimension")
                    .is_some()
        });
        match partner {
            Some(j) => {
                used[j] = true;
                pairing.push(j);
            }
            None => return Ok(None),
        }
    }
    Ok(Some(pairing))
}

/// Whether a weight-preserving bijection between the classes exists.
pub fn isosets_match(a: &Isoset, b: &Isoset) -> Result<bool> {
    Ok(match_classes(a, b)?.is_some())
}

/// Radius at which the isosets of both sets are complete: the larger bridge
/// length plus the larger cell reach.
pub fn common_stable_radius(s: &PeriodicSet, q: &PeriodicSet) -> f64 {
    let beta = bridge_length(s).beta.max(bridge_length(q).beta);
    beta + s.geometry().reach().max(q.geometry().reach())
}

/// Decides whether two periodic sets are isometric by comparing their
/// isosets at a common stable radius.
pub fn isometric(s: &PeriodicSet, q: &PeriodicSet) -> Result<bool> {
    check_dims(s, q)?;
    isometric_at(s, q, common_stable_radius(s, q))
}

/// Compares isosets at a caller-chosen radius.
pub fn isometric_at(s: &PeriodicSet, q: &PeriodicSet, alpha: f64) -> Result<bool> {
    check_dims(s, q)?;
    isosets_match(&isoset(s, alpha)?, &isoset(q, alpha)?)
}

pub(crate) fn check_dims(s: &PeriodicSet, q: &PeriodicSet) -> Result<()> {
    if s.dim() != q.dim() {
        return Err(Error::DimensionMismatch {
            left: s.dim(),
            right: q.dim(),
        });
    }
    Ok(())
}

//! Staged all-pairs comparison of a collection of crystals: a cheap AMD
//! filter, a PDD refinement, and an isoset comparison for the survivors.

use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::io::{crystal_files, read_crystal};
use crate::metrics::isoset_distance;
use crate::pdd::{amd_distance, pdd, pdd_distance, Pdd};
use crate::periodic::PeriodicSet;

/// Thresholds and parameters of a scan.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanOptions {
    pub k: usize,
    /// Pairs with AMD `L∞` distance at or above this are distinct.
    pub amd_threshold: f64,
    /// Pairs with PDD EMD at or above this are distinct.
    pub pdd_threshold: f64,
    /// Isoset EMD at or below this counts as isometric.
    pub isometry_threshold: f64,
    pub delta: f64,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions {
            k: 12,
            amd_threshold: 0.01,
            pdd_threshold: 0.01,
            isometry_threshold: 1e-6,
            delta: 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Distinct,
    NearDuplicate,
    Isometric,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanPair {
    pub id_a: String,
    pub id_b: String,
    pub amd_linf: f64,
    /// Present when the pair passed the AMD filter.
    pub pdd_emd: Option<f64>,
    /// Present when the pair passed both filters.
    pub isoset_emd: Option<f64>,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanReport {
    pub options: ScanOptions,
    pub ids: Vec<String>,
    /// All pairs `(i, j)` with `i < j`, in row-major order of the ids.
    pub pairs: Vec<ScanPair>,
}

impl ScanReport {
    pub fn flagged(&self) -> impl Iterator<Item = &ScanPair> {
        self.pairs.iter().filter(|p| p.verdict != Verdict::Distinct)
    }
}

fn compare(a: (&PeriodicSet, &Pdd, &[f64]), b: (&PeriodicSet, &Pdd, &[f64]), options: &ScanOptions) -> Result<(f64, Option<f64>, Option<f64>, Verdict)> {
    let amd_linf = amd_distance(a.2, b.2)?;
    if amd_linf >= options.amd_threshold {
        return Ok((amd_linf, None, None, Verdict::Distinct));
    }
    let pdd_emd = pdd_distance(a.1, b.1)?;
    if pdd_emd >= options.pdd_threshold || a.0.dim() != b.0.dim() {
        return Ok((amd_linf, Some(pdd_emd), None, Verdict::Distinct));
    }
    let iso = isoset_distance(a.0, b.0, options.delta)?.value;
    let verdict = if iso <= options.isometry_threshold {
        Verdict::Isometric
    } else {
        Verdict::NearDuplicate
    };
    Ok((amd_linf, Some(pdd_emd), Some(iso), verdict))
}

/// Compares every pair of named sets. The report lists pairs in canonical
/// order whatever order the parallel jobs finish in.
pub fn scan(entries: &[(String, PeriodicSet)], options: &ScanOptions) -> Result<ScanReport> {
    let pdds: Vec<Pdd> = entries
        .par_iter()
        .map(|(_, set)| pdd(set, options.k))
        .collect::<Result<_>>()?;
    let amds: Vec<Vec<f64>> = pdds.iter().map(Pdd::amd).collect();
    let jobs: Vec<(usize, usize)> = (0..entries.len())
        .flat_map(|i| (i + 1..entries.len()).map(move |j| (i, j)))
        .collect();
    let pairs = jobs
        .par_iter()
        .map(|&(i, j)| {
            let (amd_linf, pdd_emd, isoset_emd, verdict) = compare(
                (&entries[i].1, &pdds[i], &amds[i]),
                (&entries[j].1, &pdds[j], &amds[j]),
                options,
            )?;
            Ok(ScanPair {
                id_a: entries[i].0.clone(),
                id_b: entries[j].0.clone(),
                amd_linf,
                pdd_emd,
                isoset_emd,
                verdict,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ScanReport {
        options: *options,
        ids: entries.iter().map(|(id, _)| id.clone()).collect(),
        pairs,
    })
}

/// Scans every `.json` and `.cif` file of a directory, in path order.
/// Warnings raised while reading the files are returned alongside.
pub fn scan_dir(dir: &Path, options: &ScanOptions) -> Result<(ScanReport, Vec<String>)> {
    let mut entries = Vec::new();
    let mut warnings = Vec::new();
    for path in crystal_files(dir)? {
        let crystal = read_crystal(&path)?;
        warnings.extend(crystal.warnings);
        entries.push((crystal.id, crystal.set));
    }
    Ok((scan(&entries, options)?, warnings))
}

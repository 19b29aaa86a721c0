//! Crystal file ingestion (a versioned JSON schema and a small CIF subset)
//! and serializable summaries of computed invariants.

mod cif;
mod report;

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::periodic::{Lattice, PeriodicSet};

pub use cif::parse_cif;
pub use report::{ClassSummary, IsosetSummary};

/// Schema tag written into every crystal document.
pub const CRYSTAL_SCHEMA: &str = "isoset-crystal/1";

/// Unit cell either by its lengths and angles (degrees) or by explicit basis
/// vectors, one per row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Cell {
    Parameters(CellParameters),
    Basis(Vec<Vec<f64>>),
}

/// Crystallographic cell parameters. A 1D cell needs `a`; a 2D cell needs
/// `a`, `b` and `gamma`; a 3D cell needs all six.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CellParameters {
    pub a: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
}

/// A crystal as stored on disk: a cell plus fractional motif coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CrystalDocument {
    pub schema: String,
    pub id: String,
    pub cell: Cell,
    pub motif: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

/// A validated crystal with any warnings raised while building it.
#[derive(Debug, Clone)]
pub struct Crystal {
    pub id: String,
    pub set: PeriodicSet,
    pub warnings: Vec<String>,
}

fn check_length(name: &str, value: f64) -> Result<f64> {
    if !(value.is_finite() && value > 0.0) {
        return Err(Error::InvalidCell(format!("length {name} = {value} must be positive")));
    }
    Ok(value)
}

fn check_angle(name: &str, degrees: f64) -> Result<f64> {
    if !(degrees.is_finite() && degrees > 0.0 && degrees < 180.0) {
        return Err(Error::InvalidCell(format!(
            "angle {name} = {degrees} must lie strictly between 0 and 180 degrees"
        )));
    }
    Ok(degrees.to_radians())
}

fn required(name: &str, value: Option<f64>) -> Result<f64> {
    value.ok_or_else(|| Error::InvalidCell(format!("missing cell parameter {name}")))
}

impl CellParameters {
    /// Basis vectors with `a` along x and `b` in the xy-plane.
    pub fn to_basis(&self, dim: usize) -> Result<Vec<Vec<f64>>> {
        let a = check_length("a", self.a)?;
        match dim {
            1 => Ok(vec![vec![a]]),
            2 => {
                let b = check_length("b", required("b", self.b)?)?;
                let gamma = check_angle("gamma", required("gamma", self.gamma)?)?;
                Ok(vec![vec![a, 0.0], vec![b * gamma.cos(), b * gamma.sin()]])
            }
            3 => {
                let b = check_length("b", required("b", self.b)?)?;
                let c = check_length("c", required("c", self.c)?)?;
                let alpha = check_angle("alpha", required("alpha", self.alpha)?)?;
                let beta = check_angle("beta", required("beta", self.beta)?)?;
                let gamma = check_angle("gamma", required("gamma", self.gamma)?)?;
                let cx = c * beta.cos();
                let cy = c * (alpha.cos() - beta.cos() * gamma.cos()) / gamma.sin();
                let cz2 = c * c - cx * cx - cy * cy;
                if cz2 <= 0.0 {
                    return Err(Error::InvalidCell(
                        "cell angles do not describe a cell of positive volume".into(),
                    ));
                }
                Ok(vec![
                    vec![a, 0.0, 0.0],
                    vec![b * gamma.cos(), b * gamma.sin(), 0.0],
                    vec![cx, cy, cz2.sqrt()],
                ])
            }
            _ => Err(Error::InvalidCell(format!("unsupported dimension {dim}"))),
        }
    }
}

impl CrystalDocument {
    /// Document describing `set` by its basis vectors and reduced motif.
    pub fn from_periodic_set(id: impl Into<String>, set: &PeriodicSet) -> Self {
        CrystalDocument {
            schema: CRYSTAL_SCHEMA.into(),
            id: id.into(),
            cell: Cell::Basis(set.lattice().to_rows()),
            motif: set.fractional_rows(),
            labels: set.labels().map(<[String]>::to_vec),
        }
    }

    /// Validates the document and builds the periodic set. Coordinates
    /// outside `[0, 1)` are reduced, with one warning per affected point.
    pub fn to_crystal(&self) -> Result<Crystal> {
        if self.schema != CRYSTAL_SCHEMA {
            return Err(Error::parse(
                "schema",
                format!("unsupported schema {:?}, expected {CRYSTAL_SCHEMA:?}", self.schema),
            ));
        }
        let dim = self.motif.first().map(Vec::len).ok_or_else(|| Error::parse("motif", "motif is empty"))?;
        let basis = match &self.cell {
            Cell::Parameters(p) => p.to_basis(dim)?,
            Cell::Basis(rows) => rows.clone(),
        };
        let lattice = Lattice::from_vectors(&basis).map_err(|e| match e {
            Error::InvalidLattice(msg) => Error::InvalidCell(msg),
            other => other,
        })?;
        let mut warnings = Vec::new();
        for (i, p) in self.motif.iter().enumerate() {
            if p.iter().any(|x| !(0.0..1.0).contains(x)) {
                warnings.push(format!(
                    "{}: motif point {i} {p:?} lies outside [0, 1) and was reduced modulo 1",
                    self.id
                ));
            }
        }
        let mut set = PeriodicSet::new(lattice, &self.motif)?;
        if let Some(labels) = &self.labels {
            set = set.with_labels(labels.clone())?;
        }
        Ok(Crystal {
            id: self.id.clone(),
            set,
            warnings,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents always serialize")
    }
}

/// Parses a crystal document in the JSON schema.
pub fn parse_json(text: &str) -> Result<CrystalDocument> {
    serde_json::from_str(text).map_err(|e| {
        Error::parse(format!("line {}, column {}", e.line(), e.column()), e.to_string())
    })
}

/// Reads a `.json` or `.cif` crystal file. The file stem is used as the id of
/// CIF files without a data block name.
pub fn read_crystal(path: &Path) -> Result<Crystal> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let ext = path.extension().and_then(|e| e.to_str()).map(str::to_ascii_lowercase);
    let doc = match ext.as_deref() {
        Some("json") => parse_json(&text),
        Some("cif") => {
            let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("crystal");
            parse_cif(&text, stem)
        }
        _ => Err(Error::parse(
            path.display().to_string(),
            "unknown file extension, expected .json or .cif",
        )),
    };
    let located = |e: Error| match e {
        Error::Parse { location, message } => Error::Parse {
            location: format!("{}: {location}", path.display()),
            message,
        },
        Error::InvalidCell(msg) => Error::InvalidCell(format!("{}: {msg}", path.display())),
        Error::InvalidMotif(msg) => Error::InvalidMotif(format!("{}: {msg}", path.display())),
        other => other,
    };
    doc.and_then(|d| d.to_crystal()).map_err(located)
}

/// Crystal files of a directory with a `.json` or `.cif` extension, sorted by
/// path.
pub fn crystal_files(dir: &Path) -> Result<Vec<std::path::PathBuf>> {
    let mut files = Vec::new();
    for entry in std::fs::read_dir(dir).map_err(|e| Error::Io(format!("{}: {e}", dir.display())))? {
        let path = entry?.path();
        let ext = path.extension().and_then(|e| e.to_str()).map(str::to_ascii_lowercase);
        if path.is_file() && matches!(ext.as_deref(), Some("json" | "cif")) {
            files.push(path);
        }
    }
    files.sort();
    Ok(files)
}

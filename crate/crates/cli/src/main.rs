use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use isoset::cluster::{bridge_length, isotree, min_stable_radius, stable_radius_upper_bound};
use isoset::congruence::isoset;
use isoset::io::{read_crystal, IsosetSummary};
use isoset::metrics::{isoset_distance, scaled_invariant_distance};
use isoset::pdd::{amd_distance, pdd, pdd_distance};
use isoset::scan::{scan_dir, ScanOptions};
use isoset::PeriodicSet;

#[derive(Parser)]
#[command(name = "isoset", version, about = "Isometry invariants and distances for periodic crystals")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print AMD, PDD and the isoset of one crystal.
    Invariant {
        file: PathBuf,
        /// Number of neighbours in AMD and PDD rows.
        #[arg(long, default_value_t = 12)]
        k: usize,
        /// Isoset radius, or `auto` for the minimum stable radius.
        #[arg(long, default_value = "auto")]
        alpha: Alpha,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Print one distance between two crystals.
    Dist {
        file_a: PathBuf,
        file_b: PathBuf,
        #[arg(long, value_enum, default_value_t = Metric::Isoset)]
        metric: Metric,
        /// Relative slack of the rotation search, widening the reported factor.
        #[arg(long, default_value_t = 0.0)]
        delta: f64,
        #[arg(long, default_value_t = 12)]
        k: usize,
    },
    /// Compare all crystals of a directory in stages.
    Scan {
        dir: PathBuf,
        #[arg(long, default_value_t = 0.01)]
        amd_threshold: f64,
        #[arg(long, default_value_t = 0.01)]
        pdd_threshold: f64,
        #[arg(long, default_value_t = 12)]
        k: usize,
        #[arg(long, default_value_t = 0.0)]
        delta: f64,
    },
    /// Print the isotree of α-partitions as JSON.
    Isotree {
        file: PathBuf,
        /// Largest radius; defaults to the stable radius upper bound.
        #[arg(long)]
        max_radius: Option<f64>,
    },
}

#[derive(Clone, Copy)]
enum Alpha {
    Auto,
    Value(f64),
}

impl FromStr for Alpha {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "auto" {
            return Ok(Alpha::Auto);
        }
        match s.parse::<f64>() {
            Ok(v) if v.is_finite() && v >= 0.0 => Ok(Alpha::Value(v)),
            _ => Err(format!("expected `auto` or a non-negative number, found {s:?}")),
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum Metric {
    Amd,
    Pdd,
    Isoset,
    Scaled,
}

fn load(path: &Path) -> Result<(String, PeriodicSet)> {
    let crystal = read_crystal(path).with_context(|| format!("cannot read {}", path.display()))?;
    for w in &crystal.warnings {
        log::warn!("{w}");
    }
    Ok((crystal.id, crystal.set))
}

fn print_json(value: &impl serde::Serialize) -> Result<()> {
    let mut out = std::io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    Ok(())
}

fn invariant(file: &Path, k: usize, alpha: Alpha, format: Format) -> Result<()> {
    let (id, set) = load(file)?;
    let matrix = pdd(&set, k)?;
    if let Format::Csv = format {
        matrix.write_csv(std::io::stdout().lock())?;
        return Ok(());
    }
    let bound = stable_radius_upper_bound(&set);
    let radius = match alpha {
        Alpha::Auto => min_stable_radius(&set)?,
        Alpha::Value(v) => v,
    };
    let iso = isoset(&set, radius)?;
    print_json(&json!({
        "id": id,
        "dim": set.dim(),
        "motif_size": set.len(),
        "k": k,
        "amd": matrix.amd(),
        "pdd": matrix,
        "bridge_length": bridge_length(&set).beta,
        "stable_radius_upper_bound": bound.upper_bound,
        "radius": radius,
        "isoset": IsosetSummary::from(&iso),
    }))
}

fn dist(file_a: &Path, file_b: &Path, metric: Metric, delta: f64, k: usize) -> Result<()> {
    let (id_a, a) = load(file_a)?;
    let (id_b, b) = load(file_b)?;
    let report = match metric {
        Metric::Amd => {
            let value = amd_distance(&pdd(&a, k)?.amd(), &pdd(&b, k)?.amd())?;
            json!({"metric": "amd", "k": k, "value": value})
        }
        Metric::Pdd => {
            let value = pdd_distance(&pdd(&a, k)?, &pdd(&b, k)?)?;
            json!({"metric": "pdd", "k": k, "value": value})
        }
        Metric::Isoset => {
            let d = isoset_distance(&a, &b, delta)?;
            json!({"metric": "isoset", "value": d.value, "factor": d.factor, "radius": d.radius, "plan": d.plan})
        }
        Metric::Scaled => {
            let d = scaled_invariant_distance(&a, &b, delta)?;
            json!({"metric": "scaled", "value": d.value, "factor": d.factor, "scale_a": d.scale_s, "scale_b": d.scale_q, "emd": d.emd})
        }
    };
    let mut report = report;
    report["a"] = json!(id_a);
    report["b"] = json!(id_b);
    print_json(&report)
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Invariant { file, k, alpha, format } => invariant(&file, k, alpha, format),
        Command::Dist {
            file_a,
            file_b,
            metric,
            delta,
            k,
        } => dist(&file_a, &file_b, metric, delta, k),
        Command::Scan {
            dir,
            amd_threshold,
            pdd_threshold,
            k,
            delta,
        } => {
            let options = ScanOptions {
                k,
                amd_threshold,
                pdd_threshold,
                delta,
                ..ScanOptions::default()
            };
            let (report, warnings) = scan_dir(&dir, &options).with_context(|| format!("cannot scan {}", dir.display()))?;
            for w in &warnings {
                log::warn!("{w}");
            }
            print_json(&report)
        }
        Command::Isotree { file, max_radius } => {
            let (_, set) = load(&file)?;
            print_json(&isotree(&set, max_radius)?)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    // clap exits with status 2 on invalid flags
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}

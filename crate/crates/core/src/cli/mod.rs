//! Config-driven experiment runner behind the `sgs` binary.
//!
//! Each run writes `<stem>.csv` (plus any auxiliary tables as `<stem><suffix>.csv`) and a
//! `<stem>.meta.toml` sidecar holding the config hash, seed and library version.

pub mod config;
pub mod experiments;

pub use config::ExperimentConfig;
pub use experiments::Table;

use crate::error::{Error, Result};
use clap::Parser;
use serde::Serialize;
use sha2::{Digest, Sha256};
use std::path::{Path, PathBuf};

#[derive(Debug, Parser)]
#[command(name = "sgs", version, about = "Sampling and reconstruction experiments")]
pub struct Args {
    /// Experiment name, or `list` for the catalogue.
    pub experiment: String,
    /// TOML configuration file.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output directory (overrides `output.dir`).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Seed (overrides `seeds.seed`).
    #[arg(long)]
    pub seed: Option<u64>,
    /// Worker threads for the parallel parts.
    #[arg(long)]
    pub jobs: Option<usize>,
}

/// `(name, required keys, what it reproduces)`.
pub const CATALOGUE: &[(&str, &str, &str)] = &[
    (
        "gs",
        "systems.sampling, systems.reconstruction, sizes.n, sizes.m",
        "generalized sampling against the truncated sampling expansion for a known function",
    ),
    (
        "ssr",
        "systems.sampling, systems.reconstruction, sizes.m",
        "stable sampling rate: linear for Fourier-wavelet, quadratic for Fourier-polynomial",
    ),
    (
        "consistent-fail",
        "systems.sampling, systems.reconstruction, sizes.n",
        "exponential ill-conditioning of consistent reconstruction, Fourier-polynomial example",
    ),
    (
        "invreg-volterra",
        "sizes.m, sizes.n, sizes.r",
        "integration-operator example: uneven sections against Tikhonov filtering",
    ),
    (
        "coherence",
        "systems.sampling, systems.reconstruction, sizes.n",
        "asymptotic incoherence of tail rows and columns",
    ),
    (
        "cs-recover",
        "systems.*, sizes.levels, sizes.counts, sizes.sparsity_levels, sizes.sparsity",
        "two-level Fourier-Haar recovery against uniform subsampling with the same budget",
    ),
    (
        "cs-flip",
        "systems.* (Haar on [0, 1]), sizes.k, sizes.levels, sizes.counts",
        "flip test: asymptotic sparsity structure matters for multilevel sampling",
    ),
    (
        "theorem-check",
        "systems.*, sizes.levels, sizes.counts, sizes.sparsity_levels, sizes.sparsity",
        "local coherences, relative sparsity bounds, balancing and per-level sufficiency",
    ),
];

pub fn list_experiments() -> String {
    let mut s = String::new();
    for (name, keys, what) in CATALOGUE {
        s.push_str(&format!("{name} → {what}\n    requires: {keys}\n"));
    }
    s
}

#[derive(Serialize)]
struct Meta<'a> {
    experiment: &'a str,
    seed: u64,
    config_sha256: String,
    version: &'a str,
    files: Vec<String>,
}

fn write_table(path: &Path, t: &Table) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| Error::Io(e.to_string()))?;
    w.write_record(&t.header).map_err(|e| Error::Io(e.to_string()))?;
    for row in &t.rows {
        w.write_record(row).map_err(|e| Error::Io(e.to_string()))?;
    }
    w.flush()?;
    Ok(())
}

/// Run an experiment from a parsed config; returns the files written.
pub fn run_config(
    experiment: &str,
    cfg: &ExperimentConfig,
    config_bytes: &[u8],
    seed: Option<u64>,
    out: Option<&Path>,
) -> Result<Vec<PathBuf>> {
    if let Some(e) = &cfg.experiment {
        if e != experiment {
            return Err(Error::InvalidArgument(format!(
                "config is for {e:?} but {experiment:?} was requested"
            )));
        }
    }
    let seed = seed.or(cfg.seeds.seed).unwrap_or(0);
    let tables = match experiment {
        "gs" => experiments::run_gs(cfg)?,
        "ssr" => experiments::run_ssr(cfg)?,
        "consistent-fail" => experiments::run_consistent_fail(cfg)?,
        "invreg-volterra" => experiments::run_invreg_volterra(cfg, seed)?,
        "coherence" => experiments::run_coherence(cfg)?,
        "cs-recover" => experiments::run_cs_recover(cfg, seed)?,
        "cs-flip" => experiments::run_cs_flip(cfg, seed)?,
        "theorem-check" => experiments::run_theorem_check(cfg)?,
        other => {
            return Err(Error::InvalidArgument(format!(
                "unknown experiment {other:?}; run `sgs list`"
            )))
        }
    };
    let dir = out
        .map(Path::to_path_buf)
        .or_else(|| cfg.output.dir.as_ref().map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."));
    std::fs::create_dir_all(&dir)?;
    let stem = cfg.output.stem.clone().unwrap_or_else(|| experiment.to_string());
    let mut files = Vec::new();
    for t in &tables {
        let path = dir.join(format!("{stem}{}.csv", t.suffix));
        write_table(&path, t)?;
        files.push(path);
    }
    let meta = Meta {
        experiment,
        seed,
        config_sha256: hex::encode(Sha256::digest(config_bytes)),
        version: env!("CARGO_PKG_VERSION"),
        files: files
            .iter()
            .map(|p| p.file_name().unwrap().to_string_lossy().into_owned())
            .collect(),
    };
    let meta_path = dir.join(format!("{stem}.meta.toml"));
    let text = toml::to_string(&meta).map_err(|e| Error::Format(e.to_string()))?;
    std::fs::write(&meta_path, text)?;
    files.push(meta_path);
    log::info!("{experiment}: wrote {} files to {}", files.len(), dir.display());
    Ok(files)
}

/// Entry point shared by the binary and tests.
pub fn run(args: &Args) -> Result<Vec<PathBuf>> {
    #[cfg(feature = "parallel")]
    if let Some(j) = args.jobs {
        // Only the first call in a process can size the global pool.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(j.max(1)).build_global();
    }
    let path = args.config.as_ref().ok_or_else(|| {
        Error::InvalidArgument(format!("{} needs --config <path>", args.experiment))
    })?;
    let bytes = std::fs::read(path)
        .map_err(|e| Error::Io(format!("reading {}: {e}", path.display())))?;
    let text = std::str::from_utf8(&bytes).map_err(|e| Error::Format(e.to_string()))?;
    let cfg = ExperimentConfig::parse(text)?;
    run_config(&args.experiment, &cfg, &bytes, args.seed, args.out.as_deref())
}

/// Whether an error stems from bad input rather than a failed computation.
pub fn is_usage_error(e: &Error) -> bool {
    matches!(e, Error::InvalidArgument(_) | Error::DimensionMismatch { .. })
}

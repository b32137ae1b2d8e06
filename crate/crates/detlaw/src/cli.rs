//! Command-line front end: samplers, law comparisons, and limit-theorem
//! experiments with reproducible seeds and CSV/JSON outputs.
//!
//! Outputs are deterministic given the full command line; the wall-time
//! field in JSON metadata is the single exception. Worker count is a flag,
//! but per-sample RNG substreams make results identical across worker
//! counts anyway.

use crate::harness::{
    self, Comparison, ComparisonKind, ScalarSampler, VarianceScalingConfig,
};
use crate::product;
use crate::rng::RngStream;
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Harness(#[from] harness::HarnessError),
    #[error(transparent)]
    Product(#[from] product::ProductError),
    #[error("`{command}` writes {required} only; pass --format {required} or drop the flag")]
    WrongFormat {
        command: &'static str,
        required: &'static str,
    },
    #[error("bad t-grid entry `{0}`: expected comma-separated reals")]
    BadGrid(String),
    #[error("could not build a {workers}-worker pool: {reason}")]
    Pool { workers: usize, reason: String },
    #[error("serialization failed: {0}")]
    Serialize(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl OutputFormat {
    fn name(self) -> &'static str {
        match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "detlaw",
    version,
    about = "Samplers and statistical checks for characteristic-polynomial laws of random unitary and phased-permutation matrices"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

// Default sizes keep every command under a minute on one core.
#[derive(Debug, Subcommand)]
pub enum Command {
    /// Draw scalar samples and write CSV rows `index,re,im`
    Sample {
        /// Sampler id: unitary-ginibre-det, unitary-recursive-det,
        /// unitary-product, permutation-det, permutation-product,
        /// verblunsky-product
        sampler: String,
        #[arg(long, default_value_t = 8)]
        n: usize,
        #[arg(long, default_value_t = 1000)]
        count: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Worker threads (0 = library default); results do not depend on it
        #[arg(long, default_value_t = 0)]
        workers: usize,
        /// Output path (stdout when omitted)
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
        format: OutputFormat,
    },
    /// Run a named two-sample law comparison and write its JSON report
    Compare {
        /// Descriptor id: thm12, cor11, cor12, atj, remark-product,
        /// first-column
        descriptor: String,
        #[arg(long, default_value_t = 8)]
        n: usize,
        /// Samples per side
        #[arg(long, default_value_t = 10_000)]
        count: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Significance level for every KS functional
        #[arg(long, default_value_t = 1e-3)]
        level: f64,
        #[arg(long, default_value_t = 0)]
        workers: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
        format: OutputFormat,
    },
    /// Empirical vs exact cycle-count law (JSON report)
    Cycles {
        #[arg(long, default_value_t = 6)]
        n: usize,
        #[arg(long, default_value_t = 100_000)]
        count: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 0)]
        workers: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
        format: OutputFormat,
    },
    /// Variance growth of Re/Im log Z between two sizes plus a normality
    /// check (JSON report)
    Clt {
        /// Larger model size
        #[arg(long, default_value_t = 10_000)]
        n: usize,
        #[arg(long = "n-small", default_value_t = 100)]
        n_small: usize,
        /// Paths per size
        #[arg(long, default_value_t = 20_000)]
        count: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 1e-3)]
        level: f64,
        #[arg(long, default_value_t = 0)]
        workers: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
        format: OutputFormat,
    },
    /// Sample log partial-sum paths on a t-grid, long-format CSV rows
    /// `path,t,re,im`
    Process {
        #[arg(long, default_value_t = 1000)]
        n: usize,
        /// Number of paths
        #[arg(long, default_value_t = 100)]
        count: usize,
        /// Comma-separated times in [0,1), strictly increasing
        #[arg(long, default_value = "0.1,0.25,0.5,0.75,0.9")]
        tgrid: String,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 0)]
        workers: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
        format: OutputFormat,
    },
    /// Time the matrix route against the product route at one size (JSON)
    Bench {
        #[arg(long, default_value_t = 512)]
        n: usize,
        /// Product-sampler draws; the matrix route gets count/2000 draws,
        /// clamped to [3, 50]
        #[arg(long, default_value_t = 10_000)]
        count: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 0)]
        workers: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
        format: OutputFormat,
    },
}

/// Normalized run record embedded in every JSON output for audit.
#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct RunConfig {
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sampler: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub descriptor: Option<String>,
    pub n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_small: Option<usize>,
    pub count: usize,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub level: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_grid: Option<Vec<f64>>,
    pub workers: usize,
    pub format: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<String>,
}

impl RunConfig {
    #[allow(clippy::too_many_arguments)]
    fn new(
        command: &str,
        n: usize,
        count: usize,
        seed: u64,
        workers: usize,
        format: OutputFormat,
        out: &Option<PathBuf>,
    ) -> Self {
        RunConfig {
            command: command.to_string(),
            sampler: None,
            descriptor: None,
            n,
            n_small: None,
            count,
            seed,
            level: None,
            t_grid: None,
            workers,
            format: format.name().to_string(),
            out: out.as_ref().map(|p| p.display().to_string()),
        }
    }
}

#[derive(Debug, Serialize)]
struct BenchReport {
    config: RunConfig,
    timings: harness::BenchTimings,
}

fn require_format(
    got: OutputFormat,
    required: OutputFormat,
    command: &'static str,
) -> Result<(), CliError> {
    if got == required {
        Ok(())
    } else {
        Err(CliError::WrongFormat {
            command,
            required: required.name(),
        })
    }
}

fn parse_grid(raw: &str) -> Result<Vec<f64>, CliError> {
    raw.split(',')
        .map(|piece| {
            piece
                .trim()
                .parse::<f64>()
                .map_err(|_| CliError::BadGrid(piece.trim().to_string()))
        })
        .collect()
}

fn with_pool<T: Send>(
    workers: usize,
    f: impl FnOnce() -> Result<T, CliError> + Send,
) -> Result<T, CliError> {
    if workers == 0 {
        return f();
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| CliError::Pool {
            workers,
            reason: e.to_string(),
        })?;
    pool.install(f)
}

fn emit(out: &Option<PathBuf>, content: &str) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, content)?,
        None => std::io::stdout().write_all(content.as_bytes())?,
    }
    Ok(())
}

fn report_json(
    mut report: harness::TestReport,
    config: RunConfig,
) -> Result<String, CliError> {
    report.metadata.config = Some(serde_json::to_value(&config)?);
    Ok(serde_json::to_string_pretty(&report)? + "\n")
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Sample {
            sampler,
            n,
            count,
            seed,
            workers,
            out,
            format,
        } => {
            require_format(format, OutputFormat::Csv, "sample")?;
            let which = ScalarSampler::from_id(&sampler)?;
            let batch = with_pool(workers, || Ok(harness::gen_batch(which, n, count, seed)?))?;
            let mut csv = String::from("index,re,im\n");
            for (i, z) in batch.values.iter().enumerate() {
                writeln!(csv, "{i},{},{}", z.re, z.im).expect("string write");
            }
            emit(&out, &csv)
        }
        Command::Compare {
            descriptor,
            n,
            count,
            seed,
            level,
            workers,
            out,
            format,
        } => {
            require_format(format, OutputFormat::Json, "compare")?;
            let kind = ComparisonKind::from_id(&descriptor)?;
            let cmp = Comparison::new(kind, n, count, seed, level);
            let report = with_pool(workers, || Ok(harness::compare_laws(&cmp)?))?;
            let mut config = RunConfig::new("compare", n, count, seed, workers, format, &out);
            config.descriptor = Some(descriptor);
            config.level = Some(level);
            emit(&out, &report_json(report, config)?)
        }
        Command::Cycles {
            n,
            count,
            seed,
            workers,
            out,
            format,
        } => {
            require_format(format, OutputFormat::Json, "cycles")?;
            let report = with_pool(workers, || Ok(harness::cycle_law_report(n, count, seed)?))?;
            let config = RunConfig::new("cycles", n, count, seed, workers, format, &out);
            emit(&out, &report_json(report, config)?)
        }
        Command::Clt {
            n,
            n_small,
            count,
            seed,
            level,
            workers,
            out,
            format,
        } => {
            require_format(format, OutputFormat::Json, "clt")?;
            let cfg = VarianceScalingConfig {
                n_small,
                n_large: n,
                paths: count,
                seed,
                level,
            };
            let report = with_pool(workers, || Ok(harness::variance_scaling_report(&cfg)?))?;
            let mut config = RunConfig::new("clt", n, count, seed, workers, format, &out);
            config.n_small = Some(n_small);
            config.level = Some(level);
            emit(&out, &report_json(report, config)?)
        }
        Command::Process {
            n,
            count,
            tgrid,
            seed,
            workers,
            out,
            format,
        } => {
            require_format(format, OutputFormat::Csv, "process")?;
            let grid = parse_grid(&tgrid)?;
            let paths = with_pool(workers, || {
                let base = RngStream::new(seed);
                if count == 0 {
                    return Err(harness::HarnessError::EmptyBatch.into());
                }
                let mut paths = Vec::with_capacity(count);
                for p in 0..count {
                    let mut rng = base.substream(p as u64);
                    paths.push(product::sample_log_process(n, &grid, &mut rng)?);
                }
                Ok(paths)
            })?;
            let mut csv = String::from("path,t,re,im\n");
            for (p, path) in paths.iter().enumerate() {
                for (t, z) in path.t_grid.iter().zip(&path.values) {
                    writeln!(csv, "{p},{t},{},{}", z.re, z.im).expect("string write");
                }
            }
            emit(&out, &csv)
        }
        Command::Bench {
            n,
            count,
            seed,
            workers,
            out,
            format,
        } => {
            require_format(format, OutputFormat::Json, "bench")?;
            let matrix_samples = (count / 2000).clamp(3, 50);
            let timings =
                with_pool(workers, || Ok(harness::bench_timings(n, matrix_samples, count, seed)?))?;
            let config = RunConfig::new("bench", n, count, seed, workers, format, &out);
            let json = serde_json::to_string_pretty(&BenchReport { config, timings })? + "\n";
            emit(&out, &json)
        }
    }
}

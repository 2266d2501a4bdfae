//! Experiment harness around the `ordsketch` crate.
//!
//! Two run families, both driven by one declarative TOML plan and written
//! as CSV: `quantile-error` sweeps the sketch policies over synthetic
//! streams and records the quantile error E per run; `gameplay` plays full
//! grid-world episodes with a search agent per (variant, game, noise,
//! budget) cell. Repetitions fan out over a worker pool; rows are always
//! written in grid order, so a run's output is byte-identical for a given
//! (config, base seed) no matter the worker count.

pub mod config;
pub mod gameplay;
pub mod quantile;

use std::io::Write;
use std::path::{Path, PathBuf};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("configuration errors")]
    Config(Vec<String>),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

/// What a sweep produced.
#[derive(Debug, Clone)]
pub struct SweepSummary {
    /// Rows written to the raw file (grid points x repetitions).
    pub rows: usize,
    /// Runs that emitted an error row instead of a measurement.
    pub failures: usize,
    pub out: PathBuf,
    pub aggregate_out: Option<PathBuf>,
}

/// Builds a rayon pool with `jobs` workers (or the rayon default) and runs
/// `f` inside it.
pub fn with_pool<T: Send>(jobs: Option<usize>, f: impl FnOnce() -> T + Send) -> T {
    match jobs {
        Some(n) if n > 0 => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .expect("thread pool")
            .install(f),
        _ => f(),
    }
}

/// Writes a header plus pre-formatted rows; fields must not contain commas
/// or newlines (ours are numbers, short names and error messages, which
/// the writer checks).
pub(crate) fn write_rows(
    path: &Path,
    header: &str,
    rows: &[Vec<String>],
) -> Result<(), std::io::Error> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            std::fs::create_dir_all(dir)?;
        }
    }
    let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
    writeln!(out, "{header}")?;
    let width = header.split(',').count();
    for row in rows {
        debug_assert_eq!(row.len(), width);
        let clean: Vec<String> = row
            .iter()
            .map(|f| f.replace([',', '\n'], ";"))
            .collect();
        writeln!(out, "{}", clean.join(","))?;
    }
    out.flush()
}

/// Minimal CSV reader for our own files: header plus unquoted fields.
pub fn read_rows(path: &Path) -> Result<(Vec<String>, Vec<Vec<String>>), std::io::Error> {
    let text = std::fs::read_to_string(path)?;
    let mut lines = text.lines();
    let header = lines
        .next()
        .map(|h| h.split(',').map(str::to_string).collect())
        .unwrap_or_default();
    let rows = lines
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect();
    Ok((header, rows))
}

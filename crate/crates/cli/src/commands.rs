//! Command implementations, independent of argument parsing and IO.

use std::fs;
use std::path::Path;
use std::time::Instant;

use hilbert_ortho::{contract_path, householder_decompose, reconstruct, DenseOrthoMatrix, SparseVector, SpherePoint};
use rayon::ThreadPool;
use serde::de::DeserializeOwned;
use thiserror::Error;

use crate::report::{Check, RunReport};
use crate::suites;
use crate::wire::{MatrixWire, PathWire, VectorWire, WordWire};

/// Inputs within this distance of the unit sphere are rescaled onto it.
pub const NORMALIZE_SLACK: f64 = 1e-6;
pub const MAX_FIBRE_DIM: usize = 8;

#[derive(Debug, Error)]
pub enum CommandError {
    #[error("{0}")]
    Usage(String),
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("cannot parse {path}: {source}")]
    Parse { path: String, source: serde_json::Error },
    /// Input parsed but violates a mathematical precondition. The report
    /// records the offending residual.
    #[error("invalid input: {reason}")]
    InvalidData { reason: String, report: Box<RunReport> },
}

impl CommandError {
    pub fn exit_code(&self) -> u8 {
        match self {
            Self::Usage(_) | Self::Io { .. } | Self::Parse { .. } => 2,
            Self::InvalidData { .. } => 3,
        }
    }
}

/// A finished command: optional data document plus its report.
#[derive(Debug)]
pub struct Outcome {
    pub data: Option<String>,
    pub report: RunReport,
}

impl Outcome {
    pub fn exit_code(&self) -> u8 {
        if self.report.all_pass() {
            0
        } else {
            1
        }
    }
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, CommandError> {
    let shown = path.display().to_string();
    let text = fs::read_to_string(path).map_err(|source| CommandError::Io { path: shown.clone(), source })?;
    serde_json::from_str(&text).map_err(|source| CommandError::Parse { path: shown, source })
}

fn to_json<T: serde::Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("wire types always serialize")
}

fn report(command: &str, seed: u64, checks: Vec<Check>, started: Instant) -> RunReport {
    RunReport {
        command: command.to_owned(),
        seed,
        checks,
        wall_time_ms: started.elapsed().as_millis() as u64,
    }
}

/// Factors the orthogonal matrix in `path` into reflections.
pub fn decompose(path: &Path) -> Result<Outcome, CommandError> {
    let started = Instant::now();
    let wire: MatrixWire = read_json(path)?;
    let dense = wire
        .to_dense()
        .map_err(|e| CommandError::Usage(format!("{}: {e}", path.display())))?;
    let gram = dense.orthogonality_residual();
    let matrix = DenseOrthoMatrix::new(dense).map_err(|e| CommandError::InvalidData {
        reason: e.to_string(),
        report: Box::new(report(
            "decompose",
            0,
            vec![Check::at_most("orthogonality", gram, hilbert_ortho::tol::ORTHOGONAL)],
            started,
        )),
    })?;
    let word = householder_decompose(&matrix);
    let residual = reconstruct(&word).matrix().sub(matrix.matrix()).max_abs();
    let checks = vec![
        Check::at_most("orthogonality", gram, hilbert_ortho::tol::ORTHOGONAL),
        Check::at_most("round_trip", residual, 1e-8),
        Check::at_most("word_length", word.len() as f64, matrix.n() as f64),
    ];
    Ok(Outcome {
        data: Some(to_json(&WordWire::from(&word))),
        report: report("decompose", 0, checks, started),
    })
}

/// Runs a named invariant suite.
pub fn verify(suite: &str, samples: usize, seed: u64, pool: &ThreadPool) -> Result<Outcome, CommandError> {
    let started = Instant::now();
    let checks = suites::run(suite, samples, seed, pool).ok_or_else(|| {
        CommandError::Usage(format!("unknown suite `{suite}`; expected one of {}", suites::SUITES.join(", ")))
    })?;
    Ok(Outcome { data: None, report: report(&format!("verify {suite}"), seed, checks, started) })
}

/// Samples the contraction path starting at the vector in `path`.
pub fn contract(path: &Path, steps: usize) -> Result<Outcome, CommandError> {
    let started = Instant::now();
    if steps < 2 {
        return Err(CommandError::Usage("--steps must be at least 2".into()));
    }
    let wire: VectorWire = read_json(path)?;
    let v = SparseVector::from(&wire);
    let length = v.norm();
    let defect = (length - 1.0).abs();
    let start = match SpherePoint::normalize(&v) {
        Some(p) if defect <= NORMALIZE_SLACK => p,
        _ => {
            return Err(CommandError::InvalidData {
                reason: format!("vector has norm {length}, not within {NORMALIZE_SLACK} of 1"),
                report: Box::new(report(
                    "contract",
                    0,
                    vec![Check::at_most("unit_input", defect, NORMALIZE_SLACK)],
                    started,
                )),
            })
        }
    };
    let samples = contract_path(&start, steps).map_err(|e| CommandError::Usage(e.to_string()))?;
    let last = &samples.samples[samples.samples.len() - 1].point;
    let checks = vec![
        Check::at_most("unit_input", defect, NORMALIZE_SLACK),
        Check::at_most("unit_norm", samples.max_norm_defect(), 1e-9),
        Check::at_most("start_point", samples.samples[0].point.distance(&start), 1e-10),
        Check::at_most("end_point", last.distance(&SpherePoint::basis(0)), 1e-10),
        Check::at_most("continuity_constant", samples.continuity_constant(), f64::MAX),
    ];
    Ok(Outcome {
        data: Some(to_json(&PathWire::from(&samples))),
        report: report("contract", 0, checks, started),
    })
}

/// Trivialization round trips over `O(j+1) → Sʲ`.
pub fn fibre(dim: usize, samples: usize, seed: u64, pool: &ThreadPool) -> Result<Outcome, CommandError> {
    let started = Instant::now();
    if !(1..=MAX_FIBRE_DIM).contains(&dim) {
        return Err(CommandError::Usage(format!("--dim must lie in 1..={MAX_FIBRE_DIM}, got {dim}")));
    }
    let checks = suites::fibre(dim, samples, seed, pool);
    Ok(Outcome { data: None, report: report(&format!("fibre {dim}"), seed, checks, started) })
}

//! Multi-run experiments: average/optimal fitness over seeded runs and
//! convergence export.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use serde::Serialize;

use crate::algorithms::{self, Algorithm, RunConfig, RunResult};
use crate::error::Result;
use crate::problem::ProblemInstance;

pub const DEFAULT_RUNS: usize = 5;

/// Seed for run `run` of a batch started from `base`.
pub fn derive_seed(base: u64, run: usize) -> u64 {
    splitmix64(base ^ splitmix64(run as u64))
}

fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// One algorithm's row of a comparison.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonEntry {
    pub algorithm: Algorithm,
    pub runs: usize,
    pub avg_best_fitness: f64,
    pub optimal_fitness: f64,
    pub run_best_fitness: Vec<f64>,
    pub run_seeds: Vec<u64>,
}

impl ComparisonEntry {
    /// Aggregates per-run bests. `bests` must be non-empty.
    pub fn from_runs(algorithm: Algorithm, seeds: Vec<u64>, bests: Vec<f64>) -> Self {
        assert!(!bests.is_empty(), "at least one run");
        let avg = bests.iter().sum::<f64>() / bests.len() as f64;
        let optimal = bests.iter().copied().fold(f64::INFINITY, f64::min);
        Self {
            algorithm,
            runs: bests.len(),
            avg_best_fitness: avg,
            optimal_fitness: optimal,
            run_best_fitness: bests,
            run_seeds: seeds,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonReport {
    pub base_seed: u64,
    pub runs: usize,
    pub max_iterations: usize,
    pub entries: Vec<ComparisonEntry>,
}

impl ComparisonReport {
    pub fn entry(&self, algorithm: Algorithm) -> Option<&ComparisonEntry> {
        self.entries.iter().find(|e| e.algorithm == algorithm)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    /// Two-row table: average and optimal fitness per algorithm.
    pub fn summary_table(&self) -> String {
        let mut out = format!("{:<30}", "Performance index");
        for e in &self.entries {
            out += &format!("{:>12}", e.algorithm.name());
        }
        out.push('\n');
        out += &format!("{:<30}", format!("Avg. fitness over {} runs", self.runs));
        for e in &self.entries {
            out += &format!("{:>12}", format!("{:.1} s", e.avg_best_fitness));
        }
        out.push('\n');
        out += &format!("{:<30}", "Optimal fitness");
        for e in &self.entries {
            out += &format!("{:>12}", format!("{:.1} s", e.optimal_fitness));
        }
        out.push('\n');
        out
    }
}

/// All runs of one algorithm, in run order.
#[derive(Debug, Clone)]
pub struct MultiRun {
    pub entry: ComparisonEntry,
    pub results: Vec<RunResult>,
}

/// Repeats `base` `runs` times with seeds derived from `base.seed`.
pub fn multi_run(instance: &ProblemInstance, base: &RunConfig, runs: usize) -> Result<MultiRun> {
    if runs == 0 {
        return Err(crate::Error::Config("runs must be at least 1".into()));
    }
    let results = (0..runs)
        .map(|i| algorithms::run(instance, &base.clone().with_seed(derive_seed(base.seed, i))))
        .collect::<Result<Vec<_>>>()?;
    let entry = ComparisonEntry::from_runs(
        base.algorithm(),
        results.iter().map(|r| r.seed).collect(),
        results.iter().map(|r| r.best_fitness).collect(),
    );
    Ok(MultiRun { entry, results })
}

/// Runs every algorithm with default parameters.
pub fn compare(
    instance: &ProblemInstance,
    base_seed: u64,
    runs: usize,
    max_iterations: usize,
) -> Result<(ComparisonReport, Vec<MultiRun>)> {
    let batches = Algorithm::ALL
        .iter()
        .map(|&alg| {
            let cfg = RunConfig::for_algorithm(alg, base_seed).with_max_iterations(max_iterations);
            multi_run(instance, &cfg, runs)
        })
        .collect::<Result<Vec<_>>>()?;
    let report = ComparisonReport {
        base_seed,
        runs,
        max_iterations,
        entries: batches.iter().map(|b| b.entry.clone()).collect(),
    };
    Ok((report, batches))
}

/// Writes `algorithm,run,iteration,best_so_far` rows, one per history entry.
pub fn export_convergence<'a, W: Write>(
    batches: impl IntoIterator<Item = &'a MultiRun>,
    out: &mut W,
) -> io::Result<()> {
    writeln!(out, "algorithm,run,iteration,best_so_far")?;
    for batch in batches {
        write_runs(&batch.results, out)?;
    }
    Ok(())
}

/// As [`export_convergence`] for a plain list of results, numbered in order.
pub fn write_runs<W: Write>(results: &[RunResult], out: &mut W) -> io::Result<()> {
    for (run, result) in results.iter().enumerate() {
        for (iteration, f) in result.history.iter().enumerate() {
            writeln!(out, "{},{run},{iteration},{f:.6}", result.algorithm)?;
        }
    }
    Ok(())
}

pub fn export_convergence_to_path<'a>(
    batches: impl IntoIterator<Item = &'a MultiRun>,
    path: &Path,
) -> io::Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    export_convergence(batches, &mut out)?;
    out.flush()
}

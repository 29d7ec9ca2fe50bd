//! The `edp` command line.
//!
//! Exit codes: 0 success, 2 usage or validation failure, 3 I/O failure.

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algorithms::{
    self, Algorithm, AlgorithmParams, RunConfig, RunResult, DEFAULT_MAX_ITERATIONS,
};
use crate::cost::{self, PassengerTimes};
use crate::harness::{self, DEFAULT_RUNS};
use crate::oracle::{self, DEFAULT_MAX_FLOORS};
use crate::problem::{Passenger, ProblemInstance, TimingParams, Violation};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;

pub const REPORT_FILE: &str = "report.json";
pub const CONVERGENCE_FILE: &str = "convergence.csv";

/// On-disk instance description.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub num_floors: usize,
    pub initial_floor: usize,
    pub timing: TimingFile,
    pub passengers: Vec<[usize; 2]>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimingFile {
    pub opening_s: u64,
    pub closing_s: u64,
    pub load_s: u64,
    pub between_floors_s: u64,
}

impl From<InstanceFile> for ProblemInstance {
    fn from(f: InstanceFile) -> Self {
        ProblemInstance {
            num_floors: f.num_floors,
            initial_floor: f.initial_floor,
            passengers: f
                .passengers
                .iter()
                .map(|&[c, d]| Passenger::new(c, d))
                .collect(),
            timing: TimingParams::new(
                f.timing.opening_s,
                f.timing.closing_s,
                f.timing.load_s,
                f.timing.between_floors_s,
            ),
        }
    }
}

impl From<&ProblemInstance> for InstanceFile {
    fn from(i: &ProblemInstance) -> Self {
        InstanceFile {
            num_floors: i.num_floors,
            initial_floor: i.initial_floor,
            timing: TimingFile {
                opening_s: i.timing.opening_time_s,
                closing_s: i.timing.closing_time_s,
                load_s: i.timing.passenger_load_time_s,
                between_floors_s: i.timing.between_floors_time_s,
            },
            passengers: i
                .passengers
                .iter()
                .map(|p| [p.call_floor, p.destination_floor])
                .collect(),
        }
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("invalid instance:\n{}", .0.iter().map(|v| format!("  - {v}")).collect::<Vec<_>>().join("\n"))]
    Invalid(Vec<Violation>),

    #[error("{0}")]
    Solver(crate::Error),

    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Io { .. } => EXIT_IO,
            _ => EXIT_USAGE,
        }
    }
}

impl From<crate::Error> for CliError {
    fn from(e: crate::Error) -> Self {
        match e {
            crate::Error::InvalidInstance(v) => Self::Invalid(v),
            other => Self::Solver(other),
        }
    }
}

fn io_error(path: &Path) -> impl FnOnce(io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// Reads and validates an instance file.
pub fn load_instance(path: &Path) -> Result<ProblemInstance, CliError> {
    let text = fs::read_to_string(path).map_err(io_error(path))?;
    let file: InstanceFile = serde_json::from_str(&text).map_err(|e| {
        CliError::Usage(format!("{}: malformed instance file: {e}", path.display()))
    })?;
    let instance = ProblemInstance::from(file);
    instance.check()?;
    Ok(instance)
}

#[derive(Debug, Parser)]
#[command(name = "edp", version, about = "Single-elevator dispatching solvers")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

// parsed once per process, size does not matter
#[allow(clippy::large_enum_variant)]
#[derive(Debug, Subcommand)]
pub enum Command {
    /// Optimize one instance with one algorithm.
    Solve(SolveArgs),
    /// Run every algorithm several times and summarize.
    Compare(CompareArgs),
    /// Exhaustively solve a small instance.
    Oracle(OracleArgs),
}

#[derive(Debug, Args)]
pub struct InstanceSource {
    /// JSON instance file.
    pub instance: Option<PathBuf>,
    /// Use the built-in 21-floor case study.
    #[arg(long, conflicts_with = "instance")]
    pub case_study: bool,
}

impl InstanceSource {
    fn load(&self) -> Result<ProblemInstance, CliError> {
        match (&self.instance, self.case_study) {
            (_, true) => Ok(ProblemInstance::case_study()),
            (Some(path), false) => load_instance(path),
            (None, false) => Err(CliError::Usage(
                "give an instance file or --case-study".into(),
            )),
        }
    }
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub source: InstanceSource,
    #[arg(long, value_enum)]
    pub algo: Algorithm,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = DEFAULT_MAX_ITERATIONS)]
    pub iterations: usize,
    /// Stop once this fitness is reached.
    #[arg(long)]
    pub target: Option<f64>,
    /// Stop after this many iterations without improvement.
    #[arg(long)]
    pub stagnation: Option<usize>,
    /// Write the result as JSON.
    #[arg(long)]
    pub out: Option<PathBuf>,

    // SA
    #[arg(long)]
    pub t_initial: Option<f64>,
    #[arg(long)]
    pub t_final: Option<f64>,
    #[arg(long)]
    pub per_temperature: Option<usize>,
    #[arg(long)]
    pub cooling: Option<f64>,

    // GA, PSO, WOA
    #[arg(long)]
    pub population: Option<usize>,
    #[arg(long)]
    pub elite: Option<usize>,
    #[arg(long)]
    pub crossover: Option<usize>,
    #[arg(long)]
    pub mutants: Option<usize>,
    #[arg(long)]
    pub inertia: Option<f64>,
    #[arg(long)]
    pub cognitive: Option<f64>,
    #[arg(long)]
    pub social: Option<f64>,
    #[arg(long)]
    pub vmax: Option<f64>,
    #[arg(long)]
    pub spiral: Option<f64>,
    #[arg(long)]
    pub no_local_search: bool,
}

impl SolveArgs {
    fn config(&self) -> Result<RunConfig, CliError> {
        let mut stray = Vec::new();
        let mut flag = |set: bool, name: &str| {
            if set {
                stray.push(format!("--{name}"));
            }
        };
        let params = match self.algo {
            Algorithm::Sa => {
                flag(self.population.is_some(), "population");
                let mut p = algorithms::SaParams::default();
                if let Some(v) = self.t_initial {
                    p.initial_temperature = v;
                }
                if let Some(v) = self.t_final {
                    p.final_temperature = v;
                }
                if let Some(v) = self.per_temperature {
                    p.iterations_per_temperature = v;
                }
                p.cooling = self.cooling.or(p.cooling);
                AlgorithmParams::Sa(p)
            }
            Algorithm::Ga => {
                let mut p = algorithms::GaParams::default();
                if let Some(v) = self.population {
                    p.population_size = v;
                }
                if let Some(v) = self.elite {
                    p.elite_count = v;
                }
                if let Some(v) = self.crossover {
                    p.crossover_count = v;
                }
                if let Some(v) = self.mutants {
                    p.mutant_count = v;
                }
                AlgorithmParams::Ga(p)
            }
            Algorithm::Pso => {
                let mut p = algorithms::PsoParams::default();
                if let Some(v) = self.population {
                    p.population_size = v;
                }
                if let Some(v) = self.inertia {
                    p.inertia = v;
                }
                if let Some(v) = self.cognitive {
                    p.cognitive = v;
                }
                if let Some(v) = self.social {
                    p.social = v;
                }
                p.velocity_clamp = self.vmax.or(p.velocity_clamp);
                AlgorithmParams::Pso(p)
            }
            Algorithm::Woa => {
                let mut p = algorithms::WoaParams::default();
                if let Some(v) = self.population {
                    p.population_size = v;
                }
                if let Some(v) = self.spiral {
                    p.spiral_constant = v;
                }
                p.local_search_enabled = !self.no_local_search;
                AlgorithmParams::Woa(p)
            }
        };
        let alg = self.algo;
        let sa = alg == Algorithm::Sa;
        let ga = alg == Algorithm::Ga;
        let pso = alg == Algorithm::Pso;
        let woa = alg == Algorithm::Woa;
        flag(!sa && self.t_initial.is_some(), "t-initial");
        flag(!sa && self.t_final.is_some(), "t-final");
        flag(!sa && self.per_temperature.is_some(), "per-temperature");
        flag(!sa && self.cooling.is_some(), "cooling");
        flag(!ga && self.elite.is_some(), "elite");
        flag(!ga && self.crossover.is_some(), "crossover");
        flag(!ga && self.mutants.is_some(), "mutants");
        flag(!pso && self.inertia.is_some(), "inertia");
        flag(!pso && self.cognitive.is_some(), "cognitive");
        flag(!pso && self.social.is_some(), "social");
        flag(!pso && self.vmax.is_some(), "vmax");
        flag(!woa && self.spiral.is_some(), "spiral");
        flag(!woa && self.no_local_search, "no-local-search");
        if !stray.is_empty() {
            return Err(CliError::Usage(format!(
                "{} not applicable to {}",
                stray.join(", "),
                self.algo
            )));
        }

        let mut cfg = RunConfig::new(params, self.seed).with_max_iterations(self.iterations);
        cfg.target_fitness = self.target;
        cfg.stagnation_window = self.stagnation;
        Ok(cfg)
    }
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    #[command(flatten)]
    pub source: InstanceSource,
    #[arg(long, default_value_t = DEFAULT_RUNS)]
    pub runs: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = DEFAULT_MAX_ITERATIONS)]
    pub iterations: usize,
    /// Directory for report.json and convergence.csv.
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[command(flatten)]
    pub source: InstanceSource,
    #[arg(long, default_value_t = DEFAULT_MAX_FLOORS)]
    pub max_floors: usize,
}

#[derive(Serialize)]
struct PassengerRow {
    passenger: usize,
    call_floor: usize,
    destination_floor: usize,
    #[serde(flatten)]
    times: PassengerTimes,
}

#[derive(Serialize)]
struct SolveOutput<'a> {
    config: &'a RunConfig,
    result: &'a RunResult,
    passengers: Vec<PassengerRow>,
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = sink.write_all(text.as_bytes());
            return code;
        }
    };
    match execute(&cli.command, out) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

pub fn execute(command: &Command, out: &mut dyn Write) -> Result<(), CliError> {
    match command {
        Command::Solve(args) => cmd_solve(args, out),
        Command::Compare(args) => cmd_compare(args, out),
        Command::Oracle(args) => cmd_oracle(args, out),
    }
}

fn stdout_error(e: io::Error) -> CliError {
    CliError::Io {
        path: PathBuf::from("<stdout>"),
        source: e,
    }
}

pub fn cmd_solve(args: &SolveArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let instance = args.source.load()?;
    let config = args.config()?;
    let result = algorithms::run(&instance, &config)?;
    let times = cost::evaluate_all(&result.best_route, &instance)?;

    let mut text = String::new();
    text += &format!("algorithm: {}\n", result.algorithm);
    text += &format!("seed: {}\n", result.seed);
    text += &format!("best route: {}\n", result.best_route);
    text += &format!("best fitness: {:.3} s\n", result.best_fitness);
    text += &format!("evaluations: {}\n", result.evaluations);
    text += &format!(
        "{:>9} {:>5} {:>5} {:>7} {:>7} {:>7}\n",
        "passenger", "call", "dest", "WT", "DT", "JT"
    );
    for (i, (p, t)) in instance.passengers.iter().zip(&times).enumerate() {
        text += &format!(
            "{:>9} {:>5} {:>5} {:>7} {:>7} {:>7}\n",
            i + 1,
            p.call_floor,
            p.destination_floor,
            t.waiting_s,
            t.destination_s,
            t.journey_s
        );
    }
    out.write_all(text.as_bytes()).map_err(stdout_error)?;

    if let Some(path) = &args.out {
        let output = SolveOutput {
            config: &config,
            result: &result,
            passengers: instance
                .passengers
                .iter()
                .zip(times)
                .enumerate()
                .map(|(i, (p, times))| PassengerRow {
                    passenger: i + 1,
                    call_floor: p.call_floor,
                    destination_floor: p.destination_floor,
                    times,
                })
                .collect(),
        };
        let json = serde_json::to_string_pretty(&output).expect("result serializes") + "\n";
        fs::write(path, json).map_err(io_error(path))?;
    }
    Ok(())
}

pub fn cmd_compare(args: &CompareArgs, out: &mut dyn Write) -> Result<(), CliError> {
    if args.runs == 0 {
        return Err(CliError::Usage("--runs must be at least 1".into()));
    }
    let instance = args.source.load()?;
    let (report, batches) = harness::compare(&instance, args.seed, args.runs, args.iterations)?;
    out.write_all(report.summary_table().as_bytes())
        .map_err(stdout_error)?;

    if let Some(dir) = &args.out_dir {
        fs::create_dir_all(dir).map_err(io_error(dir))?;
        let report_path = dir.join(REPORT_FILE);
        fs::write(&report_path, report.to_json()).map_err(io_error(&report_path))?;
        let csv_path = dir.join(CONVERGENCE_FILE);
        harness::export_convergence_to_path(&batches, &csv_path).map_err(io_error(&csv_path))?;
        writeln!(
            out,
            "wrote {} and {}",
            report_path.display(),
            csv_path.display()
        )
        .map_err(stdout_error)?;
    }
    Ok(())
}

pub fn cmd_oracle(args: &OracleArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let instance = args.source.load()?;
    let (route, fitness) = oracle::exhaustive_best(&instance, args.max_floors)?;
    writeln!(out, "best route: {route}\nbest fitness: {fitness:.3} s").map_err(stdout_error)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn instance_file_round_trip() {
        let cs = ProblemInstance::case_study();
        let file = InstanceFile::from(&cs);
        let json = serde_json::to_string(&file).unwrap();
        let back: InstanceFile = serde_json::from_str(&json).unwrap();
        assert_eq!(ProblemInstance::from(back), cs);
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let json = r#"{"num_floors":3,"initial_floor":0,"timing":{"opening_s":2,"closing_s":2,"load_s":5,"between_floors_s":5},"passengers":[[1,2]],"extra":1}"#;
        assert!(serde_json::from_str::<InstanceFile>(json).is_err());
    }

    #[test]
    fn exit_codes() {
        assert_eq!(CliError::Usage("x".into()).exit_code(), EXIT_USAGE);
        assert_eq!(CliError::Invalid(vec![]).exit_code(), EXIT_USAGE);
        let io = CliError::Io {
            path: "x".into(),
            source: io::Error::other("boom"),
        };
        assert_eq!(io.exit_code(), EXIT_IO);
    }
}

//! The four optimizers behind one run interface.
//!
//! Every run owns a ChaCha8 stream seeded from [`RunConfig::seed`], so the
//! same instance and configuration always produce the same [`RunResult`]
//! (wall time aside). `history[0]` is the best fitness of the initial
//! state and each later entry is the best-so-far after one iteration.

mod ga;
mod pso;
mod sa;
mod woa;

use std::fmt;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cost;
use crate::error::{Error, Result};
use crate::problem::{ProblemInstance, Route};

pub use ga::{next_generation, ox_crossover, run_ga, swap_mutation, GaParams};
pub use pso::{run_pso, PsoParams};
pub use sa::{acceptance_probability, accepts, run_sa, SaParams};
pub use woa::{coefficients, control_parameter, run_woa, select_move, WoaMove, WoaParams};

pub const DEFAULT_MAX_ITERATIONS: usize = 100;

#[derive(
    Debug,
    Clone,
    Copy,
    PartialEq,
    Eq,
    Hash,
    PartialOrd,
    Ord,
    Serialize,
    Deserialize,
    clap::ValueEnum,
)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Sa,
    Ga,
    Pso,
    Woa,
}

impl Algorithm {
    pub const ALL: [Algorithm; 4] = [Algorithm::Sa, Algorithm::Ga, Algorithm::Pso, Algorithm::Woa];

    pub fn name(self) -> &'static str {
        match self {
            Self::Sa => "SA",
            Self::Ga => "GA",
            Self::Pso => "PSO",
            Self::Woa => "WOA",
        }
    }

    pub fn default_params(self) -> AlgorithmParams {
        match self {
            Self::Sa => AlgorithmParams::Sa(SaParams::default()),
            Self::Ga => AlgorithmParams::Ga(GaParams::default()),
            Self::Pso => AlgorithmParams::Pso(PsoParams::default()),
            Self::Woa => AlgorithmParams::Woa(WoaParams::default()),
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "algorithm", rename_all = "lowercase")]
pub enum AlgorithmParams {
    Sa(SaParams),
    Ga(GaParams),
    Pso(PsoParams),
    Woa(WoaParams),
}

impl AlgorithmParams {
    pub fn algorithm(&self) -> Algorithm {
        match self {
            Self::Sa(_) => Algorithm::Sa,
            Self::Ga(_) => Algorithm::Ga,
            Self::Pso(_) => Algorithm::Pso,
            Self::Woa(_) => Algorithm::Woa,
        }
    }
}

/// Which optimizer to run and when to stop it. The iteration budget always
/// applies; a target fitness and a stagnation window are optional extras.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub params: AlgorithmParams,
    pub seed: u64,
    pub max_iterations: usize,
    pub target_fitness: Option<f64>,
    pub stagnation_window: Option<usize>,
}

impl RunConfig {
    pub fn new(params: AlgorithmParams, seed: u64) -> Self {
        Self {
            params,
            seed,
            max_iterations: DEFAULT_MAX_ITERATIONS,
            target_fitness: None,
            stagnation_window: None,
        }
    }

    /// Default parameters for `algorithm`.
    pub fn for_algorithm(algorithm: Algorithm, seed: u64) -> Self {
        Self::new(algorithm.default_params(), seed)
    }

    pub fn with_max_iterations(mut self, max_iterations: usize) -> Self {
        self.max_iterations = max_iterations;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn algorithm(&self) -> Algorithm {
        self.params.algorithm()
    }

    fn validate(&self) -> Result<()> {
        if self.stagnation_window == Some(0) {
            return Err(Error::Config("stagnation window must be at least 1".into()));
        }
        if self.target_fitness.is_some_and(|t| !t.is_finite()) {
            return Err(Error::Config("target fitness must be finite".into()));
        }
        Ok(())
    }

    pub(crate) fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunResult {
    pub algorithm: Algorithm,
    pub best_route: Route,
    pub best_fitness: f64,
    /// Best-so-far fitness; entry 0 is the initial state.
    pub history: Vec<f64>,
    pub evaluations: u64,
    #[serde(skip)]
    pub wall_time: Duration,
    pub seed: u64,
}

/// Runs whichever optimizer `config.params` selects.
pub fn run(instance: &ProblemInstance, config: &RunConfig) -> Result<RunResult> {
    match &config.params {
        AlgorithmParams::Sa(_) => run_sa(instance, config),
        AlgorithmParams::Ga(_) => run_ga(instance, config),
        AlgorithmParams::Pso(_) => run_pso(instance, config),
        AlgorithmParams::Woa(_) => run_woa(instance, config),
    }
}

fn preflight(instance: &ProblemInstance, config: &RunConfig) -> Result<()> {
    instance.check()?;
    config.validate()
}

/// Best-so-far bookkeeping and stopping rules shared by all optimizers.
pub(crate) struct Progress<'a> {
    instance: &'a ProblemInstance,
    config: &'a RunConfig,
    best: Option<(Route, f64)>,
    history: Vec<f64>,
    evaluations: u64,
    stale_iterations: usize,
    improved: bool,
    started: Instant,
}

impl<'a> Progress<'a> {
    pub(crate) fn new(instance: &'a ProblemInstance, config: &'a RunConfig) -> Self {
        Self {
            instance,
            config,
            best: None,
            history: Vec::with_capacity(config.max_iterations + 1),
            evaluations: 0,
            stale_iterations: 0,
            improved: false,
            started: Instant::now(),
        }
    }

    /// Fitness of `route`, counted and offered as a best-so-far candidate.
    pub(crate) fn evaluate(&mut self, route: &Route) -> Result<f64> {
        let f = cost::fitness(route, self.instance)?;
        self.evaluations += 1;
        self.offer(route, f);
        Ok(f)
    }

    /// Counts an evaluation done elsewhere.
    pub(crate) fn count_evaluation(&mut self) {
        self.evaluations += 1;
    }

    pub(crate) fn offer(&mut self, route: &Route, f: f64) {
        if self.best.as_ref().is_none_or(|(_, b)| f < *b) {
            self.best = Some((route.clone(), f));
            self.improved = true;
        }
    }

    pub(crate) fn best_fitness(&self) -> f64 {
        self.best.as_ref().map_or(f64::INFINITY, |(_, f)| *f)
    }

    /// Closes the initial state or an iteration. Returns true when a
    /// stopping rule fires.
    pub(crate) fn checkpoint(&mut self) -> bool {
        let first = self.history.is_empty();
        self.history.push(self.best_fitness());
        if !first {
            if self.improved {
                self.stale_iterations = 0;
            } else {
                self.stale_iterations += 1;
            }
        }
        self.improved = false;

        let iterations = self.history.len() - 1;
        iterations >= self.config.max_iterations
            || self
                .config
                .target_fitness
                .is_some_and(|t| self.best_fitness() <= t)
            || self
                .config
                .stagnation_window
                .is_some_and(|w| self.stale_iterations >= w)
    }

    pub(crate) fn finish(self) -> RunResult {
        let (best_route, best_fitness) = self.best.expect("at least one route was evaluated");
        RunResult {
            algorithm: self.config.algorithm(),
            best_route,
            best_fitness,
            history: self.history,
            evaluations: self.evaluations,
            wall_time: self.started.elapsed(),
            seed: self.config.seed,
        }
    }
}

use std::f64::consts::PI;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{preflight, AlgorithmParams, Progress, RunConfig, RunResult};
use crate::encoding::{gvp_decode, gvp_encode, try_improving_swap};
use crate::error::{Error, Result};
use crate::problem::{ProblemInstance, Route};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WoaParams {
    pub population_size: usize,
    pub spiral_constant: f64,
    pub local_search_enabled: bool,
}

impl Default for WoaParams {
    fn default() -> Self {
        Self {
            population_size: 4,
            spiral_constant: 1.0,
            local_search_enabled: true,
        }
    }
}

impl WoaParams {
    pub fn validate(&self) -> Result<()> {
        if self.population_size < 2 {
            return Err(Error::Config("WOA needs at least 2 agents".into()));
        }
        if !self.spiral_constant.is_finite() {
            return Err(Error::Config("spiral constant must be finite".into()));
        }
        Ok(())
    }
}

/// Position update chosen for one component.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WoaMove {
    Encircle,
    Search,
    Spiral,
}

/// `a` falls linearly from 2 at iteration 0 to 0 at the last iteration.
pub fn control_parameter(iteration: usize, max_iterations: usize) -> f64 {
    if max_iterations == 0 {
        return 0.0;
    }
    2.0 - 2.0 * iteration as f64 / max_iterations as f64
}

/// `(A, C) = (2a*r1 - a, 2*r2)`.
pub fn coefficients(a: f64, r1: f64, r2: f64) -> (f64, f64) {
    (2.0 * a * r1 - a, 2.0 * r2)
}

/// Spiral when `p >= 0.5`; otherwise encircle the leader while `|A| < 1`
/// and search around a random agent once `|A| >= 1`.
pub fn select_move(p: f64, big_a: f64) -> WoaMove {
    if p >= 0.5 {
        WoaMove::Spiral
    } else if big_a.abs() < 1.0 {
        WoaMove::Encircle
    } else {
        WoaMove::Search
    }
}

struct Agent {
    position: Vec<f64>,
    route: Route,
    fitness: f64,
}

/// Whale optimization on continuous keys decoded by great value priority,
/// with an optional improving 2-swap after each decode.
///
/// Moves in an iteration all read the previous iteration's positions and
/// leader. When the 2-swap improves an agent, its position is rewritten to
/// decode to the improved route.
pub fn run_woa(instance: &ProblemInstance, config: &RunConfig) -> Result<RunResult> {
    run_woa_observed(instance, config, |_| {})
}

fn run_woa_observed(
    instance: &ProblemInstance,
    config: &RunConfig,
    mut observe: impl FnMut(&[Agent]),
) -> Result<RunResult> {
    preflight(instance, config)?;
    let AlgorithmParams::Woa(params) = &config.params else {
        return Err(Error::Config("run_woa needs WOA parameters".into()));
    };
    params.validate()?;

    let dim = instance.num_floors - 1;
    let upper = instance.num_floors as f64;
    let mut rng = config.rng();
    let mut progress = Progress::new(instance, config);

    let mut pod = Vec::with_capacity(params.population_size);
    for _ in 0..params.population_size {
        let position: Vec<f64> = (0..dim).map(|_| rng.random_range(0.0..upper)).collect();
        let route = gvp_decode(&position, instance)?;
        let fitness = progress.evaluate(&route)?;
        pod.push(Agent {
            position,
            route,
            fitness,
        });
    }
    let (mut leader, mut leader_fitness) = pod_best(&pod);
    let mut stop = progress.checkpoint();
    let mut t = 0;

    while !stop {
        let a = control_parameter(t, config.max_iterations);
        let snapshot: Vec<Vec<f64>> = pod.iter().map(|w| w.position.clone()).collect();

        for agent in &mut pod {
            let p: f64 = rng.random();
            let l: f64 = rng.random_range(-1.0..=1.0);
            let partner = &snapshot[rng.random_range(0..snapshot.len())];
            let spiral = (params.spiral_constant * l).exp() * (2.0 * PI * l).cos();

            for j in 0..dim {
                let (r1, r2) = (rng.random::<f64>(), rng.random::<f64>());
                let (big_a, big_c) = coefficients(a, r1, r2);
                let x = agent.position[j];
                agent.position[j] = match select_move(p, big_a) {
                    WoaMove::Encircle => leader[j] - big_a * (big_c * leader[j] - x).abs(),
                    WoaMove::Search => partner[j] - big_a * (big_c * partner[j] - x).abs(),
                    WoaMove::Spiral => (leader[j] - x).abs() * spiral + leader[j],
                };
            }

            agent.route = gvp_decode(&agent.position, instance)?;
            agent.fitness = progress.evaluate(&agent.route)?;
            if params.local_search_enabled {
                let (route, f) =
                    try_improving_swap(&agent.route, agent.fitness, instance, &mut rng)?;
                progress.count_evaluation();
                if f < agent.fitness {
                    agent.position = gvp_encode(&route, &agent.position, instance)?;
                    progress.offer(&route, f);
                    agent.route = route;
                    agent.fitness = f;
                }
            }
        }

        let (position, f) = pod_best(&pod);
        if f < leader_fitness {
            leader = position;
            leader_fitness = f;
        }
        observe(&pod);
        t += 1;
        stop = progress.checkpoint();
    }
    Ok(progress.finish())
}

fn pod_best(pod: &[Agent]) -> (Vec<f64>, f64) {
    let best = pod
        .iter()
        .reduce(|a, b| if b.fitness < a.fitness { b } else { a })
        .expect("non-empty pod");
    (best.position.clone(), best.fitness)
}

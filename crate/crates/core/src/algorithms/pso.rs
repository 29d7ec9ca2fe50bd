use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{preflight, AlgorithmParams, Progress, RunConfig, RunResult};
use crate::encoding::spv_decode;
use crate::error::{Error, Result};
use crate::problem::ProblemInstance;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PsoParams {
    pub population_size: usize,
    pub inertia: f64,
    pub cognitive: f64,
    pub social: f64,
    /// Per-component speed limit; half the floor count when unset.
    pub velocity_clamp: Option<f64>,
    /// Initial positions are uniform in this range; `[0, floors]` when unset.
    pub init_range: Option<(f64, f64)>,
}

impl Default for PsoParams {
    fn default() -> Self {
        Self {
            population_size: 4,
            inertia: 0.792,
            cognitive: 1.4994,
            social: 1.4994,
            velocity_clamp: None,
            init_range: None,
        }
    }
}

impl PsoParams {
    pub fn validate(&self) -> Result<()> {
        if self.population_size < 2 {
            return Err(Error::Config("PSO needs at least 2 particles".into()));
        }
        for (name, v) in [
            ("inertia", self.inertia),
            ("cognitive", self.cognitive),
            ("social", self.social),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Config(format!("{name} must be positive, got {v}")));
            }
        }
        if let Some(v) = self.velocity_clamp {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Config(format!(
                    "velocity clamp must be positive, got {v}"
                )));
            }
        }
        if let Some((lo, hi)) = self.init_range {
            if !(lo < hi && lo.is_finite() && hi.is_finite()) {
                return Err(Error::Config(format!("init range ({lo}, {hi}) is empty")));
            }
        }
        Ok(())
    }

    /// One velocity component, before clamping:
    /// `w*v + c1*r1*(pbest - x) + c2*r2*(gbest - x)`.
    pub fn velocity(&self, v: f64, x: f64, pbest: f64, gbest: f64, r1: f64, r2: f64) -> f64 {
        self.inertia * v + self.cognitive * r1 * (pbest - x) + self.social * r2 * (gbest - x)
    }

    pub fn max_speed(&self, num_floors: usize) -> f64 {
        self.velocity_clamp.unwrap_or(num_floors as f64 / 2.0)
    }

    fn start_range(&self, num_floors: usize) -> (f64, f64) {
        self.init_range.unwrap_or((0.0, num_floors as f64))
    }
}

struct Particle {
    position: Vec<f64>,
    velocity: Vec<f64>,
    best_position: Vec<f64>,
    best_fitness: f64,
}

/// Global-best PSO on continuous keys decoded by smallest position value.
/// The swarm best is refreshed once per iteration, after every particle moved.
pub fn run_pso(instance: &ProblemInstance, config: &RunConfig) -> Result<RunResult> {
    run_pso_observed(instance, config, |_| {})
}

/// `observe` sees the swarm after every iteration.
fn run_pso_observed(
    instance: &ProblemInstance,
    config: &RunConfig,
    mut observe: impl FnMut(&[Particle]),
) -> Result<RunResult> {
    preflight(instance, config)?;
    let AlgorithmParams::Pso(params) = &config.params else {
        return Err(Error::Config("run_pso needs PSO parameters".into()));
    };
    params.validate()?;

    let dim = instance.num_floors - 1;
    let vmax = params.max_speed(instance.num_floors);
    let (lo, hi) = params.start_range(instance.num_floors);
    let mut rng = config.rng();
    let mut progress = Progress::new(instance, config);

    let mut swarm = Vec::with_capacity(params.population_size);
    for _ in 0..params.population_size {
        let position: Vec<f64> = (0..dim).map(|_| rng.random_range(lo..hi)).collect();
        let f = progress.evaluate(&spv_decode(&position, instance)?)?;
        swarm.push(Particle {
            velocity: vec![0.0; dim],
            best_position: position.clone(),
            position,
            best_fitness: f,
        });
    }
    let (mut global_position, mut global_fitness) = swarm_best(&swarm);
    let mut stop = progress.checkpoint();

    while !stop {
        for particle in &mut swarm {
            for (j, &g) in global_position.iter().enumerate() {
                let (r1, r2) = (rng.random::<f64>(), rng.random::<f64>());
                let v = params.velocity(
                    particle.velocity[j],
                    particle.position[j],
                    particle.best_position[j],
                    g,
                    r1,
                    r2,
                );
                particle.velocity[j] = v.clamp(-vmax, vmax);
                particle.position[j] += particle.velocity[j];
            }
            let f = progress.evaluate(&spv_decode(&particle.position, instance)?)?;
            if f < particle.best_fitness {
                particle.best_fitness = f;
                particle.best_position.clone_from(&particle.position);
            }
        }
        let (position, f) = swarm_best(&swarm);
        if f < global_fitness {
            global_position = position;
            global_fitness = f;
        }
        observe(&swarm);
        stop = progress.checkpoint();
    }
    Ok(progress.finish())
}

fn swarm_best(swarm: &[Particle]) -> (Vec<f64>, f64) {
    let best = swarm
        .iter()
        .reduce(|a, b| {
            if b.best_fitness < a.best_fitness {
                b
            } else {
                a
            }
        })
        .expect("non-empty swarm");
    (best.best_position.clone(), best.best_fitness)
}

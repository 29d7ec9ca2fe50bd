use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{preflight, Progress, RunConfig, RunResult};
use crate::encoding::{random_route, random_swap};
use crate::error::{Error, Result};
use crate::problem::ProblemInstance;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SaParams {
    pub initial_temperature: f64,
    pub final_temperature: f64,
    pub iterations_per_temperature: usize,
    /// Geometric cooling factor. When unset it is chosen so the temperature
    /// reaches `final_temperature` exactly at the iteration budget.
    pub cooling: Option<f64>,
}

impl Default for SaParams {
    fn default() -> Self {
        Self {
            initial_temperature: 200.0,
            final_temperature: 0.01,
            iterations_per_temperature: 1,
            cooling: None,
        }
    }
}

impl SaParams {
    pub fn validate(&self) -> Result<()> {
        let (ti, tf) = (self.initial_temperature, self.final_temperature);
        if !(tf > 0.0 && ti > tf && ti.is_finite()) {
            return Err(Error::Config(format!(
                "temperatures must satisfy initial > final > 0, got {ti} and {tf}"
            )));
        }
        if self.iterations_per_temperature == 0 {
            return Err(Error::Config(
                "iterations per temperature must be at least 1".into(),
            ));
        }
        if let Some(a) = self.cooling {
            if !(a > 0.0 && a < 1.0) {
                return Err(Error::Config(format!(
                    "cooling factor must be in (0, 1), got {a}"
                )));
            }
        }
        Ok(())
    }

    /// `alpha` with `alpha^max_iterations == final / initial` unless set explicitly.
    pub fn cooling_factor(&self, max_iterations: usize) -> f64 {
        self.cooling.unwrap_or_else(|| {
            let ratio = self.final_temperature / self.initial_temperature;
            ratio.powf(1.0 / max_iterations.max(1) as f64)
        })
    }
}

/// Metropolis acceptance probability for an energy change `delta` at `temperature`.
pub fn acceptance_probability(delta: f64, temperature: f64) -> f64 {
    if delta < 0.0 {
        1.0
    } else {
        (-delta / temperature).exp()
    }
}

/// Improvements are always taken; otherwise a uniform draw decides.
pub fn accepts<R: Rng + ?Sized>(delta: f64, temperature: f64, rng: &mut R) -> bool {
    delta < 0.0 || rng.random::<f64>() < acceptance_probability(delta, temperature)
}

/// Simulated annealing over route tails with a random 2-swap neighborhood.
pub fn run_sa(instance: &ProblemInstance, config: &RunConfig) -> Result<RunResult> {
    preflight(instance, config)?;
    let super::AlgorithmParams::Sa(params) = &config.params else {
        return Err(Error::Config("run_sa needs SA parameters".into()));
    };
    params.validate()?;

    let alpha = params.cooling_factor(config.max_iterations);
    // powf rounding can leave the temperature a hair off the final value
    let floor = params.final_temperature * (1.0 - 1e-9);
    let mut rng = config.rng();
    let mut progress = Progress::new(instance, config);

    let mut current = random_route(instance, &mut rng);
    let mut current_f = progress.evaluate(&current)?;
    let mut temperature = params.initial_temperature;
    let mut stop = progress.checkpoint();

    while !stop && temperature > floor {
        for _ in 0..params.iterations_per_temperature {
            let candidate = random_swap(&current, instance, &mut rng)?;
            let f = progress.evaluate(&candidate)?;
            if accepts(f - current_f, temperature, &mut rng) {
                current = candidate;
                current_f = f;
            }
        }
        temperature *= alpha;
        stop = progress.checkpoint();
    }
    Ok(progress.finish())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn acceptance_closed_form() {
        assert_eq!(acceptance_probability(-1.0, 0.5), 1.0);
        assert_eq!(acceptance_probability(-1.0, 1e6), 1.0);
        assert!((acceptance_probability(200.0, 200.0) - (-1.0f64).exp()).abs() < 1e-15);
        assert!((acceptance_probability(200.0, 200.0) - 0.3679).abs() < 1e-4);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!((0..100).all(|_| accepts(-1.0, 1.0, &mut rng)));
    }

    #[test]
    fn default_cooling_hits_final_temperature() {
        let p = SaParams::default();
        let alpha = p.cooling_factor(100);
        assert!((alpha - 0.9057).abs() < 1e-4, "{alpha}");
        let t = p.initial_temperature * alpha.powi(100);
        assert!((t - p.final_temperature).abs() < 1e-12);
    }

    #[test]
    fn default_run_uses_full_budget() {
        let inst = ProblemInstance::case_study();
        let res = run_sa(
            &inst,
            &RunConfig::for_algorithm(super::super::Algorithm::Sa, 3),
        )
        .unwrap();
        assert_eq!(res.history.len(), 101);
        assert_eq!(res.evaluations, 101);
    }

    #[test]
    fn fast_cooling_stops_before_budget() {
        let inst = ProblemInstance::case_study();
        let params = SaParams {
            cooling: Some(0.5),
            ..SaParams::default()
        };
        let cfg = RunConfig::new(super::super::AlgorithmParams::Sa(params), 3);
        // 200 * 0.5^k <= 0.01 first at k = 15
        assert_eq!(run_sa(&inst, &cfg).unwrap().history.len(), 16);
    }

    #[test]
    fn bad_params_are_rejected() {
        for p in [
            SaParams {
                initial_temperature: 0.001,
                ..SaParams::default()
            },
            SaParams {
                final_temperature: 0.0,
                ..SaParams::default()
            },
            SaParams {
                iterations_per_temperature: 0,
                ..SaParams::default()
            },
            SaParams {
                cooling: Some(1.0),
                ..SaParams::default()
            },
        ] {
            assert!(matches!(p.validate(), Err(Error::Config(_))));
        }
    }
}

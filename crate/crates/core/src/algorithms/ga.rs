use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{preflight, AlgorithmParams, Progress, RunConfig, RunResult};
use crate::cost::repair_route;
use crate::encoding::random_route;
use crate::error::{Error, Result};
use crate::problem::{ProblemInstance, Route};

/// Population split: `elite_count + crossover_count + mutant_count == population_size`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GaParams {
    pub population_size: usize,
    pub elite_count: usize,
    pub crossover_count: usize,
    pub mutant_count: usize,
}

impl Default for GaParams {
    fn default() -> Self {
        Self {
            population_size: 4,
            elite_count: 1,
            crossover_count: 2,
            mutant_count: 1,
        }
    }
}

impl GaParams {
    pub fn validate(&self) -> Result<()> {
        let m = self.population_size;
        if m == 0 {
            return Err(Error::Config("population size must be at least 1".into()));
        }
        if self.elite_count + self.crossover_count + self.mutant_count != m {
            return Err(Error::Config(format!(
                "elite ({}) + crossover ({}) + mutant ({}) must equal population size ({m})",
                self.elite_count, self.crossover_count, self.mutant_count
            )));
        }
        if self.crossover_count > 0 && m < 2 {
            return Err(Error::Config(
                "crossover needs a population of at least 2".into(),
            ));
        }
        Ok(())
    }
}

/// Davis order crossover.
///
/// The child keeps `parent1[cut_lo..=cut_hi]` in place. The remaining
/// positions, starting after `cut_hi` and wrapping, take `parent2`'s genes in
/// the order they appear from `cut_hi + 1` (also wrapping), skipping genes
/// already copied.
pub fn ox_crossover(
    parent1: &[usize],
    parent2: &[usize],
    cut_lo: usize,
    cut_hi: usize,
) -> Result<Vec<usize>> {
    let n = parent1.len();
    if n != parent2.len() {
        return Err(Error::MismatchedGenes);
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    if cut_lo > cut_hi || cut_hi >= n {
        return Err(Error::Config(format!(
            "crossover cuts ({cut_lo}, {cut_hi}) invalid for length {n}"
        )));
    }
    let mut a = parent1.to_vec();
    let mut b = parent2.to_vec();
    a.sort_unstable();
    b.sort_unstable();
    if a != b || a.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::MismatchedGenes);
    }

    let max_gene = a[n - 1];
    let mut taken = vec![false; max_gene + 1];
    let mut child = vec![usize::MAX; n];
    for i in cut_lo..=cut_hi {
        child[i] = parent1[i];
        taken[parent1[i]] = true;
    }
    let mut slot = (cut_hi + 1) % n;
    for k in 0..n {
        let gene = parent2[(cut_hi + 1 + k) % n];
        if !taken[gene] {
            child[slot] = gene;
            taken[gene] = true;
            slot = (slot + 1) % n;
        }
    }
    Ok(child)
}

/// Exchanges two distinct, uniformly chosen positions.
pub fn swap_mutation<R: Rng + ?Sized>(genes: &[usize], rng: &mut R) -> Result<Vec<usize>> {
    let n = genes.len();
    if n < 2 {
        return Err(Error::TooShort { len: n, min: 2 });
    }
    let i = rng.random_range(0..n);
    let mut j = rng.random_range(0..n - 1);
    if j >= i {
        j += 1;
    }
    let mut out = genes.to_vec();
    out.swap(i, j);
    Ok(out)
}

fn random_cuts<R: Rng + ?Sized>(n: usize, rng: &mut R) -> (usize, usize) {
    let lo = rng.random_range(0..n);
    let hi = rng.random_range(lo..n);
    (lo, hi)
}

fn route_from_genes(tail: &[usize], instance: &ProblemInstance) -> Result<Route> {
    Ok(repair_route(&Route::from_tail(tail, instance)?, instance))
}

/// Builds the next population from `ranked` (best first): the elites
/// verbatim, then the OX children of the two best, then the swap-mutated
/// worst members. All offspring are repaired.
pub fn next_generation<R: Rng + ?Sized>(
    ranked: &[Route],
    params: &GaParams,
    instance: &ProblemInstance,
    rng: &mut R,
) -> Result<Vec<Route>> {
    params.validate()?;
    let m = ranked.len();
    if m != params.population_size {
        return Err(Error::Config(format!(
            "population has {m} members, expected {}",
            params.population_size
        )));
    }
    let mut next: Vec<Route> = ranked[..params.elite_count].to_vec();

    if params.crossover_count > 0 {
        let mom = ranked[0].tail();
        let dad = ranked[1].tail();
        let mut children = Vec::with_capacity(params.crossover_count + 1);
        while children.len() < params.crossover_count {
            let (lo, hi) = random_cuts(mom.len(), rng);
            children.push(ox_crossover(mom, dad, lo, hi)?);
            children.push(ox_crossover(dad, mom, lo, hi)?);
        }
        children.truncate(params.crossover_count);
        for genes in children {
            next.push(route_from_genes(&genes, instance)?);
        }
    }

    for k in 0..params.mutant_count {
        let source = &ranked[m - 1 - k % m];
        let genes = swap_mutation(source.tail(), rng)?;
        next.push(route_from_genes(&genes, instance)?);
    }
    Ok(next)
}

/// Generational GA. Each generation keeps the `elite_count` best routes,
/// breeds `crossover_count` OX children from the two best, and swap-mutates
/// the `mutant_count` worst.
pub fn run_ga(instance: &ProblemInstance, config: &RunConfig) -> Result<RunResult> {
    preflight(instance, config)?;
    let AlgorithmParams::Ga(params) = &config.params else {
        return Err(Error::Config("run_ga needs GA parameters".into()));
    };
    params.validate()?;

    let mut rng = config.rng();
    let mut progress = Progress::new(instance, config);

    let mut population = Vec::with_capacity(params.population_size);
    for _ in 0..params.population_size {
        let route = random_route(instance, &mut rng);
        let f = progress.evaluate(&route)?;
        population.push((route, f));
    }
    let mut stop = progress.checkpoint();

    while !stop {
        population.sort_by(|a, b| a.1.total_cmp(&b.1));
        let ranked: Vec<Route> = population.iter().map(|(r, _)| r.clone()).collect();
        let offspring = next_generation(&ranked, params, instance, &mut rng)?;
        let mut next = Vec::with_capacity(offspring.len());
        for (k, route) in offspring.into_iter().enumerate() {
            // elites are verbatim copies with known fitness
            let f = if k < params.elite_count {
                population[k].1
            } else {
                progress.evaluate(&route)?
            };
            next.push((route, f));
        }
        population = next;
        stop = progress.checkpoint();
    }
    Ok(progress.finish())
}

//! Closed-form passenger timing model and route fitness.
//!
//! For a passenger picked up at route index `ic` and dropped at `id`:
//!
//! ```text
//! WT = BFT*N1 + LT*CB + LT*DB_wait + OT
//! DT = CT + LT*CA + BFT*N2 + LT*DB_ride + OT
//! JT = WT + DT
//! ```
//!
//! `N1` is the floor distance the elevator covers from the start of the route
//! to the pickup and `N2` the distance from pickup to drop-off. `CB` and
//! `DB_wait` count other passengers' pickups and drop-offs strictly before
//! `ic`; `CA` and `DB_ride` count those strictly between `ic` and `id`.
//! Route fitness is the mean journey time.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::problem::{ProblemInstance, Route};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct PassengerMetrics {
    pub n1_floors: u64,
    pub n2_floors: u64,
    pub calls_before: u64,
    pub drops_before_pickup: u64,
    pub calls_during: u64,
    pub drops_during: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct PassengerTimes {
    pub waiting_s: u64,
    pub destination_s: u64,
    pub journey_s: u64,
}

impl PassengerTimes {
    pub fn new(waiting_s: u64, destination_s: u64) -> Self {
        Self {
            waiting_s,
            destination_s,
            journey_s: waiting_s + destination_s,
        }
    }
}

/// Route positions plus cumulative travel, shared by all per-passenger queries.
struct RouteIndex {
    pos: Vec<usize>,
    travelled: Vec<u64>,
}

impl RouteIndex {
    fn build(route: &Route, instance: &ProblemInstance) -> Result<Self> {
        if route.len() != instance.num_floors {
            return Err(Error::InvalidRoute(format!(
                "route has {} stops but the instance has {} floors",
                route.len(),
                instance.num_floors
            )));
        }
        let stops = route.stops();
        let mut travelled = Vec::with_capacity(stops.len());
        let mut acc = 0u64;
        travelled.push(0);
        for w in stops.windows(2) {
            acc += w[0].abs_diff(w[1]) as u64;
            travelled.push(acc);
        }
        Ok(Self {
            pos: route.positions(),
            travelled,
        })
    }

    fn span(&self, instance: &ProblemInstance, passenger: usize) -> Result<(usize, usize)> {
        let p = instance.passengers[passenger];
        let (ic, id) = (self.pos[p.call_floor], self.pos[p.destination_floor]);
        if ic >= id {
            return Err(Error::PrecedenceViolated {
                passenger,
                call: p.call_floor,
                destination: p.destination_floor,
            });
        }
        Ok((ic, id))
    }

    fn metrics(&self, instance: &ProblemInstance, passenger: usize) -> Result<PassengerMetrics> {
        let (ic, id) = self.span(instance, passenger)?;
        let mut m = PassengerMetrics {
            n1_floors: self.travelled[ic],
            n2_floors: self.travelled[id] - self.travelled[ic],
            ..Default::default()
        };
        for (q, other) in instance.passengers.iter().enumerate() {
            if q == passenger {
                continue;
            }
            let (qc, qd) = (
                self.pos[other.call_floor],
                self.pos[other.destination_floor],
            );
            if qc < ic {
                m.calls_before += 1;
            } else if qc < id {
                m.calls_during += 1;
            }
            if qd < ic {
                m.drops_before_pickup += 1;
            } else if ic < qd && qd < id {
                m.drops_during += 1;
            }
        }
        Ok(m)
    }
}

/// Plugs counts into the waiting/destination time formulas.
pub fn times_from_metrics(m: &PassengerMetrics, instance: &ProblemInstance) -> PassengerTimes {
    let t = &instance.timing;
    let lt = t.load_time();
    let bft = t.between_floors_time_s;
    let waiting =
        bft * m.n1_floors + lt * m.calls_before + lt * m.drops_before_pickup + t.opening_time_s;
    let destination = t.closing_time_s
        + lt * m.calls_during
        + bft * m.n2_floors
        + lt * m.drops_during
        + t.opening_time_s;
    PassengerTimes::new(waiting, destination)
}

pub fn passenger_metrics(
    route: &Route,
    passenger: usize,
    instance: &ProblemInstance,
) -> Result<PassengerMetrics> {
    check_passenger_index(passenger, instance)?;
    RouteIndex::build(route, instance)?.metrics(instance, passenger)
}

pub fn evaluate_passenger(
    route: &Route,
    passenger: usize,
    instance: &ProblemInstance,
) -> Result<PassengerTimes> {
    let m = passenger_metrics(route, passenger, instance)?;
    Ok(times_from_metrics(&m, instance))
}

/// Times for every passenger, in instance order.
pub fn evaluate_all(route: &Route, instance: &ProblemInstance) -> Result<Vec<PassengerTimes>> {
    let index = RouteIndex::build(route, instance)?;
    (0..instance.num_passengers())
        .map(|p| Ok(times_from_metrics(&index.metrics(instance, p)?, instance)))
        .collect()
}

/// Sum of journey times in whole seconds.
pub fn total_journey_time(route: &Route, instance: &ProblemInstance) -> Result<u64> {
    Ok(evaluate_all(route, instance)?
        .iter()
        .map(|t| t.journey_s)
        .sum())
}

/// Mean journey time in seconds. Lower is better.
pub fn fitness(route: &Route, instance: &ProblemInstance) -> Result<f64> {
    let total = total_journey_time(route, instance)?;
    Ok(total as f64 / instance.num_passengers() as f64)
}

/// Swaps the call and destination positions of every passenger whose
/// destination comes first. Feasible routes come back unchanged.
///
/// Event floors are pairwise distinct, so each swap only touches the two
/// positions of one passenger and a single pass in list order suffices.
pub fn repair_route(route: &Route, instance: &ProblemInstance) -> Route {
    let mut repaired = route.clone();
    let mut pos = repaired.positions();
    for p in &instance.passengers {
        let (ic, id) = (pos[p.call_floor], pos[p.destination_floor]);
        if id < ic {
            repaired.swap(ic, id);
            pos.swap(p.call_floor, p.destination_floor);
        }
    }
    repaired
}

fn check_passenger_index(passenger: usize, instance: &ProblemInstance) -> Result<()> {
    if passenger >= instance.num_passengers() {
        return Err(Error::InvalidRoute(format!(
            "passenger index {passenger} out of range for {} passengers",
            instance.num_passengers()
        )));
    }
    Ok(())
}

//! Reference implementations used to check the cost model and the optimizers.
//!
//! [`simulate_route`] drives the elevator stop by stop on an explicit clock
//! and reads passenger times off the timeline. It shares no code with
//! [`crate::cost`]. [`exhaustive_best`] enumerates every route of a small
//! instance.

use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

use crate::cost::{self, PassengerTimes};
use crate::error::{Error, Result};
use crate::problem::{Passenger, ProblemInstance, Route, TimingParams};

pub const DEFAULT_MAX_FLOORS: usize = 9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EventKind {
    Depart,
    Arrive,
    DoorsOpen,
    Pickup,
    Dropoff,
    DoorsClose,
}

/// `time_s` is the moment the event completes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TimelineEvent {
    pub time_s: u64,
    pub kind: EventKind,
    pub floor: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Simulation {
    pub times: Vec<PassengerTimes>,
    pub timeline: Vec<TimelineEvent>,
}

impl Simulation {
    pub fn duration_s(&self) -> u64 {
        self.timeline.last().map_or(0, |e| e.time_s)
    }
}

#[derive(Clone, Copy)]
enum Service {
    Pickup(usize),
    Dropoff(usize),
}

/// Runs the elevator along `route` from t = 0.
///
/// Moving costs `BFT` per floor. A stop that hosts a pickup or drop-off
/// opens the doors (`OT`), moves one passenger (`PLT`) and closes the doors
/// (`CT`); other floors are passed without stopping. A passenger's wait ends
/// when the doors finish opening at the call floor; the ride runs from the
/// start of the doors closing there to the doors finishing opening at the
/// destination.
pub fn simulate_route(route: &Route, instance: &ProblemInstance) -> Result<Simulation> {
    let t = instance.timing;
    let n = instance.num_passengers();
    let mut services: HashMap<usize, Service> = HashMap::new();
    for (i, p) in instance.passengers.iter().enumerate() {
        services.insert(p.call_floor, Service::Pickup(i));
        services.insert(p.destination_floor, Service::Dropoff(i));
    }

    let mut clock = 0u64;
    let mut timeline = Vec::new();
    let mut waited: Vec<Option<u64>> = vec![None; n];
    let mut boarded_at: Vec<Option<u64>> = vec![None; n];
    let mut rode: Vec<Option<u64>> = vec![None; n];

    let stops = route.stops();
    for (k, &floor) in stops.iter().enumerate() {
        if k > 0 {
            let from = stops[k - 1];
            timeline.push(TimelineEvent {
                time_s: clock,
                kind: EventKind::Depart,
                floor: from,
            });
            clock += t.between_floors_time_s * from.abs_diff(floor) as u64;
            timeline.push(TimelineEvent {
                time_s: clock,
                kind: EventKind::Arrive,
                floor,
            });
        }
        let Some(&service) = services.get(&floor) else {
            continue;
        };

        clock += t.opening_time_s;
        timeline.push(TimelineEvent {
            time_s: clock,
            kind: EventKind::DoorsOpen,
            floor,
        });
        match service {
            Service::Pickup(p) => {
                waited[p] = Some(clock);
                clock += t.passenger_load_time_s;
                timeline.push(TimelineEvent {
                    time_s: clock,
                    kind: EventKind::Pickup,
                    floor,
                });
                boarded_at[p] = Some(clock);
            }
            Service::Dropoff(p) => {
                let Some(start) = boarded_at[p] else {
                    let Passenger {
                        call_floor,
                        destination_floor,
                    } = instance.passengers[p];
                    return Err(Error::PrecedenceViolated {
                        passenger: p,
                        call: call_floor,
                        destination: destination_floor,
                    });
                };
                rode[p] = Some(clock - start);
                clock += t.passenger_load_time_s;
                timeline.push(TimelineEvent {
                    time_s: clock,
                    kind: EventKind::Dropoff,
                    floor,
                });
            }
        }
        clock += t.closing_time_s;
        timeline.push(TimelineEvent {
            time_s: clock,
            kind: EventKind::DoorsClose,
            floor,
        });
    }

    let times = (0..n)
        .map(|p| match (waited[p], rode[p]) {
            (Some(w), Some(d)) => Ok(PassengerTimes::new(w, d)),
            _ => Err(Error::InvalidRoute(format!(
                "passenger {p} was never served"
            ))),
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Simulation { times, timeline })
}

/// Lowest-fitness feasible route of a small instance. Ties go to the
/// lexicographically smallest route.
pub fn exhaustive_best(instance: &ProblemInstance, max_floors: usize) -> Result<(Route, f64)> {
    instance.check()?;
    if instance.num_floors > max_floors {
        return Err(Error::TooLarge {
            floors: instance.num_floors,
            max: max_floors,
        });
    }
    let mut tail = instance.tail_floors();
    let mut best: Option<(Vec<usize>, u64)> = None;
    loop {
        let route = Route::from_tail(&tail, instance)?;
        if let Ok(total) = cost::total_journey_time(&route, instance) {
            if best.as_ref().is_none_or(|(_, b)| total < *b) {
                best = Some((tail.clone(), total));
            }
        }
        if !next_permutation(&mut tail) {
            break;
        }
    }
    // the identity tail repaired is always feasible, so something was found
    let (tail, total) = best.expect("feasible route exists");
    let route = Route::from_tail(&tail, instance)?;
    Ok((route, total as f64 / instance.num_passengers() as f64))
}

/// Advances to the next permutation in lexicographic order. Returns false
/// (leaving the slice sorted ascending) after the last one.
pub fn next_permutation(xs: &mut [usize]) -> bool {
    if xs.len() < 2 {
        return false;
    }
    let Some(i) = (0..xs.len() - 1).rev().find(|&i| xs[i] < xs[i + 1]) else {
        xs.reverse();
        return false;
    };
    let j = (i + 1..xs.len()).rev().find(|&j| xs[j] > xs[i]).unwrap();
    xs.swap(i, j);
    xs[i + 1..].reverse();
    true
}

/// Random valid instance with `num_floors` floors and `num_passengers`
/// passengers. Requires `2 * num_passengers + 1 <= num_floors`.
pub fn random_instance<R: Rng + ?Sized>(
    rng: &mut R,
    num_floors: usize,
    num_passengers: usize,
) -> ProblemInstance {
    assert!(
        2 * num_passengers < num_floors,
        "not enough floors for distinct events"
    );
    let mut floors: Vec<usize> = (0..num_floors).collect();
    floors.shuffle(rng);
    let initial_floor = floors[0];
    let passengers = floors[1..=2 * num_passengers]
        .chunks(2)
        .map(|pair| Passenger::new(pair[0], pair[1]))
        .collect();
    let timing = TimingParams::new(
        rng.random_range(0..=4),
        rng.random_range(0..=4),
        rng.random_range(0..=8),
        rng.random_range(1..=8),
    );
    ProblemInstance {
        num_floors,
        initial_floor,
        passengers,
        timing,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::is_feasible;

    fn inst(num_floors: usize, initial: usize, calls: &[(usize, usize)]) -> ProblemInstance {
        ProblemInstance::new(
            num_floors,
            initial,
            calls.iter().map(|&(c, d)| Passenger::new(c, d)).collect(),
            TimingParams::default(),
        )
        .unwrap()
    }

    #[test]
    fn single_passenger_timeline() {
        let i = inst(3, 0, &[(1, 2)]);
        let sim = simulate_route(&Route::new(vec![0, 1, 2], &i).unwrap(), &i).unwrap();
        assert_eq!(sim.times, vec![PassengerTimes::new(7, 9)]);
        let opened = sim
            .timeline
            .iter()
            .find(|e| e.kind == EventKind::DoorsOpen)
            .unwrap();
        assert_eq!((opened.time_s, opened.floor), (7, 1));
        assert_eq!(
            sim.timeline[1],
            TimelineEvent {
                time_s: 5,
                kind: EventKind::Arrive,
                floor: 1
            }
        );
        // 2 floors of travel, 2 serviced stops
        assert_eq!(sim.duration_s(), 5 * 2 + 9 * 2);
    }

    #[test]
    fn second_passenger_waits_for_first() {
        let i = inst(5, 0, &[(1, 2), (3, 4)]);
        let sim = simulate_route(&Route::new(vec![0, 1, 2, 3, 4], &i).unwrap(), &i).unwrap();
        assert_eq!(sim.times[1].waiting_s, 35);
        assert_eq!(sim.times[1].journey_s, 44);
    }

    #[test]
    fn infeasible_route_errors() {
        let i = inst(3, 0, &[(1, 2)]);
        assert!(simulate_route(&Route::new(vec![0, 2, 1], &i).unwrap(), &i).is_err());
    }

    #[test]
    fn exhaustive_examples() {
        let i = inst(3, 0, &[(1, 2)]);
        let (r, f) = exhaustive_best(&i, DEFAULT_MAX_FLOORS).unwrap();
        assert_eq!((r.stops(), f), (&[0, 1, 2][..], 16.0));

        let i = inst(5, 0, &[(1, 2), (3, 4)]);
        let (r, f) = exhaustive_best(&i, DEFAULT_MAX_FLOORS).unwrap();
        assert_eq!((r.stops(), f), (&[0, 1, 2, 3, 4][..], 30.0));
        assert!(is_feasible(&r, &i));

        let big = inst(10, 0, &[(1, 2)]);
        assert_eq!(
            exhaustive_best(&big, DEFAULT_MAX_FLOORS).unwrap_err(),
            Error::TooLarge { floors: 10, max: 9 }
        );
    }

    #[test]
    fn next_permutation_enumerates_all() {
        let mut xs = vec![1, 2, 3, 4];
        let mut count = 1;
        let mut prev = xs.clone();
        while next_permutation(&mut xs) {
            assert!(xs > prev);
            prev = xs.clone();
            count += 1;
        }
        assert_eq!(count, 24);
        assert_eq!(xs, vec![1, 2, 3, 4]);
    }
}

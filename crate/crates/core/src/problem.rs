//! Problem instances, routes and route feasibility.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Elevator timing constants, all in whole seconds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TimingParams {
    pub opening_time_s: u64,
    pub closing_time_s: u64,
    pub passenger_load_time_s: u64,
    pub between_floors_time_s: u64,
}

impl TimingParams {
    pub const fn new(opening: u64, closing: u64, load: u64, between_floors: u64) -> Self {
        Self {
            opening_time_s: opening,
            closing_time_s: closing,
            passenger_load_time_s: load,
            between_floors_time_s: between_floors,
        }
    }

    /// Full door cycle at a serviced stop: open, load or unload one passenger, close.
    pub const fn load_time(&self) -> u64 {
        self.opening_time_s + self.closing_time_s + self.passenger_load_time_s
    }

    /// Every constant multiplied by `k`.
    pub const fn scaled(&self, k: u64) -> Self {
        Self::new(
            self.opening_time_s * k,
            self.closing_time_s * k,
            self.passenger_load_time_s * k,
            self.between_floors_time_s * k,
        )
    }
}

impl Default for TimingParams {
    fn default() -> Self {
        Self::new(2, 2, 5, 5)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Passenger {
    pub call_floor: usize,
    pub destination_floor: usize,
}

impl Passenger {
    pub const fn new(call_floor: usize, destination_floor: usize) -> Self {
        Self {
            call_floor,
            destination_floor,
        }
    }
}

/// One broken instance invariant, as reported by [`ProblemInstance::validate`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Violation {
    TooFewFloors { num_floors: usize },
    NoPassengers,
    InitialFloorOutOfRange { floor: usize },
    FloorOutOfRange { passenger: usize, floor: usize },
    CallEqualsDestination { passenger: usize, floor: usize },
    DuplicateEventFloor { floor: usize },
    EventAtInitialFloor { passenger: usize, floor: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::TooFewFloors { num_floors } => {
                write!(f, "too few floors: {num_floors} (need at least 2)")
            }
            Self::NoPassengers => write!(f, "no passengers"),
            Self::InitialFloorOutOfRange { floor } => {
                write!(f, "initial floor {floor} out of range")
            }
            Self::FloorOutOfRange { passenger, floor } => {
                write!(
                    f,
                    "floor out of range: passenger {passenger} uses floor {floor}"
                )
            }
            Self::CallEqualsDestination { passenger, floor } => {
                write!(
                    f,
                    "call equals destination: passenger {passenger} at floor {floor}"
                )
            }
            Self::DuplicateEventFloor { floor } => {
                write!(f, "duplicate event floor: floor {floor}")
            }
            Self::EventAtInitialFloor { passenger, floor } => write!(
                f,
                "event floor equals initial floor: passenger {passenger} at floor {floor}"
            ),
        }
    }
}

/// A dispatching instance: one elevator, a fixed batch of known calls.
///
/// Every call and destination floor must be distinct from every other event
/// floor and from the elevator's starting floor, so each stop on a route
/// hosts at most one pickup or drop-off. Floors with no events are allowed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProblemInstance {
    pub num_floors: usize,
    pub initial_floor: usize,
    pub passengers: Vec<Passenger>,
    pub timing: TimingParams,
}

impl ProblemInstance {
    /// Builds an instance and rejects it if any invariant is broken.
    pub fn new(
        num_floors: usize,
        initial_floor: usize,
        passengers: Vec<Passenger>,
        timing: TimingParams,
    ) -> Result<Self> {
        let instance = Self {
            num_floors,
            initial_floor,
            passengers,
            timing,
        };
        instance.check()?;
        Ok(instance)
    }

    /// The 21-floor, 10-passenger reference scenario.
    pub fn case_study() -> Self {
        const CALLS: [(usize, usize); 10] = [
            (5, 9),
            (6, 7),
            (3, 15),
            (11, 0),
            (20, 8),
            (10, 17),
            (13, 19),
            (1, 14),
            (16, 2),
            (18, 12),
        ];
        Self {
            num_floors: 21,
            initial_floor: 4,
            passengers: CALLS.iter().map(|&(c, d)| Passenger::new(c, d)).collect(),
            timing: TimingParams::new(2, 2, 5, 5),
        }
    }

    pub fn num_passengers(&self) -> usize {
        self.passengers.len()
    }

    /// Returns every violated invariant; empty means the instance is valid.
    pub fn validate(&self) -> Vec<Violation> {
        let mut violations = Vec::new();
        let f = self.num_floors;
        if f < 2 {
            violations.push(Violation::TooFewFloors { num_floors: f });
        }
        if self.passengers.is_empty() {
            violations.push(Violation::NoPassengers);
        }
        if self.initial_floor >= f {
            violations.push(Violation::InitialFloorOutOfRange {
                floor: self.initial_floor,
            });
        }

        let mut uses = vec![0usize; f];
        for (i, p) in self.passengers.iter().enumerate() {
            let mut floors = vec![p.call_floor];
            if p.call_floor == p.destination_floor {
                violations.push(Violation::CallEqualsDestination {
                    passenger: i,
                    floor: p.call_floor,
                });
            } else {
                floors.push(p.destination_floor);
            }
            for floor in floors {
                if floor >= f {
                    violations.push(Violation::FloorOutOfRange {
                        passenger: i,
                        floor,
                    });
                    continue;
                }
                uses[floor] += 1;
                if floor == self.initial_floor {
                    violations.push(Violation::EventAtInitialFloor {
                        passenger: i,
                        floor,
                    });
                }
            }
        }
        violations.extend(
            uses.iter()
                .enumerate()
                .filter(|(_, &n)| n > 1)
                .map(|(floor, _)| Violation::DuplicateEventFloor { floor }),
        );
        violations
    }

    pub fn check(&self) -> Result<()> {
        let violations = self.validate();
        if violations.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidInstance(violations))
        }
    }

    /// Floors other than the starting floor, ascending. These are the slots a
    /// route tail permutes.
    pub fn tail_floors(&self) -> Vec<usize> {
        (0..self.num_floors)
            .filter(|&f| f != self.initial_floor)
            .collect()
    }
}

/// Elevator visiting order over all floors. `stops[0]` is always the starting floor.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Route {
    stops: Vec<usize>,
}

impl Route {
    /// Checks that `stops` is a permutation of the instance's floors headed by
    /// the starting floor.
    pub fn new(stops: Vec<usize>, instance: &ProblemInstance) -> Result<Self> {
        let f = instance.num_floors;
        if stops.len() != f {
            return Err(Error::InvalidRoute(format!(
                "expected {f} stops, got {}",
                stops.len()
            )));
        }
        let mut seen = vec![false; f];
        for &s in &stops {
            if s >= f || std::mem::replace(&mut seen[s], true) {
                return Err(Error::InvalidRoute(format!(
                    "{stops:?} is not a permutation of 0..{f}"
                )));
            }
        }
        if stops[0] != instance.initial_floor {
            return Err(Error::InvalidRoute(format!(
                "route starts at floor {} but the elevator starts at floor {}",
                stops[0], instance.initial_floor
            )));
        }
        Ok(Self { stops })
    }

    /// Prepends the starting floor to `tail`.
    pub fn from_tail(tail: &[usize], instance: &ProblemInstance) -> Result<Self> {
        let mut stops = Vec::with_capacity(tail.len() + 1);
        stops.push(instance.initial_floor);
        stops.extend_from_slice(tail);
        Self::new(stops, instance)
    }

    /// Caller guarantees the permutation and head invariants.
    pub(crate) fn from_stops_unchecked(stops: Vec<usize>) -> Self {
        Self { stops }
    }

    pub fn stops(&self) -> &[usize] {
        &self.stops
    }

    pub fn tail(&self) -> &[usize] {
        &self.stops[1..]
    }

    pub fn len(&self) -> usize {
        self.stops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.stops.is_empty()
    }

    pub fn into_stops(self) -> Vec<usize> {
        self.stops
    }

    /// `positions()[floor]` is the index of `floor` in the route.
    pub fn positions(&self) -> Vec<usize> {
        let mut pos = vec![0; self.stops.len()];
        for (i, &s) in self.stops.iter().enumerate() {
            pos[s] = i;
        }
        pos
    }

    pub(crate) fn swap(&mut self, i: usize, j: usize) {
        self.stops.swap(i, j);
    }
}

impl fmt::Display for Route {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, s) in self.stops.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{s}")?;
        }
        f.write_str("]")
    }
}

/// True when every passenger is picked up before being dropped off.
pub fn is_feasible(route: &Route, instance: &ProblemInstance) -> bool {
    if route.len() != instance.num_floors {
        return false;
    }
    let pos = route.positions();
    instance
        .passengers
        .iter()
        .all(|p| pos[p.call_floor] < pos[p.destination_floor])
}

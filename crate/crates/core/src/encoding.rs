//! Continuous-to-route decoders and route neighborhoods.
//!
//! A continuous position has one component per non-starting floor; slot `i`
//! stands for the `i`-th floor of [`ProblemInstance::tail_floors`]. The
//! decoders order slots by value, prepend the starting floor and repair the
//! result, so every decoded route is feasible.

use std::cmp::Ordering;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::cost::{fitness, repair_route};
use crate::error::{Error, Result};
use crate::problem::{ProblemInstance, Route};

/// Smallest position value: slots in ascending order of value, ties by slot index.
pub fn spv_decode(values: &[f64], instance: &ProblemInstance) -> Result<Route> {
    decode(values, instance, |a, b| a.total_cmp(b))
}

/// Great value priority: slots in descending order of value, ties by slot index.
pub fn gvp_decode(values: &[f64], instance: &ProblemInstance) -> Result<Route> {
    decode(values, instance, |a, b| b.total_cmp(a))
}

fn decode(
    values: &[f64],
    instance: &ProblemInstance,
    order: impl Fn(&f64, &f64) -> Ordering,
) -> Result<Route> {
    let floors = instance.tail_floors();
    if values.len() != floors.len() {
        return Err(Error::PositionLength {
            expected: floors.len(),
            got: values.len(),
        });
    }
    let mut slots: Vec<usize> = (0..values.len()).collect();
    // stable sort keeps equal values in slot order
    slots.sort_by(|&a, &b| order(&values[a], &values[b]));

    let mut stops = Vec::with_capacity(instance.num_floors);
    stops.push(instance.initial_floor);
    stops.extend(slots.into_iter().map(|s| floors[s]));
    Ok(repair_route(&Route::from_stops_unchecked(stops), instance))
}

/// Rearranges `values` so that [`gvp_decode`] yields `route`: the floor at
/// tail position `k` receives the `k`-th largest value. Exact when the
/// values are distinct and `route` is feasible.
pub fn gvp_encode(route: &Route, values: &[f64], instance: &ProblemInstance) -> Result<Vec<f64>> {
    let floors = instance.tail_floors();
    if values.len() != floors.len() {
        return Err(Error::PositionLength {
            expected: floors.len(),
            got: values.len(),
        });
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let slot_of = |floor: usize| {
        if floor < instance.initial_floor {
            floor
        } else {
            floor - 1
        }
    };
    let mut encoded = vec![0.0; values.len()];
    for (k, &floor) in route.tail().iter().enumerate() {
        encoded[slot_of(floor)] = sorted[k];
    }
    Ok(encoded)
}

/// Uniformly shuffled tail, repaired.
pub fn random_route<R: Rng + ?Sized>(instance: &ProblemInstance, rng: &mut R) -> Route {
    let mut tail = instance.tail_floors();
    tail.shuffle(rng);
    let mut stops = Vec::with_capacity(instance.num_floors);
    stops.push(instance.initial_floor);
    stops.extend(tail);
    repair_route(&Route::from_stops_unchecked(stops), instance)
}

/// Two distinct tail positions, uniform over pairs.
pub(crate) fn sample_tail_pair<R: Rng + ?Sized>(len: usize, rng: &mut R) -> Result<(usize, usize)> {
    if len < 3 {
        return Err(Error::TooShort { len, min: 3 });
    }
    let i = rng.random_range(1..len);
    let mut j = rng.random_range(1..len - 1);
    if j >= i {
        j += 1;
    }
    Ok((i, j))
}

/// Swaps two random tail stops and repairs. The head never moves.
pub fn random_swap<R: Rng + ?Sized>(
    route: &Route,
    instance: &ProblemInstance,
    rng: &mut R,
) -> Result<Route> {
    let (i, j) = sample_tail_pair(route.len(), rng)?;
    let mut next = route.clone();
    next.swap(i, j);
    Ok(repair_route(&next, instance))
}

/// One random tail 2-swap, kept only if it strictly lowers fitness.
pub fn local_search_2swap<R: Rng + ?Sized>(
    route: &Route,
    instance: &ProblemInstance,
    rng: &mut R,
) -> Result<Route> {
    let current = fitness(route, instance)?;
    Ok(try_improving_swap(route, current, instance, rng)?.0)
}

/// As [`local_search_2swap`] with the input's fitness already known. Returns
/// the kept route and its fitness.
pub(crate) fn try_improving_swap<R: Rng + ?Sized>(
    route: &Route,
    current: f64,
    instance: &ProblemInstance,
    rng: &mut R,
) -> Result<(Route, f64)> {
    let candidate = random_swap(route, instance, rng)?;
    let f = fitness(&candidate, instance)?;
    if f < current {
        Ok((candidate, f))
    } else {
        Ok((route.clone(), current))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::{is_feasible, Passenger, TimingParams};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn inst(num_floors: usize, initial: usize, calls: &[(usize, usize)]) -> ProblemInstance {
        ProblemInstance {
            num_floors,
            initial_floor: initial,
            passengers: calls.iter().map(|&(c, d)| Passenger::new(c, d)).collect(),
            timing: TimingParams::default(),
        }
    }

    #[test]
    fn spv_examples() {
        let i = inst(4, 0, &[]);
        assert_eq!(
            spv_decode(&[0.5, -1.2, 3.3], &i).unwrap().stops(),
            &[0, 2, 1, 3]
        );
        assert_eq!(
            spv_decode(&[1.0, 2.0, 3.0], &i).unwrap().stops(),
            &[0, 1, 2, 3]
        );
        let i = inst(3, 0, &[]);
        assert_eq!(spv_decode(&[2.0, 2.0], &i).unwrap().stops(), &[0, 1, 2]);
    }

    #[test]
    fn gvp_examples() {
        let i = inst(4, 0, &[]);
        assert_eq!(
            gvp_decode(&[2.1, 9.9, 0.4], &i).unwrap().stops(),
            &[0, 2, 1, 3]
        );
        assert_eq!(
            gvp_decode(&[3.0, 2.0, 1.0], &i).unwrap().stops(),
            &[0, 1, 2, 3]
        );
        let x = [0.3, -4.0, 7.5];
        let neg: Vec<f64> = x.iter().map(|v| -v).collect();
        assert_eq!(gvp_decode(&x, &i).unwrap(), spv_decode(&neg, &i).unwrap());
    }

    #[test]
    fn slots_skip_initial_floor() {
        // floors {0, 1, 3} when starting at 2
        let i = inst(4, 2, &[]);
        assert_eq!(
            spv_decode(&[3.0, 1.0, 2.0], &i).unwrap().stops(),
            &[2, 1, 3, 0]
        );
    }

    #[test]
    fn decode_repairs_and_checks_length() {
        let i = inst(3, 0, &[(1, 2)]);
        assert_eq!(spv_decode(&[5.0, 1.0], &i).unwrap().stops(), &[0, 1, 2]);
        assert_eq!(
            spv_decode(&[1.0], &i).unwrap_err(),
            Error::PositionLength {
                expected: 2,
                got: 1
            }
        );
    }

    #[test]
    fn gvp_encode_round_trips() {
        let i = inst(6, 3, &[(0, 5), (2, 1)]);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let route = random_route(&i, &mut rng);
            let values: Vec<f64> = (0..5).map(|_| rng.random::<f64>()).collect();
            let encoded = gvp_encode(&route, &values, &i).unwrap();
            assert_eq!(gvp_decode(&encoded, &i).unwrap(), route);
        }
    }

    #[test]
    fn random_swap_keeps_head_and_is_reproducible() {
        let i = inst(6, 2, &[(0, 5)]);
        let r = random_route(&i, &mut ChaCha8Rng::seed_from_u64(1));
        let a = random_swap(&r, &i, &mut ChaCha8Rng::seed_from_u64(9)).unwrap();
        let b = random_swap(&r, &i, &mut ChaCha8Rng::seed_from_u64(9)).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.stops()[0], 2);
        assert!(is_feasible(&a, &i));

        let tiny = inst(2, 0, &[]);
        let r = Route::new(vec![0, 1], &tiny).unwrap();
        assert!(matches!(
            random_swap(&r, &tiny, &mut ChaCha8Rng::seed_from_u64(0)),
            Err(Error::TooShort { .. })
        ));
    }

    #[test]
    fn three_floor_swap_is_the_only_tail_swap() {
        let i = inst(3, 0, &[]);
        let r = Route::new(vec![0, 1, 2], &i).unwrap();
        let s = random_swap(&r, &i, &mut ChaCha8Rng::seed_from_u64(4)).unwrap();
        assert_eq!(s.stops(), &[0, 2, 1]);
    }

    #[test]
    fn local_search_never_worsens() {
        let i = inst(5, 0, &[(1, 2), (3, 4)]);
        let start = Route::new(vec![0, 3, 4, 1, 2], &i).unwrap();
        assert_eq!(fitness(&start, &i).unwrap(), 45.0);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut improved = false;
        for _ in 0..200 {
            let out = local_search_2swap(&start, &i, &mut rng).unwrap();
            let f = fitness(&out, &i).unwrap();
            assert!(f <= 45.0);
            improved |= f < 45.0;
        }
        assert!(improved);

        let optimum = Route::new(vec![0, 1, 2, 3, 4], &i).unwrap();
        for _ in 0..50 {
            assert_eq!(local_search_2swap(&optimum, &i, &mut rng).unwrap(), optimum);
        }
    }
}

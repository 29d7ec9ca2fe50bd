use elevator_dispatch::algorithms::{ox_crossover, swap_mutation};
use elevator_dispatch::cost::{evaluate_all, evaluate_passenger, fitness, repair_route};
use elevator_dispatch::encoding::{
    gvp_decode, local_search_2swap, random_route, random_swap, spv_decode,
};
use elevator_dispatch::oracle::{
    exhaustive_best, random_instance, simulate_route, DEFAULT_MAX_FLOORS,
};
use elevator_dispatch::problem::is_feasible;
use elevator_dispatch::{ProblemInstance, Route};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// (instance, any permutation route) from a seed, F in [3, 9], n in [1, 3].
fn instance_and_route(seed: u64) -> (ProblemInstance, Route) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let floors = 3 + (seed % 7) as usize;
    let max_n = ((floors - 1) / 2).min(3);
    let n = 1 + (seed / 7 % max_n as u64) as usize;
    let instance = random_instance(&mut rng, floors, n);
    let mut tail = instance.tail_floors();
    tail.shuffle(&mut rng);
    let route = Route::from_tail(&tail, &instance).unwrap();
    (instance, route)
}

fn assert_valid(route: &Route, instance: &ProblemInstance) {
    let mut sorted = route.stops().to_vec();
    sorted.sort_unstable();
    assert_eq!(sorted, (0..instance.num_floors).collect::<Vec<_>>());
    assert_eq!(route.stops()[0], instance.initial_floor);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn simulation_matches_closed_form(seed in any::<u64>()) {
        let (instance, raw) = instance_and_route(seed);
        let route = repair_route(&raw, &instance);
        let sim = simulate_route(&route, &instance).unwrap();
        for p in 0..instance.num_passengers() {
            prop_assert_eq!(sim.times[p], evaluate_passenger(&route, p, &instance).unwrap());
        }
    }

    #[test]
    fn timeline_is_ordered_and_sums_up(seed in any::<u64>()) {
        let (instance, raw) = instance_and_route(seed);
        let route = repair_route(&raw, &instance);
        let sim = simulate_route(&route, &instance).unwrap();
        prop_assert!(sim.timeline.windows(2).all(|w| w[0].time_s <= w[1].time_s));
        let travel: u64 = route.stops().windows(2).map(|w| w[0].abs_diff(w[1]) as u64).sum();
        let event_stops = 2 * instance.num_passengers() as u64;
        prop_assert_eq!(
            sim.duration_s(),
            instance.timing.between_floors_time_s * travel + event_stops * instance.timing.load_time()
        );
    }

    #[test]
    fn passenger_order_does_not_matter(seed in any::<u64>()) {
        let (instance, raw) = instance_and_route(seed);
        let route = repair_route(&raw, &instance);
        let mut shuffled = instance.clone();
        shuffled.passengers.shuffle(&mut ChaCha8Rng::seed_from_u64(seed ^ 1));
        prop_assert_eq!(is_feasible(&raw, &instance), is_feasible(&raw, &shuffled));
        prop_assert_eq!(fitness(&route, &instance).unwrap(), fitness(&route, &shuffled).unwrap());
    }

    #[test]
    fn scaling_timing_scales_times(seed in any::<u64>(), k in 1u64..6) {
        let (instance, raw) = instance_and_route(seed);
        let route = repair_route(&raw, &instance);
        let mut scaled = instance.clone();
        scaled.timing = instance.timing.scaled(k);
        let base = evaluate_all(&route, &instance).unwrap();
        let big = evaluate_all(&route, &scaled).unwrap();
        for (a, b) in base.iter().zip(&big) {
            prop_assert_eq!(b.waiting_s, k * a.waiting_s);
            prop_assert_eq!(b.destination_s, k * a.destination_s);
            prop_assert_eq!(b.journey_s, k * a.journey_s);
        }
        let (big_f, base_f) = (fitness(&route, &scaled).unwrap(), fitness(&route, &instance).unwrap());
        prop_assert!((big_f - k as f64 * base_f).abs() <= 1e-9 * big_f.max(1.0));
    }

    #[test]
    fn times_respect_door_bounds(seed in any::<u64>()) {
        let (instance, raw) = instance_and_route(seed);
        let route = repair_route(&raw, &instance);
        let t = instance.timing;
        for times in evaluate_all(&route, &instance).unwrap() {
            prop_assert!(times.waiting_s >= t.opening_time_s);
            prop_assert!(times.destination_s >= t.opening_time_s + t.closing_time_s);
            prop_assert_eq!(times.journey_s, times.waiting_s + times.destination_s);
        }
    }

    #[test]
    fn repair_is_feasible_idempotent_and_head_preserving(seed in any::<u64>()) {
        let (instance, raw) = instance_and_route(seed);
        let once = repair_route(&raw, &instance);
        assert_valid(&once, &instance);
        prop_assert!(is_feasible(&once, &instance));
        prop_assert_eq!(repair_route(&once, &instance), once.clone());
        if is_feasible(&raw, &instance) {
            prop_assert_eq!(once, raw);
        }
    }

    #[test]
    fn decoders_always_emit_feasible_routes(
        seed in any::<u64>(),
        raw in prop::collection::vec(prop_oneof![Just(0.0), Just(-1.0), -50.0f64..50.0], 8),
    ) {
        let (instance, _) = instance_and_route(seed);
        let values = &raw[..instance.num_floors - 1];
        for route in [spv_decode(values, &instance).unwrap(), gvp_decode(values, &instance).unwrap()] {
            assert_valid(&route, &instance);
            prop_assert!(is_feasible(&route, &instance));
        }
    }

    #[test]
    fn decoding_scale_invariance_and_duality(
        seed in any::<u64>(),
        raw in prop::collection::vec(-50.0f64..50.0, 8),
        k in 0.01f64..100.0,
    ) {
        let (instance, _) = instance_and_route(seed);
        let values = &raw[..instance.num_floors - 1];
        let scaled: Vec<f64> = values.iter().map(|v| v * k).collect();
        let negated: Vec<f64> = values.iter().map(|v| -v).collect();
        let mut distinct = values.to_vec();
        distinct.sort_by(f64::total_cmp);
        distinct.dedup();
        prop_assume!(distinct.len() == values.len());
        prop_assert_eq!(spv_decode(&scaled, &instance).unwrap(), spv_decode(values, &instance).unwrap());
        let flipped: Vec<f64> = values.iter().map(|v| -v * k).collect();
        prop_assert_eq!(spv_decode(&flipped, &instance).unwrap(), gvp_decode(values, &instance).unwrap());
        prop_assert_eq!(gvp_decode(values, &instance).unwrap(), spv_decode(&negated, &instance).unwrap());
    }

    #[test]
    fn ox_children_are_permutations(
        perm in Just((1..12usize).collect::<Vec<_>>()).prop_shuffle(),
        other in Just((1..12usize).collect::<Vec<_>>()).prop_shuffle(),
        a in 0usize..11, b in 0usize..11,
    ) {
        let (lo, hi) = (a.min(b), a.max(b));
        let child = ox_crossover(&perm, &other, lo, hi).unwrap();
        prop_assert_eq!(&child[lo..=hi], &perm[lo..=hi]);
        let mut sorted = child.clone();
        sorted.sort_unstable();
        prop_assert_eq!(sorted, (1..12).collect::<Vec<_>>());
        prop_assert_eq!(ox_crossover(&perm, &perm, lo, hi).unwrap(), perm.clone());
    }

    #[test]
    fn swaps_preserve_the_multiset(seed in any::<u64>()) {
        let (instance, raw) = instance_and_route(seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let genes = raw.tail().to_vec();
        let mutated = swap_mutation(&genes, &mut rng).unwrap();
        let diffs = genes.iter().zip(&mutated).filter(|(a, b)| a != b).count();
        prop_assert_eq!(diffs, 2);
        let swapped = random_swap(&raw, &instance, &mut rng).unwrap();
        assert_valid(&swapped, &instance);
        prop_assert!(is_feasible(&swapped, &instance));
    }

    #[test]
    fn local_search_never_worsens(seed in any::<u64>()) {
        let (instance, _) = instance_and_route(seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let route = random_route(&instance, &mut rng);
        let out = local_search_2swap(&route, &instance, &mut rng).unwrap();
        prop_assert!(fitness(&out, &instance).unwrap() <= fitness(&route, &instance).unwrap());
    }
}

#[test]
fn exhaustive_optimum_bounds_random_routes() {
    for seed in 0..20u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let instance = random_instance(&mut rng, 3 + (seed % 5) as usize, 1);
        let (best, best_f) = exhaustive_best(&instance, DEFAULT_MAX_FLOORS).unwrap();
        assert!(is_feasible(&best, &instance));
        assert_eq!(fitness(&best, &instance).unwrap(), best_f);
        for _ in 0..100 {
            let r = random_route(&instance, &mut rng);
            assert!(best_f <= fitness(&r, &instance).unwrap());
        }
    }
}

#[test]
fn exhaustive_ties_go_to_smallest_route() {
    // with zero timing every feasible route costs nothing
    let instance = ProblemInstance::new(
        5,
        2,
        vec![elevator_dispatch::Passenger::new(4, 0)],
        elevator_dispatch::TimingParams::new(0, 0, 0, 0),
    )
    .unwrap();
    let (route, f) = exhaustive_best(&instance, DEFAULT_MAX_FLOORS).unwrap();
    assert_eq!(f, 0.0);
    assert_eq!(route.stops(), &[2, 1, 3, 4, 0]);
}

//! Solvers without a reclaim order, checked against bounds and the brute force.

mod common;

use proptest::prelude::*;

use reclaim_core::bounds::{occupancy_decomposition, preemptive_bounds, single_reclaimer_lower_bound};
use reclaim_core::model::validate_schedule;
use reclaim_core::oracles::{oracle_two_free, SearchBudget};
use reclaim_core::preemptive_solver::{preemptive_schedule, split_point};
use reclaim_core::single_solver::forward_backward;
use reclaim_core::two_solver::{best_contiguous_unimodal, evaluate_pair, two_approximation, PairChoice};
use reclaim_core::{q, Mode, Reclaimer};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn forward_backward_meets_its_bound(seed in any::<u64>(), n in 0usize..30, pick in 0i64..40, si in 0usize..5) {
        let length = common::fit_length(n, pick, 1, 40);
        let inst = common::placed(seed, n, length, common::speed(si), false);
        let r = forward_backward(&inst).unwrap();
        prop_assert_eq!(r.makespan, single_reclaimer_lower_bound(&inst));
        prop_assert!(validate_schedule(&inst, &r.schedule, Mode::Free).is_empty());
    }

    #[test]
    fn decomposition_partitions_the_rail(seed in any::<u64>(), n in 0usize..20, pick in 0i64..30, si in 0usize..5) {
        let length = common::fit_length(n, pick, 1, 30);
        let inst = common::placed(seed, n, length, common::speed(si), false);
        let d = occupancy_decomposition(&inst);
        prop_assert_eq!(d.len_q1 + d.len_q2 + d.len_e, length);
        let mut all: Vec<(i64, i64)> = d.q1.iter().chain(&d.q2).chain(&d.e).copied().collect();
        all.sort();
        let mut at = 0;
        for (l, r) in all {
            prop_assert_eq!(l, at);
            prop_assert!(l < r);
            at = r;
        }
        prop_assert_eq!(at, length);
    }

    #[test]
    fn split_functions_are_monotone(seed in any::<u64>(), n in 0usize..16, pick in 0i64..30, si in 0usize..5) {
        let length = common::fit_length(n, pick, 1, 30);
        let inst = common::placed(seed, n, length, common::speed(si), false);
        let (x, f) = split_point(&inst);
        prop_assert!(x >= q(0) && x <= q(length));
        prop_assert_eq!(f.f[0], q(0));
        prop_assert_eq!(*f.g.last().unwrap(), q(0));
        for i in 1..f.xs.len() {
            prop_assert!(f.xs[i - 1] <= f.xs[i]);
            prop_assert!(f.f[i - 1] <= f.f[i]);
            prop_assert!(f.g[i - 1] >= f.g[i]);
        }
        for i in 0..f.xs.len() {
            prop_assert_eq!(f.f[i] + f.g[i], q(2) * f.k0());
        }
    }

    #[test]
    fn preemptive_schedule_attains_k_star(seed in any::<u64>(), n in 0usize..16, pick in 0i64..30, si in 0usize..5) {
        let length = common::fit_length(n, pick, 1, 30);
        let inst = common::placed(seed, n, length, common::speed(si), false);
        let b = preemptive_bounds(&inst);
        let r = preemptive_schedule(&inst).unwrap();
        prop_assert_eq!(r.makespan, b.k_star);
        prop_assert!(b.k_star <= b.k0);
        for &k in &b.k_per_gap {
            prop_assert!(b.k_star <= k);
        }
        prop_assert!(validate_schedule(&inst, &r.schedule, Mode::Preemptive).is_empty());
    }

    #[test]
    fn approximation_within_twice_k_star(seed in any::<u64>(), n in 0usize..16, pick in 0i64..30, si in 0usize..5) {
        let length = common::fit_length(n, pick, 1, 30);
        let inst = common::placed(seed, n, length, common::speed(si), false);
        let k = preemptive_bounds(&inst).k_star;
        let a = two_approximation(&inst).unwrap();
        prop_assert!(validate_schedule(&inst, &a.schedule, Mode::Free).is_empty());
        prop_assert!(a.makespan >= k);
        prop_assert!(a.makespan <= q(2) * k);
        let c = best_contiguous_unimodal(&inst).unwrap();
        prop_assert!(validate_schedule(&inst, &c.schedule, Mode::Free).is_empty());
        prop_assert!(c.makespan >= k);
    }

    #[test]
    fn best_pair_is_minimum_over_all_pairs(seed in any::<u64>(), n in 0usize..7, pick in 0i64..12, si in 0usize..5) {
        let length = common::fit_length(n, pick, 1, 12);
        let inst = common::placed(seed, n, length, common::speed(si), false);
        let best = best_contiguous_unimodal(&inst).unwrap().makespan;
        let (n1, n) = (inst.n1(), inst.n());
        let mut seen = None;
        for j in 0..=n1 {
            for j_prime in n1..=n {
                for (p, qq, k) in (0..8).map(|b| ((b & 1) as u8 + 1, ((b >> 1) & 1) as u8 + 1, b >> 2)) {
                    let choice = PairChoice { j, j_prime, p, q: qq, k: Reclaimer::from_index(k) };
                    if let Ok(r) = evaluate_pair(&inst, choice) {
                        prop_assert!(validate_schedule(&inst, &r.schedule, Mode::Free).is_empty());
                        prop_assert!(r.makespan >= best);
                        seen = Some(seen.map_or(r.makespan, |s: reclaim_core::Q| std::cmp::min(s, r.makespan)));
                    }
                }
            }
        }
        prop_assert_eq!(seen, Some(best));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn oracle_sits_between_k_star_and_heuristics(seed in any::<u64>(), n in 0usize..6, pick in 0i64..10, si in 0usize..5) {
        let length = common::fit_length(n, pick, 1, 10);
        let inst = common::placed(seed, n, length, common::speed(si), false);
        let k = preemptive_bounds(&inst).k_star;
        let o = oracle_two_free(&inst, &SearchBudget::default()).unwrap();
        prop_assert!(validate_schedule(&inst, &o.schedule, Mode::Free).is_empty());
        prop_assert!(k <= o.makespan);
        prop_assert!(o.makespan <= best_contiguous_unimodal(&inst).unwrap().makespan);
        prop_assert!(o.makespan <= two_approximation(&inst).unwrap().makespan);
    }
}

#[test]
fn two_full_pads_ratio() {
    let inst = reclaim_core::Instance::new(10, q(5), &[(0, 10)], &[(0, 10)]);
    let opt = oracle_two_free(&inst, &SearchBudget::default()).unwrap().makespan;
    let approx = two_approximation(&inst).unwrap().makespan;
    assert_eq!((approx, opt), (q(20), q(14)));
}

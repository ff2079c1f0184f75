mod common;

use cdock::exact::DEFAULT_MAX_N;
use cdock::{
    blocks, bounds_report, check_feasible, compute_q, gen_d2, gen_random, gen_tight, greedy_order, lemma1_bound,
    lower_bound, search_space_size, solve_exact, solve_exact_with, solve_greedy, solve_pd2, ExactConfig, Instance,
    Probability, TightParams,
};
use num_bigint::BigUint;
use num_rational::Ratio;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(250))]

    #[test]
    fn greedy_sandwich_and_certificate(inst in common::instance_strategy(7, 7)) {
        let report = bounds_report(&inst);
        let exact = solve_exact(&inst, DEFAULT_MAX_N).unwrap().optimal_makespan as u64;
        let greedy = solve_greedy(&inst);
        prop_assert!(check_feasible(&inst, &greedy).is_feasible());
        let greedy = greedy.makespan() as u64;
        prop_assert!(report.lower_bound <= exact);
        prop_assert!(exact <= greedy);
        prop_assert!(greedy <= report.greedy_upper);
        prop_assert!(Ratio::new(greedy, exact) <= report.ratio_bound);
        prop_assert!(report.ratio_bound >= Ratio::from_integer(1));
    }

    #[test]
    fn greedy_order_is_a_deterministic_permutation(inst in common::instance_strategy(12, 12)) {
        let a = greedy_order(&inst);
        let b = greedy_order(&inst);
        prop_assert_eq!(&a, &b);
        let mut sorted = a.as_slice().to_vec();
        sorted.sort();
        prop_assert_eq!(sorted, (0..inst.n()).collect::<Vec<_>>());
        // Out-degree never increases along the order.
        let degs: Vec<usize> = a.as_slice().iter().map(|&i| inst.out_degree(i)).collect();
        prop_assert!(degs.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn pd2_is_optimal_and_blocks_are_well_formed(inst in common::d2_strategy(7, 8)) {
        let sol = solve_pd2(&inst).unwrap();
        prop_assert!(check_feasible(&inst, &sol.schedule).is_feasible());
        let mut a_starts = sol.schedule.start_a.clone();
        a_starts.sort();
        prop_assert_eq!(a_starts, (0..inst.n() as i64).collect::<Vec<_>>());

        let ms = sol.schedule.makespan() as u64;
        prop_assert_eq!(ms, lemma1_bound(&inst).unwrap());
        prop_assert_eq!(ms, solve_exact(&inst, DEFAULT_MAX_N).unwrap().optimal_makespan as u64);

        let bl = blocks(&inst, &sol.trace).unwrap();
        prop_assert!(bl.windows(2).all(|w| w[0].label < w[1].label));
        for b in &bl {
            if b.a_ops.is_empty() {
                prop_assert_eq!(b.label, 0);
            } else {
                prop_assert_eq!(b.offset_len, b.label);
            }
            if b.label >= 2 {
                prop_assert!((1..=2).contains(&b.overhang_len), "block {:?}", b);
                prop_assert!((1..=2).contains(&b.tail_len), "block {:?}", b);
            }
        }
        let last = bl.iter().rev().find(|b| !b.a_ops.is_empty()).unwrap();
        prop_assert_eq!(last.overhang_len, 2);
        if last.label >= 2 {
            prop_assert_eq!(last.tail_len, 2);
        }
    }

    #[test]
    fn pruning_does_not_change_the_optimum(inst in common::instance_strategy(6, 6)) {
        let pruned = solve_exact(&inst, DEFAULT_MAX_N).unwrap();
        let full = solve_exact_with(&inst, ExactConfig { max_n: DEFAULT_MAX_N, prune_symmetric: false }).unwrap();
        prop_assert_eq!(pruned.optimal_makespan, full.optimal_makespan);
        prop_assert_eq!(&pruned.permutation, &full.permutation);
        prop_assert_eq!(BigUint::from(pruned.permutations_examined), search_space_size(&inst));
        prop_assert!(check_feasible(&inst, &pruned.schedule).is_feasible());
    }
}

#[test]
fn tight_family_attains_the_bound() {
    for (k, l, s) in [(3, 2, 3), (4, 3, 3), (5, 2, 4)] {
        let p = TightParams::new(k, l, s).unwrap();
        let inst = gen_tight(p);
        let greedy = solve_greedy(&inst);
        assert!(check_feasible(&inst, &greedy).is_feasible());
        let report = bounds_report(&inst);
        assert_eq!(greedy.makespan() as u64, p.greedy_makespan());
        assert_eq!(report.greedy_upper, p.greedy_makespan());
        assert_eq!(report.lower_bound, p.optimum());
        assert_eq!(compute_q(&inst, &greedy_order(&inst)), l + 1);
        assert_eq!(report.ratio_bound, Ratio::new(p.greedy_makespan(), p.optimum()));
        if inst.n() <= DEFAULT_MAX_N {
            let exact = solve_exact(&inst, DEFAULT_MAX_N).unwrap();
            assert_eq!(exact.optimal_makespan as u64, p.optimum(), "TF({k},{l},{s})");
        }
    }
}

#[test]
fn tight_family_optimum_by_construction() {
    // K block first, then L, then S: feasible and of length 2k+s+1.
    for (k, l, s) in [(5, 2, 4), (5, 3, 4), (6, 2, 5), (8, 8, 3)] {
        let p = TightParams::new(k, l, s).unwrap();
        let inst = gen_tight(p);
        let pi = cdock::Permutation::identity(inst.n());
        let sched = cdock::complete_m2_erd(&inst, &pi);
        assert!(check_feasible(&inst, &sched).is_feasible());
        assert_eq!(sched.makespan() as u64, p.optimum());
        assert_eq!(lower_bound(&inst), p.optimum());
    }
}

#[test]
fn generators_are_deterministic() {
    let p = Probability::new(2, 5).unwrap();
    for seed in 0..20 {
        assert_eq!(gen_random(6, 5, p, seed).unwrap(), gen_random(6, 5, p, seed).unwrap());
        assert_eq!(gen_d2(6, 7, 2, seed).unwrap(), gen_d2(6, 7, 2, seed).unwrap());
    }
}

#[test]
fn permutation_reduction_matches_schedule_space_search() {
    let mut checked = 0;
    for seed in 0..40u64 {
        let n = 1 + (seed as usize % 4);
        let m = 1 + (seed as usize * 3 % 4);
        let inst = gen_random(n, m, Probability::new(1 + seed % 3, 4).unwrap(), seed).unwrap();
        let (opt, sched) = common::schedule_space_optimum(&inst, n + m).unwrap();
        assert!(check_feasible(&inst, &sched).is_feasible());
        assert_eq!(sched.makespan(), opt);
        assert_eq!(solve_exact(&inst, DEFAULT_MAX_N).unwrap().optimal_makespan, opt, "seed {seed}");
        checked += 1;
    }
    assert_eq!(checked, 40);
}

#[test]
fn cex_printed_bound_exceeds_optimum() {
    let inst = cdock::fixtures::cex();
    let (opt, _) = common::schedule_space_optimum(&inst, 4).unwrap();
    assert_eq!(opt, 3);
    let report = bounds_report(&inst);
    assert_eq!(report.lower_bound, 3);
    assert_eq!(report.lower_bound_printed, 4);
}

#[test]
fn adding_arcs_never_lowers_the_optimum() {
    for seed in 0..30u64 {
        let mut inst = gen_random(5, 5, Probability::new(1, 5).unwrap(), seed).unwrap();
        let mut prev = solve_exact(&inst, DEFAULT_MAX_N).unwrap().optimal_makespan;
        // Add missing arcs in a seed-dependent order.
        let mut missing: Vec<(usize, usize)> =
            (0..25).map(|k| (k / 5, k % 5)).filter(|&(i, j)| !inst.has_arc(i, j)).collect();
        let shift = seed as usize % missing.len().max(1);
        missing.rotate_left(shift);
        for (i, j) in missing.into_iter().step_by(2) {
            inst = inst.with_arc(i, j).unwrap();
            let cur = solve_exact(&inst, DEFAULT_MAX_N).unwrap().optimal_makespan;
            assert!(cur >= prev, "seed {seed}: {prev} -> {cur}");
            prev = cur;
        }
    }
}

#[test]
fn exact_rejects_large_instances() {
    let inst = Instance::new(12, 3, []).unwrap();
    assert!(solve_exact(&inst, DEFAULT_MAX_N).is_err());
}

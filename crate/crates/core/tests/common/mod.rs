//! Test-only oracles, independent of the library's solvers.
#![allow(dead_code)]

use cdock::{Instance, Schedule, Time};
use proptest::prelude::*;

/// Optimum over every integer schedule whose start times are at most
/// `horizon`, by a time-indexed search over (finished A set, finished B set).
/// Each unit step may start at most one unfinished A and at most one unfinished
/// B whose predecessors finished strictly earlier. No assumption about idle
/// time or machine-2 order is made.
///
/// Returns `None` when nothing fits the horizon.
pub fn schedule_space_optimum(inst: &Instance, horizon: usize) -> Option<(Time, Schedule)> {
    let (n, m) = (inst.n(), inst.m());
    assert!(n + m <= 20, "state space too large for the oracle");
    let pred_mask: Vec<u32> = (0..m)
        .map(|j| inst.pred(j).iter().fold(0u32, |acc, &i| acc | (1 << i)))
        .collect();
    let full_a = (1u32 << n) - 1;
    let full_b = (1u32 << m) - 1;
    let key = |a: u32, b: u32| ((a as usize) << m) | b as usize;
    let states = 1usize << (n + m);

    // layers[t][state] = (previous state, started A, started B)
    type Back = Option<(usize, Option<usize>, Option<usize>)>;
    let mut layers: Vec<Vec<Back>> = Vec::new();
    let mut frontier = vec![false; states];
    frontier[key(0, 0)] = true;

    for t in 0..=horizon + 1 {
        if frontier[key(full_a, full_b)] {
            // Reconstruct.
            let mut start_a = vec![0; n];
            let mut start_b = vec![0; m];
            let mut cur = key(full_a, full_b);
            for step in (0..t).rev() {
                let (prev, a, b) = layers[step][cur].expect("reachable");
                if let Some(a) = a {
                    start_a[a] = step as Time;
                }
                if let Some(b) = b {
                    start_b[b] = step as Time;
                }
                cur = prev;
            }
            return Some((t as Time, Schedule { start_a, start_b }));
        }
        if t == horizon + 1 {
            break;
        }
        let mut next = vec![false; states];
        let mut back: Vec<Back> = vec![None; states];
        for (s, _) in frontier.iter().enumerate().filter(|(_, &reached)| reached) {
            let done_a = (s >> m) as u32;
            let done_b = (s & ((1 << m) - 1)) as u32;
            let a_choices = std::iter::once(None).chain((0..n).filter(|&i| done_a & (1 << i) == 0).map(Some));
            for a in a_choices {
                let na = done_a | a.map_or(0, |i| 1 << i);
                let b_choices = std::iter::once(None).chain(
                    (0..m)
                        .filter(|&j| done_b & (1 << j) == 0 && pred_mask[j] & !done_a == 0)
                        .map(Some),
                );
                for b in b_choices {
                    let nb = done_b | b.map_or(0, |j| 1 << j);
                    let k = key(na, nb);
                    if !next[k] {
                        next[k] = true;
                        back[k] = Some((s, a, b));
                    }
                }
            }
        }
        layers.push(back);
        frontier = next;
    }
    None
}

/// Arbitrary instance with `1..=max_n` A's and `1..=max_m` B's; a random
/// density in `{0, 1/4, 1/2, 3/4}` and per-arc coin flips against it.
pub fn instance_strategy(max_n: usize, max_m: usize) -> impl Strategy<Value = Instance> {
    (1..=max_n, 1..=max_m)
        .prop_flat_map(|(n, m)| (Just(n), Just(m), 0u8..4, prop::collection::vec(0u8..4, n * m)))
        .prop_map(|(n, m, density, draws)| {
            let arcs = draws.iter().enumerate().filter(|(_, &d)| d < density).map(|(k, _)| (k / m, k % m));
            Instance::new(n, m, arcs).unwrap()
        })
}

/// Arbitrary two-successor instance with `1..=max_n` A's and `2..=max_m` B's.
pub fn d2_strategy(max_n: usize, max_m: usize) -> impl Strategy<Value = Instance> {
    (1..=max_n, 2..=max_m)
        .prop_flat_map(|(n, m)| (Just(n), Just(m), 0..=m - 2, any::<u64>()))
        .prop_map(|(n, m, p, seed)| cdock::gen_d2(n, m, p, seed).unwrap())
}

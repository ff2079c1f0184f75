//! Exhaustive solver over machine-1 orders.
//!
//! Machine 1 never idles in some optimal schedule and, for a fixed machine-1
//! order, the earliest-release-date rule completes machine 2 optimally, so
//! enumerating machine-1 orders is enough. Operations with identical successor
//! sets are interchangeable; only orders in which each such group appears in
//! ascending index order are visited.

use std::collections::HashMap;

use num_bigint::BigUint;
use rayon::prelude::*;
use thiserror::Error;

use crate::instance::Instance;
use crate::schedule::{complete_m2_erd, Permutation, Schedule, Time};

pub const DEFAULT_MAX_N: usize = 10;

/// Below this `n` the search runs on the calling thread.
const PARALLEL_FROM_N: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("instance too large for exhaustive search: n = {n} > {max_n}")]
    TooLarge { n: usize, max_n: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExactConfig {
    pub max_n: usize,
    /// Skip orders that only swap operations with identical successor sets.
    pub prune_symmetric: bool,
}

impl Default for ExactConfig {
    fn default() -> Self {
        ExactConfig {
            max_n: DEFAULT_MAX_N,
            prune_symmetric: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactResult {
    pub schedule: Schedule,
    pub optimal_makespan: Time,
    /// The lexicographically smallest optimal machine-1 order visited.
    pub permutation: Permutation,
    pub permutations_examined: u64,
}

/// Group id per `A`: operations with equal successor sets share an id.
fn symmetry_groups(inst: &Instance, prune: bool) -> Vec<usize> {
    if !prune {
        return (0..inst.n()).collect();
    }
    let mut ids: HashMap<&[usize], usize> = HashMap::new();
    (0..inst.n())
        .map(|i| {
            let next = ids.len();
            *ids.entry(inst.succ(i)).or_insert(next)
        })
        .collect()
}

/// `n! / prod(k!)` over groups of `k` operations with identical successor sets.
pub fn search_space_size(inst: &Instance) -> BigUint {
    let groups = symmetry_groups(inst, true);
    let mut sizes = vec![0u32; inst.n()];
    for g in groups {
        sizes[g] += 1;
    }
    // Product of binomials C(placed + k, k) keeps the intermediates exact.
    let mut total = BigUint::from(1u32);
    let mut placed = 0u32;
    for k in sizes.into_iter().filter(|&k| k > 0) {
        for t in 1..=k {
            total *= placed + t;
            total /= t;
        }
        placed += k;
    }
    total
}

struct Search<'a> {
    inst: &'a Instance,
    /// `prev_in_group[i]`: the next-lower index in `A_i`'s group, which must be
    /// placed before `A_i`.
    prev_in_group: Vec<Option<usize>>,
    placed: Vec<bool>,
    order: Vec<usize>,
    release: Vec<usize>,
    bucket: Vec<usize>,
    best: Option<(Time, Vec<usize>)>,
    leaves: u64,
}

impl<'a> Search<'a> {
    fn new(inst: &'a Instance, prune: bool) -> Self {
        let group = symmetry_groups(inst, prune);
        let mut last: HashMap<usize, usize> = HashMap::new();
        let prev_in_group = (0..inst.n()).map(|i| last.insert(group[i], i)).collect();
        Search {
            inst,
            prev_in_group,
            placed: vec![false; inst.n()],
            order: Vec::with_capacity(inst.n()),
            release: vec![0; inst.m()],
            bucket: vec![0; inst.n() + 1],
            best: None,
            leaves: 0,
        }
    }

    fn eligible(&self, i: usize) -> bool {
        !self.placed[i] && self.prev_in_group[i].is_none_or(|p| self.placed[p])
    }

    fn place(&mut self, i: usize) -> Vec<usize> {
        let slot = self.order.len();
        self.placed[i] = true;
        self.order.push(i);
        let saved: Vec<usize> = self.inst.succ(i).iter().map(|&j| self.release[j]).collect();
        for &j in self.inst.succ(i) {
            self.release[j] = slot + 1;
        }
        saved
    }

    fn unplace(&mut self, i: usize, saved: Vec<usize>) {
        for (&j, r) in self.inst.succ(i).iter().zip(saved) {
            self.release[j] = r;
        }
        self.order.pop();
        self.placed[i] = false;
    }

    /// Earliest-release-date makespan of the current full order.
    fn leaf_makespan(&mut self) -> Time {
        self.bucket.iter_mut().for_each(|c| *c = 0);
        for &r in &self.release {
            self.bucket[r] += 1;
        }
        let mut t = 0usize;
        for (r, &count) in self.bucket.iter().enumerate() {
            if count > 0 {
                t = t.max(r) + count;
            }
        }
        t.max(self.inst.n()) as Time
    }

    fn dfs(&mut self) {
        if self.order.len() == self.inst.n() {
            self.leaves += 1;
            let ms = self.leaf_makespan();
            if self.best.as_ref().is_none_or(|(b, _)| ms < *b) {
                self.best = Some((ms, self.order.clone()));
            }
            return;
        }
        for i in 0..self.inst.n() {
            if self.eligible(i) {
                let saved = self.place(i);
                self.dfs();
                self.unplace(i, saved);
            }
        }
    }

    fn subtree(mut self, first: usize) -> (Option<(Time, Vec<usize>)>, u64) {
        let saved = self.place(first);
        self.dfs();
        self.unplace(first, saved);
        (self.best, self.leaves)
    }
}

pub fn solve_exact(inst: &Instance, max_n: usize) -> Result<ExactResult, ExactError> {
    solve_exact_with(
        inst,
        ExactConfig {
            max_n,
            ..ExactConfig::default()
        },
    )
}

pub fn solve_exact_with(inst: &Instance, cfg: ExactConfig) -> Result<ExactResult, ExactError> {
    if inst.n() > cfg.max_n {
        return Err(ExactError::TooLarge {
            n: inst.n(),
            max_n: cfg.max_n,
        });
    }
    let root = Search::new(inst, cfg.prune_symmetric);
    let firsts: Vec<usize> = (0..inst.n()).filter(|&i| root.eligible(i)).collect();
    let run = |&first: &usize| Search::new(inst, cfg.prune_symmetric).subtree(first);
    // Subtrees come back in first-element order, so keeping the first strict
    // minimum reproduces the sequential result.
    let parts: Vec<_> = if inst.n() >= PARALLEL_FROM_N {
        firsts.par_iter().map(run).collect()
    } else {
        firsts.iter().map(run).collect()
    };
    let mut best: Option<(Time, Vec<usize>)> = None;
    let mut examined = 0;
    for (part, leaves) in parts {
        examined += leaves;
        if let Some((ms, order)) = part {
            if best.as_ref().is_none_or(|(b, _)| ms < *b) {
                best = Some((ms, order));
            }
        }
    }
    let (optimal_makespan, order) = best.expect("n >= 1 yields at least one order");
    let permutation = Permutation::new(order, inst.n()).expect("search visits permutations");
    let schedule = complete_m2_erd(inst, &permutation);
    debug_assert_eq!(schedule.makespan(), optimal_makespan);
    Ok(ExactResult {
        schedule,
        optimal_makespan,
        permutation,
        permutations_examined: examined,
    })
}

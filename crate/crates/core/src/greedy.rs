//! Degree-greedy heuristic: order machine-1 operations by out-degree, complete
//! machine 2 by earliest release date, and certify the result with the
//! `max{q+m, n}` upper bound against a degree lower bound.

use std::cmp::Ordering;

use num_rational::Ratio;
use serde::{Serialize, Serializer};

use crate::instance::Instance;
use crate::schedule::{complete_m2_erd, Permutation, Schedule};

/// Compares `A_x` and `A_y` for the greedy order: out-degree descending, then
/// `d_i^A / sum_{j in S_i} d_j^B` descending, then index ascending.
fn greedy_cmp(inst: &Instance, weight: &[u64], x: usize, y: usize) -> Ordering {
    let (dx, dy) = (inst.out_degree(x) as u64, inst.out_degree(y) as u64);
    dy.cmp(&dx)
        .then_with(|| {
            if dx == 0 {
                // 0/0: nothing to compare, fall through to the index.
                return Ordering::Equal;
            }
            // dx/wx > dy/wy  <=>  dx*wy > dy*wx  (weights are positive here)
            (dy * weight[x]).cmp(&(dx * weight[y]))
        })
        .then(x.cmp(&y))
}

/// The greedy machine-1 order. All in-degrees come from the original graph.
pub fn greedy_order(inst: &Instance) -> Permutation {
    let weight: Vec<u64> = (0..inst.n())
        .map(|i| inst.succ(i).iter().map(|&j| inst.in_degree(j) as u64).sum())
        .collect();
    let mut order: Vec<usize> = (0..inst.n()).collect();
    order.sort_by(|&x, &y| greedy_cmp(inst, &weight, x, y));
    Permutation::new(order, inst.n()).expect("sorted indices form a permutation")
}

pub fn solve_greedy(inst: &Instance) -> Schedule {
    complete_m2_erd(inst, &greedy_order(inst))
}

/// Smallest `q` in `1..=n` with `sum_{t<=q} d_{pi_t}^A > sum_t d_{pi_t}^A - m`.
pub fn compute_q(inst: &Instance, pi: &Permutation) -> usize {
    let total = inst.arc_count() as i64;
    let target = total - inst.m() as i64;
    let mut prefix = 0i64;
    for (slot, &i) in pi.as_slice().iter().enumerate() {
        prefix += inst.out_degree(i) as i64;
        if prefix > target {
            return slot + 1;
        }
    }
    // With m >= 1 the full sum already exceeds total - m.
    unreachable!("m >= 1 guarantees q <= n")
}

/// `max{n + d_min^A, m + d_min^B}`, a valid lower bound on the optimum.
pub fn lower_bound(inst: &Instance) -> u64 {
    let dp = inst.degree_profile();
    (inst.n() + dp.min_out()).max(inst.m() + dp.min_in()) as u64
}

/// `max{m + d_min^A, n + d_min^B}`, the swapped form. It is not a valid lower
/// bound in general (one A feeding one of three B's gives 4 against an
/// optimum of 3) and is only reported for comparison.
pub fn lower_bound_printed(inst: &Instance) -> u64 {
    let dp = inst.degree_profile();
    (inst.m() + dp.min_out()).max(inst.n() + dp.min_in()) as u64
}

fn ratio_as_pair<S: Serializer>(r: &Ratio<u64>, s: S) -> Result<S::Ok, S::Error> {
    (r.numer(), r.denom()).serialize(s)
}

/// Bounds certificate for the greedy schedule.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundsReport {
    pub q: usize,
    pub d_min_a: usize,
    pub d_min_b: usize,
    /// `max{n + d_min^A, m + d_min^B}`; the authoritative lower bound.
    pub lower_bound: u64,
    /// `max{m + d_min^A, n + d_min^B}`; reported only.
    pub lower_bound_printed: u64,
    /// `max{q + m, n}`.
    pub greedy_upper: u64,
    /// `greedy_upper / lower_bound`, in lowest terms; serialized as `[num, den]`.
    #[serde(serialize_with = "ratio_as_pair")]
    pub ratio_bound: Ratio<u64>,
}

impl BoundsReport {
    /// The swapped form exceeds the valid bound, so it cannot be trusted as a
    /// lower bound on this instance.
    pub fn printed_bound_flagged(&self) -> bool {
        self.lower_bound_printed > self.lower_bound
    }
}

pub fn bounds_report(inst: &Instance) -> BoundsReport {
    let dp = inst.degree_profile();
    let q = compute_q(inst, &greedy_order(inst));
    let lb = lower_bound(inst);
    let upper = ((q + inst.m()).max(inst.n())) as u64;
    BoundsReport {
        q,
        d_min_a: dp.min_out(),
        d_min_b: dp.min_in(),
        lower_bound: lb,
        lower_bound_printed: lower_bound_printed(inst),
        greedy_upper: upper,
        ratio_bound: Ratio::new(upper, lb),
    }
}

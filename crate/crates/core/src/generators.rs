//! Reproducible instance generators.
//!
//! Every random generator draws from `ChaCha8Rng::seed_from_u64(seed)`
//! (`rand_chacha` 0.3, `rand` 0.8 value-stable sampling), so a given
//! parameter set and seed always yields the same instance.

use std::fmt;
use std::str::FromStr;

use rand::seq::index;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::instance::Instance;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenError {
    #[error("n and m must be at least 1 (n={n}, m={m})")]
    EmptyPart { n: usize, m: usize },
    #[error("probability must be a fraction in [0, 1], got {0:?}")]
    BadProbability(String),
    #[error("tight family needs k >= l >= 1 and s >= 3 (k={k}, l={l}, s={s})")]
    BadTightParams { k: usize, l: usize, s: usize },
    #[error("D2 generator needs a >= 1 and at least two non-pendant B operations (a={a}, b={b}, pendants={pendants})")]
    BadD2Params { a: usize, b: usize, pendants: usize },
}

/// Exact arc probability `num / den`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Probability {
    num: u64,
    den: u64,
}

impl Probability {
    pub fn new(num: u64, den: u64) -> Result<Self, GenError> {
        if den == 0 || num > den {
            return Err(GenError::BadProbability(format!("{num}/{den}")));
        }
        Ok(Probability { num, den })
    }

    pub const ZERO: Probability = Probability { num: 0, den: 1 };
    pub const ONE: Probability = Probability { num: 1, den: 1 };

    /// `x` uniform on `[0, 2^64)`; true with probability `num/den` up to
    /// `2^-64` rounding.
    fn accepts(&self, x: u64) -> bool {
        (x as u128) * (self.den as u128) < (self.num as u128) << 64
    }
}

impl fmt::Display for Probability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

/// Accepts `num/den`, an integer, or a decimal such as `0.25`.
impl FromStr for Probability {
    type Err = GenError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || GenError::BadProbability(s.to_string());
        let s = s.trim();
        if let Some((n, d)) = s.split_once('/') {
            let num = n.trim().parse().map_err(|_| bad())?;
            let den = d.trim().parse().map_err(|_| bad())?;
            return Probability::new(num, den).map_err(|_| bad());
        }
        let (int, frac) = s.split_once('.').unwrap_or((s, ""));
        if frac.len() > 18 || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let int: u64 = if int.is_empty() { 0 } else { int.parse().map_err(|_| bad())? };
        let den = 10u64.pow(frac.len() as u32);
        let frac_val: u64 = if frac.is_empty() { 0 } else { frac.parse().map_err(|_| bad())? };
        let num = int
            .checked_mul(den)
            .and_then(|v| v.checked_add(frac_val))
            .ok_or_else(bad)?;
        Probability::new(num, den).map_err(|_| bad())
    }
}

/// Each of the `n*m` arcs is kept independently with probability `p`, one
/// 64-bit draw per arc in row-major `(i, j)` order.
pub fn gen_random(n: usize, m: usize, p: Probability, seed: u64) -> Result<Instance, GenError> {
    if n == 0 || m == 0 {
        return Err(GenError::EmptyPart { n, m });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut arcs = Vec::new();
    for i in 0..n {
        for j in 0..m {
            if p.accepts(rng.next_u64()) {
                arcs.push((i, j));
            }
        }
    }
    Ok(Instance::new(n, m, arcs).expect("generated arcs are in range and distinct"))
}

/// Every `A` gets two distinct successors drawn uniformly from the
/// `b_count - pendant_count` machine-2 operations left after a random set of
/// `pendant_count` is excluded. Excluded operations have no predecessors;
/// others may also end up uncovered.
pub fn gen_d2(a_count: usize, b_count: usize, pendant_count: usize, seed: u64) -> Result<Instance, GenError> {
    if a_count == 0 || b_count < pendant_count + 2 {
        return Err(GenError::BadD2Params {
            a: a_count,
            b: b_count,
            pendants: pendant_count,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut excluded = vec![false; b_count];
    for j in index::sample(&mut rng, b_count, pendant_count) {
        excluded[j] = true;
    }
    let eligible: Vec<usize> = (0..b_count).filter(|&j| !excluded[j]).collect();
    let mut arcs = Vec::with_capacity(2 * a_count);
    for i in 0..a_count {
        for pick in index::sample(&mut rng, eligible.len(), 2) {
            arcs.push((i, eligible[pick]));
        }
    }
    Ok(Instance::new(a_count, b_count, arcs).expect("two distinct successors per A"))
}

/// Parameters of the family on which the greedy ratio bound is attained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TightParams {
    k: usize,
    l: usize,
    s: usize,
}

impl TightParams {
    pub fn new(k: usize, l: usize, s: usize) -> Result<Self, GenError> {
        if l == 0 || k < l || s < 3 {
            return Err(GenError::BadTightParams { k, l, s });
        }
        Ok(TightParams { k, l, s })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn n(&self) -> usize {
        self.k + self.l + self.s
    }

    pub fn m(&self) -> usize {
        2 * self.k + self.s
    }

    /// Optimal makespan `2k + s + 1`.
    pub fn optimum(&self) -> u64 {
        (2 * self.k + self.s + 1) as u64
    }

    /// Greedy makespan `2k + s + l + 1`.
    pub fn greedy_makespan(&self) -> u64 {
        (2 * self.k + self.s + self.l + 1) as u64
    }
}

/// Tight family with `n = k + l + s`, `m = 2k + s`.
///
/// Index layout (0-based): `A_0..A_{k-1}` form the K block, the next `l` the L
/// block, the last `s` the S block; `B_0..B_{2k-1}` form the pair block and
/// the last `s` the S' block.
///
/// * K block: the `t`-th operation feeds pair-block operations `2t` and `2t+1`.
/// * L block: every operation feeds every S' operation.
/// * S block: the `t`-th operation feeds the `t`-th S' operation.
pub fn gen_tight(params: TightParams) -> Instance {
    let TightParams { k, l, s } = params;
    let mut arcs = Vec::with_capacity(2 * k + l * s + s);
    for t in 0..k {
        arcs.push((t, 2 * t));
        arcs.push((t, 2 * t + 1));
    }
    for t in 0..l {
        for u in 0..s {
            arcs.push((k + t, 2 * k + u));
        }
    }
    for t in 0..s {
        arcs.push((k + l + t, 2 * k + t));
    }
    Instance::new(params.n(), params.m(), arcs).expect("construction stays in range")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::serialize_instance;

    #[test]
    fn probability_parsing() {
        assert_eq!("1/2".parse::<Probability>().unwrap(), Probability::new(1, 2).unwrap());
        assert_eq!("0.25".parse::<Probability>().unwrap(), Probability::new(25, 100).unwrap());
        assert_eq!("1".parse::<Probability>().unwrap(), Probability::new(1, 1).unwrap());
        assert!("3/2".parse::<Probability>().is_err());
        assert!("1.5".parse::<Probability>().is_err());
        assert!("x".parse::<Probability>().is_err());
        assert!("1/0".parse::<Probability>().is_err());
    }

    #[test]
    fn random_extremes() {
        assert_eq!(gen_random(4, 5, Probability::ZERO, 3).unwrap().arc_count(), 0);
        assert_eq!(gen_random(4, 5, Probability::ONE, 3).unwrap().arc_count(), 20);
        assert!(gen_random(0, 5, Probability::ONE, 3).is_err());
    }

    #[test]
    fn random_is_deterministic() {
        let p = Probability::new(1, 2).unwrap();
        let a = serialize_instance(&gen_random(5, 5, p, 7).unwrap());
        let b = serialize_instance(&gen_random(5, 5, p, 7).unwrap());
        assert_eq!(a, b);
        let c = serialize_instance(&gen_random(5, 5, p, 8).unwrap());
        assert_ne!(a, c);
    }

    #[test]
    fn random_density_is_plausible() {
        let inst = gen_random(100, 100, Probability::new(3, 10).unwrap(), 1).unwrap();
        let arcs = inst.arc_count() as f64;
        assert!((arcs - 3000.0).abs() < 200.0, "{arcs}");
    }

    #[test]
    fn d2_examples() {
        let forced = gen_d2(1, 2, 0, 99).unwrap();
        assert_eq!(forced.arcs(), &[(0, 0), (0, 1)]);

        let inst = gen_d2(6, 7, 2, 5).unwrap();
        assert!(inst.classify().is_d2);
        assert_eq!(inst.degree_profile().in_deg.iter().sum::<usize>(), 12);
        let pendants = inst.degree_profile().in_deg.iter().filter(|&&d| d == 0).count();
        assert!(pendants >= 2);

        assert!(gen_d2(3, 3, 2, 0).is_err());
        assert!(gen_d2(0, 3, 0, 0).is_err());
        assert_eq!(gen_d2(6, 7, 2, 5).unwrap(), inst);
    }

    #[test]
    fn tight_323() {
        let p = TightParams::new(3, 2, 3).unwrap();
        let inst = gen_tight(p);
        assert_eq!((inst.n(), inst.m(), inst.arc_count()), (8, 9, 15));
        let dp = inst.degree_profile();
        assert_eq!(dp.out_deg, vec![2, 2, 2, 3, 3, 1, 1, 1]);
        assert_eq!(dp.in_deg, vec![1, 1, 1, 1, 1, 1, 3, 3, 3]);
        assert_eq!((p.optimum(), p.greedy_makespan()), (10, 12));
    }

    #[test]
    fn tight_rejects_bad_params() {
        assert!(TightParams::new(2, 3, 3).is_err());
        assert!(TightParams::new(3, 2, 2).is_err());
        assert!(TightParams::new(3, 0, 3).is_err());
    }
}

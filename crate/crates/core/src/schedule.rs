//! Schedules: start times, feasibility, makespan, release dates and the
//! earliest-release-date completion of machine 2.

use std::fmt::{self, Write as _};

use itertools::Itertools;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::instance::Instance;

pub type Time = i64;

/// Largest `m` accepted by [`best_m2_bruteforce`].
pub const M2_BRUTEFORCE_LIMIT: usize = 9;

#[derive(Debug, Error)]
pub enum ScheduleError {
    #[error("not a permutation of 1..={n}: {order:?}")]
    NotAPermutation { n: usize, order: Vec<usize> },
    #[error("brute force over machine-2 orders limited to m <= {limit}, got m = {m}")]
    TooLarge { m: usize, limit: usize },
    #[error("schedule is infeasible ({} violation(s)); first: {}", .0.len(), .0[0])]
    Infeasible(Vec<Violation>),
    #[error("schedule file is not valid JSON")]
    Json(#[from] serde_json::Error),
}

/// Order of the machine-1 operations (0-based `A` indices).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn new(order: Vec<usize>, n: usize) -> Result<Self, ScheduleError> {
        let mut seen = vec![false; n];
        let ok = order.len() == n
            && order.iter().all(|&i| i < n && !std::mem::replace(&mut seen[i], true));
        if ok {
            Ok(Permutation(order))
        } else {
            Err(ScheduleError::NotAPermutation { n, order: order.iter().map(|i| i + 1).collect() })
        }
    }

    pub fn identity(n: usize) -> Self {
        Permutation((0..n).collect())
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `positions()[i]` is the slot of `A_i`, i.e. its start time.
    pub fn positions(&self) -> Vec<usize> {
        let mut pos = vec![0; self.0.len()];
        for (slot, &i) in self.0.iter().enumerate() {
            pos[i] = slot;
        }
        pos
    }

    /// Machine-1 start times with the operations run back to back from 0.
    pub fn start_times(&self) -> Vec<Time> {
        self.positions().into_iter().map(|p| p as Time).collect()
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.0.iter().map(|i| format!("A{}", i + 1)).join(", "))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Schedule {
    pub start_a: Vec<Time>,
    pub start_b: Vec<Time>,
}

impl Schedule {
    pub fn makespan(&self) -> Time {
        makespan(self)
    }
}

/// Completion time of the last operation; 0 for an empty schedule.
pub fn makespan(sched: &Schedule) -> Time {
    sched
        .start_a
        .iter()
        .chain(&sched.start_b)
        .map(|&s| s + 1)
        .max()
        .unwrap_or(0)
}

/// On-disk JSON form of a schedule.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScheduleFile {
    pub makespan: Time,
    pub start_a: Vec<Time>,
    pub start_b: Vec<Time>,
}

impl From<&Schedule> for ScheduleFile {
    fn from(s: &Schedule) -> Self {
        ScheduleFile {
            makespan: s.makespan(),
            start_a: s.start_a.clone(),
            start_b: s.start_b.clone(),
        }
    }
}

impl ScheduleFile {
    pub fn schedule(&self) -> Schedule {
        Schedule {
            start_a: self.start_a.clone(),
            start_b: self.start_b.clone(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, ScheduleError> {
        Ok(serde_json::from_str(text)?)
    }
}

/// Release dates `r_j` of the machine-2 operations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReleaseVector(pub Vec<Time>);

impl ReleaseVector {
    pub fn as_slice(&self) -> &[Time] {
        &self.0
    }
}

/// `r_j = max{d_j^B, max_{i in T_j} (s_i^A + 1)}` with machine 1 running `pi`
/// back to back from time 0. The inner max over an empty `T_j` is 0.
pub fn release_times(inst: &Instance, pi: &Permutation) -> ReleaseVector {
    let pos = pi.positions();
    ReleaseVector(
        (0..inst.m())
            .map(|j| {
                let ready = inst.pred(j).iter().map(|&i| pos[i] as Time + 1).max().unwrap_or(0);
                ready.max(inst.in_degree(j) as Time)
            })
            .collect(),
    )
}

/// How equal release dates are ordered by [`complete_m2_erd_with`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ErdTieBreak {
    #[default]
    AscendingIndex,
    DescendingIndex,
}

/// Places machine-2 operations in the given order, each at the earliest time
/// after its predecessors finish and after the previous operation.
pub fn place_machine2(inst: &Instance, start_a: &[Time], order: &[usize]) -> Vec<Time> {
    let mut start_b = vec![0; inst.m()];
    let mut free: Time = 0;
    for &j in order {
        let ready = inst.pred(j).iter().map(|&i| start_a[i] + 1).max().unwrap_or(0);
        let s = ready.max(free);
        start_b[j] = s;
        free = s + 1;
    }
    start_b
}

pub fn complete_m2_erd(inst: &Instance, pi: &Permutation) -> Schedule {
    complete_m2_erd_with(inst, pi, ErdTieBreak::AscendingIndex)
}

/// Machine 1 runs `pi` from time 0; machine 2 runs its operations in
/// non-decreasing release date, each as early as possible.
pub fn complete_m2_erd_with(inst: &Instance, pi: &Permutation, tie: ErdTieBreak) -> Schedule {
    let start_a = pi.start_times();
    let release = release_times(inst, pi);
    let mut order: Vec<usize> = (0..inst.m()).collect();
    match tie {
        ErdTieBreak::AscendingIndex => order.sort_by_key(|&j| (release.0[j], j)),
        ErdTieBreak::DescendingIndex => {
            order.sort_by_key(|&j| (release.0[j], std::cmp::Reverse(j)))
        }
    }
    let start_b = place_machine2(inst, &start_a, &order);
    Schedule { start_a, start_b }
}

/// Minimal-makespan machine-2 completion for a fixed machine-1 order, by
/// trying every machine-2 order. Ties go to the lexicographically smallest
/// order.
pub fn best_m2_bruteforce(inst: &Instance, pi: &Permutation) -> Result<Schedule, ScheduleError> {
    if inst.m() > M2_BRUTEFORCE_LIMIT {
        return Err(ScheduleError::TooLarge {
            m: inst.m(),
            limit: M2_BRUTEFORCE_LIMIT,
        });
    }
    let start_a = pi.start_times();
    let mut best: Option<(Time, Vec<Time>)> = None;
    for order in (0..inst.m()).permutations(inst.m()) {
        let start_b = place_machine2(inst, &start_a, &order);
        let sched_end = start_b.iter().map(|s| s + 1).max().unwrap_or(0);
        if best.as_ref().is_none_or(|(b, _)| sched_end < *b) {
            best = Some((sched_end, start_b));
        }
    }
    let (_, start_b) = best.expect("m >= 1");
    Ok(Schedule { start_a, start_b })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Machine {
    M1,
    M2,
}

impl fmt::Display for Machine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Machine::M1 => "machine 1",
            Machine::M2 => "machine 2",
        })
    }
}

fn op_label(machine: Machine, idx: usize) -> String {
    match machine {
        Machine::M1 => format!("A{}", idx + 1),
        Machine::M2 => format!("B{}", idx + 1),
    }
}

/// A reason a schedule is not feasible. Operation indices are 0-based;
/// `Display` prints them 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Violation {
    WrongLength { machine: Machine, expected: usize, found: usize },
    NegativeStart { machine: Machine, op: usize, start: Time },
    Overlap { machine: Machine, first: usize, second: usize, time: Time },
    Precedence { a: usize, b: usize, start_a: Time, start_b: Time },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Violation::WrongLength { machine, expected, found } => {
                write!(f, "{machine}: expected {expected} start times, found {found}")
            }
            Violation::NegativeStart { machine, op, start } => {
                write!(f, "{machine}: {} starts at negative time {start}", op_label(machine, op))
            }
            Violation::Overlap { machine, first, second, time } => write!(
                f,
                "{machine} overlap: {} and {} both start at {time}",
                op_label(machine, first),
                op_label(machine, second)
            ),
            Violation::Precedence { a, b, start_a, start_b } => write!(
                f,
                "precedence violation ({}, {}): A{} starts at {start_a}, B{} starts at {start_b}",
                a + 1,
                b + 1,
                a + 1,
                b + 1
            ),
        }
    }
}

/// Outcome of [`check_feasible`]; an empty violation list means feasible.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Verdict {
    pub violations: Vec<Violation>,
}

impl Verdict {
    pub fn is_feasible(&self) -> bool {
        self.violations.is_empty()
    }
}

fn machine_violations(machine: Machine, starts: &[Time], out: &mut Vec<Violation>) {
    for (op, &start) in starts.iter().enumerate() {
        if start < 0 {
            out.push(Violation::NegativeStart { machine, op, start });
        }
    }
    let mut by_time: Vec<usize> = (0..starts.len()).collect();
    by_time.sort_by_key(|&op| (starts[op], op));
    for (&x, &y) in by_time.iter().tuple_windows() {
        // Unit durations on an integer grid: overlap iff equal starts.
        if starts[x] == starts[y] {
            out.push(Violation::Overlap { machine, first: x, second: y, time: starts[x] });
        }
    }
}

pub fn check_feasible(inst: &Instance, sched: &Schedule) -> Verdict {
    let mut violations = Vec::new();
    if sched.start_a.len() != inst.n() {
        violations.push(Violation::WrongLength {
            machine: Machine::M1,
            expected: inst.n(),
            found: sched.start_a.len(),
        });
    }
    if sched.start_b.len() != inst.m() {
        violations.push(Violation::WrongLength {
            machine: Machine::M2,
            expected: inst.m(),
            found: sched.start_b.len(),
        });
    }
    if !violations.is_empty() {
        return Verdict { violations };
    }
    machine_violations(Machine::M1, &sched.start_a, &mut violations);
    machine_violations(Machine::M2, &sched.start_b, &mut violations);
    for &(a, b) in inst.arcs() {
        let (sa, sb) = (sched.start_a[a], sched.start_b[b]);
        if sb < sa + 1 {
            violations.push(Violation::Precedence { a, b, start_a: sa, start_b: sb });
        }
    }
    Verdict { violations }
}

/// Two-row text chart with one fixed-width cell per time unit and `.` for
/// idle cells.
///
/// ```text
/// M1 | A1 .
/// M2 | .  B1
/// ```
///
/// Every cell is padded to the widest label, so both rows have equal length.
/// ```text
/// ```
pub fn render_gantt(inst: &Instance, sched: &Schedule) -> Result<String, ScheduleError> {
    let verdict = check_feasible(inst, sched);
    if !verdict.is_feasible() {
        return Err(ScheduleError::Infeasible(verdict.violations));
    }
    let horizon = sched.makespan() as usize;
    let width = format!("A{}", inst.n()).len().max(format!("B{}", inst.m()).len());
    let row = |machine: Machine, starts: &[Time]| {
        let mut cells = vec![".".to_string(); horizon];
        for (op, &s) in starts.iter().enumerate() {
            cells[s as usize] = op_label(machine, op);
        }
        cells.iter().map(|c| format!("{c:<width$}")).join(" ")
    };
    let mut out = String::new();
    let _ = writeln!(out, "M1 | {}", row(Machine::M1, &sched.start_a));
    let _ = writeln!(out, "M2 | {}", row(Machine::M2, &sched.start_b));
    Ok(out)
}

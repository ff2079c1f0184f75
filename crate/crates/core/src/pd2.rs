//! Exact algorithm for instances where every machine-1 operation has exactly
//! two successors, plus block diagnostics of its output.
//!
//! Each round first runs every machine-2 operation whose predecessors are all
//! done (ascending index), then picks the remaining machine-2 operation with
//! the fewest unfinished predecessors (ties by index), runs those predecessors
//! on machine 1 (ascending index) and the operation itself on machine 2.
//! Final start times are earliest-feasible along both sequences.
//!
//! The remaining machine-2 operations live in an ordered set keyed by
//! `(current in-degree, index)`, so each round costs `O(log m)` per degree
//! update instead of a full re-sort.

use std::collections::BTreeSet;

use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::instance::Instance;
use crate::schedule::{place_machine2, Schedule, Time};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Pd2Error {
    /// `a` is 1-based.
    #[error("instance is not in D2: A{a} has {degree} successor(s), expected 2")]
    NotD2 { a: usize, degree: usize },
    #[error("trace does not match instance: {0}")]
    TraceMismatch(String),
}

fn require_d2(inst: &Instance) -> Result<(), Pd2Error> {
    match (0..inst.n()).find(|&i| inst.out_degree(i) != 2) {
        Some(i) => Err(Pd2Error::NotD2 {
            a: i + 1,
            degree: inst.out_degree(i),
        }),
        None => Ok(()),
    }
}

/// One scheduling decision. Indices are 0-based.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Pd2Event {
    /// A machine-2 operation with no unfinished predecessors.
    ZeroPick { b: usize },
    /// The machine-2 operation of minimal current in-degree, together with the
    /// machine-1 operations run for it.
    DegPick {
        b: usize,
        picked_degree: usize,
        a_batch: Vec<usize>,
    },
}

/// Remaining machine-2 operations sorted by `(current in-degree, index)` at
/// the start of a round.
pub type Round = Vec<(usize, usize)>;

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Pd2Trace {
    pub events: Vec<Pd2Event>,
}

impl Pd2Trace {
    pub fn machine1_order(&self) -> Vec<usize> {
        self.events
            .iter()
            .flat_map(|e| match e {
                Pd2Event::DegPick { a_batch, .. } => a_batch.as_slice(),
                Pd2Event::ZeroPick { .. } => &[],
            })
            .copied()
            .collect()
    }

    pub fn machine2_order(&self) -> Vec<usize> {
        self.events
            .iter()
            .map(|e| match *e {
                Pd2Event::ZeroPick { b } | Pd2Event::DegPick { b, .. } => b,
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pd2Solution {
    pub schedule: Schedule,
    pub trace: Pd2Trace,
}

pub fn solve_pd2(inst: &Instance) -> Result<Pd2Solution, Pd2Error> {
    run(inst, None)
}

/// Like [`solve_pd2`], also returning the sorted remaining machine-2 set at
/// the start of every round.
pub fn solve_pd2_with_rounds(inst: &Instance) -> Result<(Pd2Solution, Vec<Round>), Pd2Error> {
    let mut rounds = Vec::new();
    let sol = run(inst, Some(&mut rounds))?;
    Ok((sol, rounds))
}

fn run(inst: &Instance, mut rounds: Option<&mut Vec<Round>>) -> Result<Pd2Solution, Pd2Error> {
    require_d2(inst)?;
    let mut degree: Vec<usize> = (0..inst.m()).map(|j| inst.in_degree(j)).collect();
    let mut queue: BTreeSet<(usize, usize)> = (0..inst.m()).map(|j| (degree[j], j)).collect();
    let mut done_a = vec![false; inst.n()];
    let mut events = Vec::with_capacity(inst.m());

    while !queue.is_empty() {
        if let Some(r) = rounds.as_deref_mut() {
            r.push(queue.iter().map(|&(d, j)| (j, d)).collect());
        }
        // Step 1.
        while let Some(&(0, b)) = queue.first() {
            queue.pop_first();
            events.push(Pd2Event::ZeroPick { b });
        }
        // Step 2.
        let Some((picked_degree, b)) = queue.pop_first() else {
            break;
        };
        let a_batch: Vec<usize> = inst.pred(b).iter().copied().filter(|&a| !done_a[a]).collect();
        debug_assert_eq!(a_batch.len(), picked_degree);
        for &a in &a_batch {
            done_a[a] = true;
            for &j in inst.succ(a) {
                if j != b && queue.remove(&(degree[j], j)) {
                    degree[j] -= 1;
                    queue.insert((degree[j], j));
                }
            }
        }
        degree[b] = 0;
        events.push(Pd2Event::DegPick {
            b,
            picked_degree,
            a_batch,
        });
    }

    let trace = Pd2Trace { events };
    let m1 = trace.machine1_order();
    let mut start_a = vec![0; inst.n()];
    for (slot, &a) in m1.iter().enumerate() {
        start_a[a] = slot as Time;
    }
    let start_b = place_machine2(inst, &start_a, &trace.machine2_order());
    Ok(Pd2Solution {
        schedule: Schedule { start_a, start_b },
        trace,
    })
}

/// `max{n+2, m}` with a pendant machine-2 operation, `max{n+2, m+1}` without.
pub fn lemma1_bound(inst: &Instance) -> Result<u64, Pd2Error> {
    require_d2(inst)?;
    let extra = usize::from(!inst.classify().has_pendant_b);
    Ok((inst.n() + 2).max(inst.m() + extra) as u64)
}

/// A maximal run of the trace begun by a pick of in-degree `label`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Block {
    pub label: usize,
    pub a_ops: Vec<usize>,
    pub b_ops: Vec<usize>,
    /// Machine-1 operations finished before the block's first machine-2
    /// operation starts, with the block laid out on its own.
    pub offset_len: usize,
    /// Machine-2 operations of the block that cannot start before the block's
    /// last machine-1 operation completes, i.e. that have it as a predecessor.
    pub overhang_len: usize,
    /// Machine-2 operations laid out at or after the block's last machine-1
    /// completion once machine-2 capacity is taken into account.
    pub tail_len: usize,
}

fn check_trace(inst: &Instance, trace: &Pd2Trace) -> Result<(), Pd2Error> {
    let mismatch = |msg: String| Err(Pd2Error::TraceMismatch(msg));
    let mut seen_a = vec![false; inst.n()];
    let mut seen_b = vec![false; inst.m()];
    for e in &trace.events {
        let b = match *e {
            Pd2Event::ZeroPick { b } | Pd2Event::DegPick { b, .. } => b,
        };
        if b >= inst.m() || std::mem::replace(&mut seen_b[b], true) {
            return mismatch(format!("B{} out of range or repeated", b + 1));
        }
        if let Pd2Event::DegPick { picked_degree, a_batch, .. } = e {
            if a_batch.len() != *picked_degree {
                return mismatch(format!("B{}: batch size differs from picked degree", b + 1));
            }
            for &a in a_batch {
                if a >= inst.n() || std::mem::replace(&mut seen_a[a], true) {
                    return mismatch(format!("A{} out of range or repeated", a + 1));
                }
                if !inst.has_arc(a, b) {
                    return mismatch(format!("A{} is not a predecessor of B{}", a + 1, b + 1));
                }
            }
        }
    }
    if let Some(a) = seen_a.iter().position(|s| !s) {
        return mismatch(format!("A{} never scheduled", a + 1));
    }
    if let Some(b) = seen_b.iter().position(|s| !s) {
        return mismatch(format!("B{} never scheduled", b + 1));
    }
    Ok(())
}

fn measure(inst: &Instance, block: &mut Block) {
    if block.a_ops.is_empty() {
        return;
    }
    let mut local = vec![None; inst.n()];
    for (slot, &a) in block.a_ops.iter().enumerate() {
        local[a] = Some(slot as Time);
    }
    let a_len = block.a_ops.len() as Time;
    let mut free: Time = 0;
    let mut starts = Vec::with_capacity(block.b_ops.len());
    for &b in &block.b_ops {
        let ready = inst.pred(b).iter().filter_map(|&a| local[a]).map(|s| s + 1).max().unwrap_or(0);
        let s = ready.max(free);
        starts.push(s);
        free = s + 1;
    }
    let last_a = *block.a_ops.last().expect("nonempty");
    block.offset_len = starts.first().map_or(a_len, |&s| s.min(a_len)) as usize;
    block.overhang_len = block.b_ops.iter().filter(|&&b| inst.has_arc(last_a, b)).count();
    block.tail_len = starts.iter().filter(|&&s| s >= a_len).count();
}

/// Splits a trace into blocks. Leading zero picks form block 0; a pick whose
/// degree exceeds the current label opens a new block; everything else joins
/// the current one.
pub fn blocks(inst: &Instance, trace: &Pd2Trace) -> Result<Vec<Block>, Pd2Error> {
    check_trace(inst, trace)?;
    let mut out: Vec<Block> = Vec::new();
    let new_block = |label| Block {
        label,
        a_ops: Vec::new(),
        b_ops: Vec::new(),
        offset_len: 0,
        overhang_len: 0,
        tail_len: 0,
    };
    for e in &trace.events {
        match e {
            Pd2Event::ZeroPick { b } => {
                if out.is_empty() {
                    out.push(new_block(0));
                }
                out.last_mut().expect("nonempty").b_ops.push(*b);
            }
            Pd2Event::DegPick { b, picked_degree, a_batch } => {
                if out.last().is_none_or(|blk| *picked_degree > blk.label) {
                    out.push(new_block(*picked_degree));
                }
                let blk = out.last_mut().expect("nonempty");
                blk.a_ops.extend_from_slice(a_batch);
                blk.b_ops.push(*b);
            }
        }
    }
    for blk in &mut out {
        measure(inst, blk);
    }
    Ok(out)
}

fn one_based(v: &[usize]) -> Vec<usize> {
    v.iter().map(|x| x + 1).collect()
}

/// JSON form of a trace and its blocks, with 1-based indices.
pub fn trace_json(trace: &Pd2Trace, blocks: &[Block]) -> Value {
    let events: Vec<Value> = trace
        .events
        .iter()
        .map(|e| match e {
            Pd2Event::ZeroPick { b } => json!({ "kind": "zero_pick", "b": b + 1 }),
            Pd2Event::DegPick { b, picked_degree, a_batch } => json!({
                "kind": "deg_pick",
                "b": b + 1,
                "picked_degree": picked_degree,
                "a_batch": one_based(a_batch),
            }),
        })
        .collect();
    let blocks: Vec<Value> = blocks
        .iter()
        .map(|blk| {
            json!({
                "label": blk.label,
                "a_ops": one_based(&blk.a_ops),
                "b_ops": one_based(&blk.b_ops),
                "offset_len": blk.offset_len,
                "overhang_len": blk.overhang_len,
                "tail_len": blk.tail_len,
            })
        })
        .collect();
    json!({ "events": events, "blocks": blocks })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::schedule::check_feasible;

    #[test]
    fn ex1_replay() {
        let inst = fixtures::ex1();
        let (sol, rounds) = solve_pd2_with_rounds(&inst).unwrap();
        assert_eq!(sol.trace.machine2_order(), vec![0, 6, 3, 4, 5, 1, 2]);
        assert_eq!(sol.trace.machine1_order(), vec![3, 5, 4, 0, 1, 2]);
        assert_eq!(sol.schedule.makespan(), 8);
        assert!(check_feasible(&inst, &sol.schedule).is_feasible());

        let degrees: Vec<Vec<usize>> =
            rounds.iter().map(|r| r.iter().map(|&(_, d)| d).collect()).collect();
        assert_eq!(degrees[0], vec![0, 0, 1, 2, 2, 3, 4]);
        assert_eq!(degrees[1], vec![1, 2, 3, 4]);
        assert_eq!(degrees[2], vec![1, 3, 4]);
        assert_eq!(degrees[3], vec![3, 3]);
        let order0: Vec<usize> = rounds[0].iter().map(|&(j, _)| j).collect();
        assert_eq!(order0, vec![0, 6, 3, 4, 5, 1, 2]);
    }

    #[test]
    fn ex1_blocks() {
        let inst = fixtures::ex1();
        let sol = solve_pd2(&inst).unwrap();
        let bl = blocks(&inst, &sol.trace).unwrap();
        assert_eq!(bl.len(), 3);
        assert_eq!((bl[0].label, bl[0].a_ops.clone(), bl[0].b_ops.clone()), (0, vec![], vec![0, 6]));
        assert_eq!((bl[1].label, bl[1].a_ops.clone(), bl[1].b_ops.clone()), (1, vec![3, 5, 4], vec![3, 4, 5]));
        assert_eq!((bl[2].label, bl[2].a_ops.clone(), bl[2].b_ops.clone()), (3, vec![0, 1, 2], vec![1, 2]));
        assert_eq!((bl[2].offset_len, bl[2].overhang_len, bl[2].tail_len), (3, 2, 2));
        // A5's other successor B3 lies in the next block.
        assert_eq!((bl[1].offset_len, bl[1].overhang_len, bl[1].tail_len), (1, 1, 1));
    }

    #[test]
    fn single_low_block_tail_can_exceed_two() {
        // A1 -> {B3, B4}, A2 -> {B1, B2}: one block of label 1.
        let inst = Instance::new(2, 4, [(0, 2), (0, 3), (1, 0), (1, 1)]).unwrap();
        let sol = solve_pd2(&inst).unwrap();
        assert_eq!(sol.schedule.makespan(), 5);
        let bl = blocks(&inst, &sol.trace).unwrap();
        assert_eq!(bl.len(), 1);
        assert_eq!((bl[0].label, bl[0].overhang_len, bl[0].tail_len), (1, 2, 3));
    }

    #[test]
    fn single_pair() {
        let inst = Instance::new(1, 2, [(0, 0), (0, 1)]).unwrap();
        let sol = solve_pd2(&inst).unwrap();
        assert_eq!(sol.schedule.start_a, vec![0]);
        assert_eq!(sol.schedule.start_b, vec![1, 2]);
        assert_eq!(sol.schedule.makespan(), 3);
        assert_eq!(lemma1_bound(&inst).unwrap(), 3);
        let bl = blocks(&inst, &sol.trace).unwrap();
        assert_eq!(bl.len(), 1);
        assert_eq!((bl[0].label, bl[0].overhang_len), (1, 2));
    }

    #[test]
    fn pendants_fill_machine_two() {
        let inst = Instance::new(1, 10, [(0, 0), (0, 1)]).unwrap();
        let sol = solve_pd2(&inst).unwrap();
        assert_eq!(sol.schedule.makespan(), 10);
        assert_eq!(lemma1_bound(&inst).unwrap(), 10);
        assert!(check_feasible(&inst, &sol.schedule).is_feasible());
    }

    #[test]
    fn lemma1_on_ex1() {
        assert_eq!(lemma1_bound(&fixtures::ex1()).unwrap(), 8);
    }

    #[test]
    fn rejects_non_d2() {
        let err = solve_pd2(&fixtures::cex()).unwrap_err();
        assert_eq!(err, Pd2Error::NotD2 { a: 1, degree: 1 });
        assert!(lemma1_bound(&fixtures::cex()).is_err());
        let inst = Instance::new(2, 3, [(0, 0), (0, 1), (1, 0), (1, 1), (1, 2)]).unwrap();
        assert_eq!(solve_pd2(&inst).unwrap_err(), Pd2Error::NotD2 { a: 2, degree: 3 });
    }

    #[test]
    fn blocks_reject_foreign_trace() {
        let inst = fixtures::ex1();
        let mut trace = solve_pd2(&inst).unwrap().trace;
        trace.events.pop();
        assert!(matches!(blocks(&inst, &trace), Err(Pd2Error::TraceMismatch(_))));

        let other = Instance::new(1, 2, [(0, 0), (0, 1)]).unwrap();
        let t = solve_pd2(&other).unwrap().trace;
        assert!(blocks(&inst, &t).is_err());
    }

    #[test]
    fn json_is_one_based() {
        let inst = fixtures::ex1();
        let sol = solve_pd2(&inst).unwrap();
        let bl = blocks(&inst, &sol.trace).unwrap();
        let v = trace_json(&sol.trace, &bl);
        assert_eq!(v["events"][0], json!({"kind": "zero_pick", "b": 1}));
        assert_eq!(v["events"][2]["a_batch"], json!([4]));
        assert_eq!(v["blocks"][2]["a_ops"], json!([1, 2, 3]));
        assert_eq!(v["blocks"][2]["overhang_len"], 2);
    }
}

//! Problem data: the bipartite precedence graph between machine-1 operations
//! (`A_1..A_n`) and machine-2 operations (`B_1..B_m`).
//!
//! Indices are 0-based inside the library and 1-based in files and reports.

use std::collections::BTreeSet;
use std::fmt::{self, Write as _};

use serde::Serialize;
use thiserror::Error;

/// Header keyword of the instance file format (`p cdock <n> <m>`).
pub const FORMAT_TAG: &str = "cdock";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InstanceError {
    #[error("both machines need at least one operation (n={n}, m={m})")]
    EmptyPart { n: usize, m: usize },
    /// Arc indices as given by the caller, 1-based.
    #[error("index out of range: arc ({i}, {j})")]
    IndexOutOfRange { i: usize, j: usize },
    #[error("duplicate arc ({i}, {j})")]
    DuplicateArc { i: usize, j: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("malformed header, line {line}: {detail}")]
    MalformedHeader { line: usize, detail: String },
    #[error("duplicate header, line {line}")]
    DuplicateHeader { line: usize },
    #[error("missing header line `p {FORMAT_TAG} <n> <m>`")]
    MissingHeader,
    #[error("arc before header, line {line}")]
    ArcBeforeHeader { line: usize },
    #[error("malformed arc, line {line}: {detail}")]
    MalformedArc { line: usize, detail: String },
    #[error("unrecognized line {line}: {text:?}")]
    UnknownLine { line: usize, text: String },
    #[error("index out of range, line {line}")]
    IndexOutOfRange { line: usize },
    #[error("duplicate arc, line {line}")]
    DuplicateArc { line: usize },
    #[error("n and m must be at least 1, line {line}")]
    EmptyPart { line: usize },
}

impl ParseError {
    /// Line number (1-based) the error refers to, if any.
    pub fn line(&self) -> Option<usize> {
        match *self {
            ParseError::MalformedHeader { line, .. }
            | ParseError::DuplicateHeader { line }
            | ParseError::ArcBeforeHeader { line }
            | ParseError::MalformedArc { line, .. }
            | ParseError::UnknownLine { line, .. }
            | ParseError::IndexOutOfRange { line }
            | ParseError::DuplicateArc { line }
            | ParseError::EmptyPart { line } => Some(line),
            ParseError::MissingHeader => None,
        }
    }
}

/// A validated, immutable problem instance.
///
/// `arcs` holds `(i, j)` meaning `A_i -> B_j`, sorted lexicographically.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    n: usize,
    m: usize,
    arcs: Vec<(usize, usize)>,
    succ: Vec<Vec<usize>>,
    pred: Vec<Vec<usize>>,
}

impl Instance {
    /// Builds an instance from 0-based arcs. Duplicates are rejected.
    pub fn new<I>(n: usize, m: usize, arcs: I) -> Result<Self, InstanceError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        if n == 0 || m == 0 {
            return Err(InstanceError::EmptyPart { n, m });
        }
        let mut set = BTreeSet::new();
        for (i, j) in arcs {
            if i >= n || j >= m {
                return Err(InstanceError::IndexOutOfRange { i: i + 1, j: j + 1 });
            }
            if !set.insert((i, j)) {
                return Err(InstanceError::DuplicateArc { i: i + 1, j: j + 1 });
            }
        }
        let arcs: Vec<_> = set.into_iter().collect();
        let mut succ = vec![Vec::new(); n];
        let mut pred = vec![Vec::new(); m];
        for &(i, j) in &arcs {
            succ[i].push(j);
            pred[j].push(i);
        }
        Ok(Instance { n, m, arcs, succ, pred })
    }

    /// Same as [`Instance::new`] but with 1-based arcs, as written in files.
    pub fn from_one_based<I>(n: usize, m: usize, arcs: I) -> Result<Self, InstanceError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut shifted = Vec::new();
        for (i, j) in arcs {
            if i == 0 || j == 0 {
                return Err(InstanceError::IndexOutOfRange { i, j });
            }
            shifted.push((i - 1, j - 1));
        }
        Instance::new(n, m, shifted)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn arcs(&self) -> &[(usize, usize)] {
        &self.arcs
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    /// Successors `S_i` of `A_i`, ascending.
    pub fn succ(&self, i: usize) -> &[usize] {
        &self.succ[i]
    }

    /// Predecessors `T_j` of `B_j`, ascending.
    pub fn pred(&self, j: usize) -> &[usize] {
        &self.pred[j]
    }

    pub fn out_degree(&self, i: usize) -> usize {
        self.succ[i].len()
    }

    pub fn in_degree(&self, j: usize) -> usize {
        self.pred[j].len()
    }

    pub fn has_arc(&self, i: usize, j: usize) -> bool {
        self.succ.get(i).is_some_and(|s| s.binary_search(&j).is_ok())
    }

    /// Returns a copy with one extra arc.
    pub fn with_arc(&self, i: usize, j: usize) -> Result<Self, InstanceError> {
        Instance::new(self.n, self.m, self.arcs.iter().copied().chain([(i, j)]))
    }

    pub fn degree_profile(&self) -> DegreeProfile {
        degree_profile(self)
    }

    pub fn classify(&self) -> Classification {
        classify(self)
    }
}

/// Degree and adjacency views of an instance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegreeProfile {
    /// `d_i^A` for every `A_i`.
    pub out_deg: Vec<usize>,
    /// `d_j^B` for every `B_j`.
    pub in_deg: Vec<usize>,
    pub succ: Vec<Vec<usize>>,
    pub pred: Vec<Vec<usize>>,
}

impl DegreeProfile {
    pub fn min_out(&self) -> usize {
        self.out_deg.iter().copied().min().unwrap_or(0)
    }

    pub fn min_in(&self) -> usize {
        self.in_deg.iter().copied().min().unwrap_or(0)
    }
}

pub fn degree_profile(inst: &Instance) -> DegreeProfile {
    DegreeProfile {
        out_deg: inst.succ.iter().map(Vec::len).collect(),
        in_deg: inst.pred.iter().map(Vec::len).collect(),
        succ: inst.succ.clone(),
        pred: inst.pred.clone(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Classification {
    /// Every machine-1 operation has exactly two successors.
    pub is_d2: bool,
    /// Some machine-2 operation has no predecessors.
    pub has_pendant_b: bool,
}

pub fn classify(inst: &Instance) -> Classification {
    Classification {
        is_d2: inst.succ.iter().all(|s| s.len() == 2),
        has_pendant_b: inst.pred.iter().any(Vec::is_empty),
    }
}

fn parse_count(tok: Option<&str>, what: &str, line: usize) -> Result<usize, ParseError> {
    let tok = tok.ok_or_else(|| ParseError::MalformedHeader {
        line,
        detail: format!("missing {what}"),
    })?;
    tok.parse().map_err(|_| ParseError::MalformedHeader {
        line,
        detail: format!("{what} is not a non-negative integer: {tok:?}"),
    })
}

fn parse_index(tok: Option<&str>, line: usize) -> Result<usize, ParseError> {
    let tok = tok.ok_or_else(|| ParseError::MalformedArc {
        line,
        detail: "expected `a <i> <j>`".into(),
    })?;
    tok.parse().map_err(|_| ParseError::MalformedArc {
        line,
        detail: format!("not a non-negative integer: {tok:?}"),
    })
}

/// Parses the line-oriented instance format.
///
/// ```text
/// c optional comment
/// p cdock <n> <m>
/// a <i> <j>
/// ```
pub fn parse_instance(text: &str) -> Result<Instance, ParseError> {
    let mut header: Option<(usize, usize)> = None;
    let mut arcs = BTreeSet::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed == "c" || trimmed.starts_with("c ") || trimmed.starts_with("c\t") {
            continue;
        }
        let mut toks = trimmed.split_whitespace();
        match toks.next() {
            Some("p") => {
                if header.is_some() {
                    return Err(ParseError::DuplicateHeader { line });
                }
                match toks.next() {
                    Some(FORMAT_TAG) => {}
                    other => {
                        return Err(ParseError::MalformedHeader {
                            line,
                            detail: format!("expected format tag `{FORMAT_TAG}`, found {other:?}"),
                        })
                    }
                }
                let n = parse_count(toks.next(), "n", line)?;
                let m = parse_count(toks.next(), "m", line)?;
                if toks.next().is_some() {
                    return Err(ParseError::MalformedHeader {
                        line,
                        detail: "trailing tokens".into(),
                    });
                }
                if n == 0 || m == 0 {
                    return Err(ParseError::EmptyPart { line });
                }
                header = Some((n, m));
            }
            Some("a") => {
                let (n, m) = header.ok_or(ParseError::ArcBeforeHeader { line })?;
                let i = parse_index(toks.next(), line)?;
                let j = parse_index(toks.next(), line)?;
                if toks.next().is_some() {
                    return Err(ParseError::MalformedArc {
                        line,
                        detail: "trailing tokens".into(),
                    });
                }
                if i == 0 || i > n || j == 0 || j > m {
                    return Err(ParseError::IndexOutOfRange { line });
                }
                if !arcs.insert((i - 1, j - 1)) {
                    return Err(ParseError::DuplicateArc { line });
                }
            }
            _ => {
                return Err(ParseError::UnknownLine {
                    line,
                    text: trimmed.to_string(),
                })
            }
        }
    }
    let (n, m) = header.ok_or(ParseError::MissingHeader)?;
    // Bounds and duplicates were checked per line above.
    Ok(Instance::new(n, m, arcs).expect("validated while parsing"))
}

/// Canonical text form: header, then arcs in lexicographic `(i, j)` order.
pub fn serialize_instance(inst: &Instance) -> String {
    serialize_with_comments(inst, &[])
}

/// Canonical text form preceded by `c ` comment lines.
pub fn serialize_with_comments(inst: &Instance, comments: &[&str]) -> String {
    let mut out = String::with_capacity(16 + inst.arcs.len() * 10);
    for c in comments {
        for l in c.lines() {
            let _ = writeln!(out, "c {l}");
        }
    }
    let _ = writeln!(out, "p {FORMAT_TAG} {} {}", inst.n, inst.m);
    for &(i, j) in &inst.arcs {
        let _ = writeln!(out, "a {} {}", i + 1, j + 1);
    }
    out
}

impl fmt::Display for Instance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&serialize_instance(self))
    }
}

//! Benchmark table over a directory of instance files.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{Context, Result};
use cdock::{bounds_report, solve_exact, solve_greedy, solve_pd2, Instance, Time};
use clap::ValueEnum;
use num_rational::Ratio;
use rayon::prelude::*;

use crate::{read_instance, Algorithm};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Md,
}

const HEADER: [&str; 14] = [
    "instance",
    "n",
    "m",
    "arcs",
    "algorithm",
    "makespan",
    "lower_bound",
    "lower_bound_printed",
    "printed_lb_flagged",
    "greedy_upper",
    "ratio",
    "ratio_ref",
    "ratio_bound",
    "wall_time_ms",
];

#[derive(Debug, Clone)]
struct BenchRow {
    instance: String,
    n: usize,
    m: usize,
    arcs: usize,
    algorithm: Algorithm,
    makespan: Time,
    lower_bound: u64,
    lower_bound_printed: u64,
    printed_lb_flagged: bool,
    greedy_upper: u64,
    /// Makespan over the optimum when exact ran on this instance, else over
    /// the lower bound.
    ratio: Ratio<u64>,
    ratio_ref: &'static str,
    ratio_bound: Ratio<u64>,
    wall_time_ms: f64,
}

impl BenchRow {
    fn cells(&self) -> [String; 14] {
        [
            self.instance.clone(),
            self.n.to_string(),
            self.m.to_string(),
            self.arcs.to_string(),
            self.algorithm.name().to_string(),
            self.makespan.to_string(),
            self.lower_bound.to_string(),
            self.lower_bound_printed.to_string(),
            self.printed_lb_flagged.to_string(),
            self.greedy_upper.to_string(),
            self.ratio.to_string(),
            self.ratio_ref.to_string(),
            self.ratio_bound.to_string(),
            format!("{:.3}", self.wall_time_ms),
        ]
    }
}

/// Rows for one instance plus notes on skipped algorithms.
fn bench_instance(name: &str, inst: &Instance, algs: &[Algorithm], exact_limit: usize) -> (Vec<BenchRow>, Vec<String>) {
    let report = bounds_report(inst);
    let mut notes = Vec::new();
    let mut runs: Vec<(Algorithm, Time, f64)> = Vec::new();
    for &alg in algs {
        let started = Instant::now();
        let makespan = match alg {
            Algorithm::Greedy => Some(solve_greedy(inst).makespan()),
            Algorithm::Pd2 => match solve_pd2(inst) {
                Ok(sol) => Some(sol.schedule.makespan()),
                Err(e) => {
                    notes.push(format!("{name}: pd2 skipped: {e}"));
                    None
                }
            },
            Algorithm::Exact => match solve_exact(inst, exact_limit) {
                Ok(r) => Some(r.optimal_makespan),
                Err(e) => {
                    notes.push(format!("{name}: exact skipped: {e}"));
                    None
                }
            },
        };
        let ms = started.elapsed().as_secs_f64() * 1000.0;
        if let Some(makespan) = makespan {
            runs.push((alg, makespan, ms));
        }
    }
    let optimum = runs.iter().find(|r| r.0 == Algorithm::Exact).map(|r| r.1 as u64);
    let (reference, ratio_ref) = match optimum {
        Some(opt) => (opt, "optimum"),
        None => (report.lower_bound, "lower_bound"),
    };
    let rows = runs
        .into_iter()
        .map(|(algorithm, makespan, wall_time_ms)| BenchRow {
            instance: name.to_string(),
            n: inst.n(),
            m: inst.m(),
            arcs: inst.arc_count(),
            algorithm,
            makespan,
            lower_bound: report.lower_bound,
            lower_bound_printed: report.lower_bound_printed,
            printed_lb_flagged: report.printed_bound_flagged(),
            greedy_upper: report.greedy_upper,
            ratio: Ratio::new(makespan as u64, reference),
            ratio_ref,
            ratio_bound: report.ratio_bound,
            wall_time_ms,
        })
        .collect();
    (rows, notes)
}

fn instance_files(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut files = Vec::new();
    for entry in fs::read_dir(dir).with_context(|| format!("cannot read directory {}", dir.display()))? {
        let entry = entry?;
        let hidden = entry.file_name().to_string_lossy().starts_with('.');
        if !hidden && entry.file_type()?.is_file() {
            files.push(entry.path());
        }
    }
    files.sort();
    Ok(files)
}

fn write_csv(rows: &[BenchRow], out: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(HEADER)?;
    for row in rows {
        w.write_record(row.cells())?;
    }
    w.flush()?;
    Ok(())
}

fn write_md(rows: &[BenchRow], mut out: impl Write) -> Result<()> {
    writeln!(out, "| {} |", HEADER.join(" | "))?;
    writeln!(out, "|{}", "---|".repeat(HEADER.len()))?;
    for row in rows {
        let cells: Vec<String> = row.cells().iter().map(|c| c.replace('|', "\\|")).collect();
        writeln!(out, "| {} |", cells.join(" | "))?;
    }
    Ok(())
}

pub fn run(dir: &Path, algs: &[Algorithm], format: Format, exact_limit: usize) -> Result<()> {
    let mut algs = algs.to_vec();
    algs.sort_by_key(|a| a.name());
    algs.dedup();
    let files = instance_files(dir)?;
    let results: Vec<(Vec<BenchRow>, Vec<String>)> = files
        .par_iter()
        .map(|path| {
            let name = path.file_name().map_or_else(String::new, |s| s.to_string_lossy().into_owned());
            match read_instance(path) {
                Ok(inst) => bench_instance(&name, &inst, &algs, exact_limit),
                Err(e) => (Vec::new(), vec![format!("{name}: skipped: {e:#}")]),
            }
        })
        .collect();
    let mut rows = Vec::new();
    for (r, notes) in results {
        rows.extend(r);
        for note in notes {
            eprintln!("{note}");
        }
    }
    let stdout = io::stdout().lock();
    match format {
        Format::Csv => write_csv(&rows, stdout),
        Format::Md => write_md(&rows, stdout),
    }
}

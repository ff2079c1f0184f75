//! `cdock`: generate, solve, bound, verify and benchmark cross-docking
//! flow-shop instances.
//!
//! Exit codes: 0 success, 1 infeasible schedule, 2 usage or precondition error.

mod bench;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use cdock::exact::DEFAULT_MAX_N;
use cdock::pd2::trace_json;
use cdock::{
    blocks, bounds_report, check_feasible, gen_d2, gen_random, gen_tight, lemma1_bound, parse_instance,
    render_gantt, serialize_with_comments, solve_exact, solve_greedy, solve_pd2, BoundsReport, Instance,
    Probability, Schedule, ScheduleFile, TightParams,
};
use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "cdock", version, about = "Two-machine cross-docking scheduler with unit operations")]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a generated instance.
    #[command(subcommand)]
    Gen(GenCmd),
    /// Solve an instance and write the schedule as JSON.
    Solve {
        #[arg(long, value_enum)]
        alg: Algorithm,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Print an ASCII Gantt chart.
        #[arg(long)]
        gantt: bool,
        /// Largest `n` the exhaustive solver accepts.
        #[arg(long, default_value_t = DEFAULT_MAX_N)]
        exact_limit: usize,
        /// pd2 only: write the decision trace and blocks as JSON.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Print the bounds certificate.
    Bound {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Check a schedule file against an instance.
    Verify {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        schedule: PathBuf,
    },
    /// Run algorithms over every instance file in a directory.
    Bench {
        #[arg(long)]
        dir: PathBuf,
        #[arg(long, value_enum, value_delimiter = ',', default_value = "greedy,pd2,exact")]
        algs: Vec<Algorithm>,
        #[arg(long, value_enum, default_value_t = bench::Format::Csv)]
        format: bench::Format,
        #[arg(long, default_value_t = DEFAULT_MAX_N)]
        exact_limit: usize,
    },
}

#[derive(Subcommand)]
enum GenCmd {
    /// Each arc present independently with probability `p`.
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        /// `a/b`, an integer, or a decimal.
        #[arg(long)]
        p: Probability,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Every A has exactly two successors.
    D2 {
        #[arg(long)]
        a: usize,
        #[arg(long)]
        b: usize,
        /// B operations left without predecessors.
        #[arg(long, default_value_t = 0)]
        pendants: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Family on which the greedy ratio bound is attained.
    Tight {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        l: usize,
        #[arg(long)]
        s: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
pub enum Algorithm {
    Greedy,
    Pd2,
    Exact,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Greedy => "greedy",
            Algorithm::Pd2 => "pd2",
            Algorithm::Exact => "exact",
        }
    }
}

pub fn read_instance(path: &Path) -> Result<Instance> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    parse_instance(&text).with_context(|| format!("{}", path.display()))
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).with_context(|| format!("cannot write {}", path.display()))
}

fn summary(inst: &Instance) -> String {
    let class = inst.classify();
    format!(
        "n={} m={} arcs={} d2={} pendant_b={}",
        inst.n(),
        inst.m(),
        inst.arc_count(),
        class.is_d2,
        class.has_pendant_b
    )
}

fn cmd_gen(cmd: GenCmd) -> Result<()> {
    let (inst, out) = match cmd {
        GenCmd::Random { n, m, p, seed, out } => (gen_random(n, m, p, seed)?, out),
        GenCmd::D2 { a, b, pendants, seed, out } => (gen_d2(a, b, pendants, seed)?, out),
        GenCmd::Tight { k, l, s, out } => (gen_tight(TightParams::new(k, l, s)?), out),
    };
    let args: Vec<String> = std::env::args().skip(1).collect();
    let header = format!("generated by: cdock {}", args.join(" "));
    let text = serialize_with_comments(&inst, &[&header]);
    match out {
        Some(path) => {
            write_file(&path, &text)?;
            println!("{}", path.display());
            println!("{}", summary(&inst));
        }
        None => {
            print!("{text}");
            eprintln!("{}", summary(&inst));
        }
    }
    Ok(())
}

fn print_bounds(r: &BoundsReport) {
    println!("q {}", r.q);
    println!("lower_bound {} (authoritative)", r.lower_bound);
    if r.printed_bound_flagged() {
        println!(
            "lower_bound_printed {} FLAGGED: exceeds the valid bound {}, not a lower bound here",
            r.lower_bound_printed, r.lower_bound
        );
    } else {
        println!("lower_bound_printed {}", r.lower_bound_printed);
    }
    println!("greedy_upper {}", r.greedy_upper);
    println!("ratio_bound {}", r.ratio_bound);
}

fn cmd_solve(
    alg: Algorithm,
    input: &Path,
    out: Option<&Path>,
    gantt: bool,
    exact_limit: usize,
    trace: Option<&Path>,
) -> Result<()> {
    let inst = read_instance(input)?;
    if trace.is_some() && alg != Algorithm::Pd2 {
        bail!("--trace is only available with --alg pd2");
    }
    let schedule: Schedule = match alg {
        Algorithm::Greedy => solve_greedy(&inst),
        Algorithm::Pd2 => {
            let sol = solve_pd2(&inst)?;
            if let Some(path) = trace {
                let bl = blocks(&inst, &sol.trace)?;
                let json = serde_json::to_string_pretty(&trace_json(&sol.trace, &bl))?;
                write_file(path, &json)?;
            }
            sol.schedule
        }
        Algorithm::Exact => {
            let r = solve_exact(&inst, exact_limit)?;
            println!("permutations_examined {}", r.permutations_examined);
            r.schedule
        }
    };
    println!("makespan {}", schedule.makespan());
    if alg == Algorithm::Greedy {
        print_bounds(&bounds_report(&inst));
    }
    if gantt {
        print!("{}", render_gantt(&inst, &schedule)?);
    }
    if let Some(path) = out {
        write_file(path, &ScheduleFile::from(&schedule).to_json())?;
    }
    Ok(())
}

fn cmd_bound(input: &Path) -> Result<()> {
    let inst = read_instance(input)?;
    print_bounds(&bounds_report(&inst));
    if inst.classify().is_d2 {
        println!("lemma1 {}", lemma1_bound(&inst)?);
    }
    Ok(())
}

/// `Ok(false)` when the schedule is infeasible or misdeclares its makespan.
fn cmd_verify(input: &Path, schedule: &Path) -> Result<bool> {
    let inst = read_instance(input)?;
    let text = fs::read_to_string(schedule).with_context(|| format!("cannot read {}", schedule.display()))?;
    let file = ScheduleFile::from_json(&text).with_context(|| format!("{}", schedule.display()))?;
    let sched = file.schedule();
    let verdict = check_feasible(&inst, &sched);
    let mut problems: Vec<String> = verdict.violations.iter().map(ToString::to_string).collect();
    if verdict.is_feasible() && file.makespan != sched.makespan() {
        problems.push(format!(
            "declared makespan {} but the start times give {}",
            file.makespan,
            sched.makespan()
        ));
    }
    if problems.is_empty() {
        println!("feasible, makespan {}", sched.makespan());
        Ok(true)
    } else {
        println!("infeasible, {} violation(s)", problems.len());
        for p in problems {
            println!("  {p}");
        }
        Ok(false)
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.cmd {
        Command::Gen(g) => cmd_gen(g)?,
        Command::Solve { alg, input, out, gantt, exact_limit, trace } => {
            cmd_solve(alg, &input, out.as_deref(), gantt, exact_limit, trace.as_deref())?
        }
        Command::Bound { input } => cmd_bound(&input)?,
        Command::Verify { input, schedule } => {
            if !cmd_verify(&input, &schedule)? {
                return Ok(ExitCode::from(1));
            }
        }
        Command::Bench { dir, algs, format, exact_limit } => bench::run(&dir, &algs, format, exact_limit)?,
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    // clap exits with 2 on usage errors by itself.
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

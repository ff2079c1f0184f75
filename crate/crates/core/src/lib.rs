//! Two-machine flow shop with unit operations and bipartite precedence
//! between the stages (cross-docking): every machine-2 operation `B_j` may
//! start only after all its machine-1 predecessors `A_i` have finished, and
//! the goal is the smallest makespan.
//!
//! * [`greedy`]: degree-greedy machine-1 order with an upper/lower bound
//!   certificate.
//! * [`pd2`]: exact algorithm when every `A_i` has exactly two successors.
//! * [`exact`]: exhaustive search over machine-1 orders, used as an oracle.
//! * [`generators`]: seeded random, two-successor and tight-family instances.

pub mod exact;
pub mod fixtures;
pub mod generators;
pub mod greedy;
pub mod instance;
pub mod pd2;
pub mod schedule;

pub use exact::{search_space_size, solve_exact, solve_exact_with, ExactConfig, ExactError, ExactResult};
pub use generators::{gen_d2, gen_random, gen_tight, GenError, Probability, TightParams};
pub use greedy::{bounds_report, compute_q, greedy_order, lower_bound, lower_bound_printed, solve_greedy, BoundsReport};
pub use instance::{
    classify, degree_profile, parse_instance, serialize_instance, serialize_with_comments, Classification,
    DegreeProfile, Instance, InstanceError, ParseError,
};
pub use pd2::{blocks, lemma1_bound, solve_pd2, solve_pd2_with_rounds, Block, Pd2Error, Pd2Event, Pd2Solution, Pd2Trace};
pub use schedule::{
    best_m2_bruteforce, check_feasible, complete_m2_erd, complete_m2_erd_with, makespan, release_times,
    render_gantt, ErdTieBreak, Permutation, ReleaseVector, Schedule, ScheduleError, ScheduleFile, Time, Verdict,
    Violation,
};

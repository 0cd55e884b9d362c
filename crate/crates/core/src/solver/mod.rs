//! Exact solving of [`ModelInstance`]s.
//!
//! [`solve`] runs a branch-and-bound search (see `search.rs`). For `F` and `G`
//! it first solves the instance on `n - 1` elements and clones an element of
//! that witness: a family in which some element is not the difference of any
//! twin pair keeps its size and degree when that element is deleted, so only
//! families where every element is a twin difference can do better.
//! [`exhaustive_oracle`] enumerates every subfamily of the power set for
//! `n <= 4` and shares nothing with the search.

mod bits;
mod oracle;
mod search;

use std::fmt;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::time::{Duration, Instant};

use crate::family::{Family, SetMask};
use crate::model::{ModelInstance, ModelKind};

pub use oracle::{exhaustive_oracle, ORACLE_MAX_N};
use search::{Goal, Problem, Tracker, TwinRule};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum SolveStatus {
    Optimal,
    Infeasible,
    Aborted,
}

impl fmt::Display for SolveStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SolveStatus::Optimal => "optimal",
            SolveStatus::Infeasible => "infeasible",
            SolveStatus::Aborted => "aborted",
        })
    }
}

/// Search limits. Construct through [`SearchBudget::unlimited`] or one of the
/// limiting constructors.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Default)]
pub struct SearchBudget {
    max_nodes: Option<u64>,
    max_time: Option<Duration>,
}

impl SearchBudget {
    pub fn unlimited() -> Self {
        SearchBudget::default()
    }

    pub fn nodes(max_nodes: u64) -> Self {
        SearchBudget {
            max_nodes: Some(max_nodes),
            max_time: None,
        }
    }

    pub fn time(max_time: Duration) -> Self {
        SearchBudget {
            max_nodes: None,
            max_time: Some(max_time),
        }
    }

    pub fn with_nodes(mut self, max_nodes: u64) -> Self {
        self.max_nodes = Some(max_nodes);
        self
    }

    pub fn with_time(mut self, max_time: Duration) -> Self {
        self.max_time = Some(max_time);
        self
    }

    pub fn max_nodes(&self) -> Option<u64> {
        self.max_nodes
    }

    pub fn max_time(&self) -> Option<Duration> {
        self.max_time
    }

    pub fn is_unlimited(&self) -> bool {
        self.max_nodes.is_none() && self.max_time.is_none()
    }
}

#[derive(Copy, Clone, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub nodes: u64,
    pub propagations: u64,
    pub elapsed: Duration,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolveOutcome {
    pub instance: ModelInstance,
    pub status: SolveStatus,
    /// Optimal value; `None` unless `status` is `Optimal`.
    pub value: Option<u64>,
    pub witness: Option<Family>,
    /// Best feasible family seen before an abort. Never set for `Optimal`.
    pub incumbent: Option<(u64, Family)>,
    pub stats: SearchStats,
}

impl SolveOutcome {
    pub fn is_optimal(&self) -> bool {
        self.status == SolveStatus::Optimal
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct SolveOptions {
    /// Worker threads; 1 is fully deterministic.
    pub threads: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions { threads: 1 }
    }
}

/// Solves `inst` exactly in deterministic single-worker mode.
pub fn solve(inst: &ModelInstance, budget: &SearchBudget) -> SolveOutcome {
    solve_with(inst, budget, &SolveOptions::default())
}

pub fn solve_with(
    inst: &ModelInstance,
    budget: &SearchBudget,
    opts: &SolveOptions,
) -> SolveOutcome {
    let start = Instant::now();
    let tracker = Tracker {
        deadline: budget.max_time.map(|d| start + d),
        max_nodes: budget.max_nodes,
        nodes: AtomicU64::new(0),
        propagations: AtomicU64::new(0),
        aborted: AtomicBool::new(false),
    };
    let raw = solve_level(inst.kind, inst.n, inst.param, &tracker, opts.threads.max(1));
    let stats = SearchStats {
        nodes: tracker.nodes.load(Ordering::Relaxed),
        propagations: tracker.propagations.load(Ordering::Relaxed),
        elapsed: start.elapsed(),
    };
    let normalize = |family: Family| {
        if inst.kind.maximizes() {
            family
        } else {
            family.relabel_by_frequency()
        }
    };
    let (status, best) = match raw {
        Level::Aborted(best) => (SolveStatus::Aborted, best),
        Level::Done(Some(best)) => (SolveStatus::Optimal, Some(best)),
        Level::Done(None) => (SolveStatus::Infeasible, None),
    };
    let mut best = best.map(|(v, f)| (v as u64, normalize(f)));
    if status == SolveStatus::Aborted && best.is_none() && inst.kind == ModelKind::F {
        // {∅} respects every degree cap.
        let trivial = Family::from_masks(inst.n as usize, [SetMask::EMPTY]).expect("valid n");
        best = Some((1, trivial));
    }
    match status {
        SolveStatus::Optimal => {
            let (value, witness) = best.expect("optimal outcome has a witness");
            SolveOutcome {
                instance: *inst,
                status,
                value: Some(value),
                witness: Some(witness),
                incumbent: None,
                stats,
            }
        }
        _ => SolveOutcome {
            instance: *inst,
            status,
            value: None,
            witness: None,
            incumbent: best,
            stats,
        },
    }
}

enum Level {
    Done(Option<(u32, Family)>),
    Aborted(Option<(u32, Family)>),
}

fn solve_level(kind: ModelKind, n: u8, param: u32, tracker: &Tracker, threads: usize) -> Level {
    let goal = if kind.maximizes() {
        Goal::MaxSets { cap: param }
    } else {
        Goal::MinDegree { m: param }
    };
    let reducible = matches!(kind, ModelKind::F | ModelKind::G) && n >= 2;
    let (twins, base) = if reducible {
        match solve_level(kind, n - 1, param, tracker, threads) {
            Level::Aborted(best) => return Level::Aborted(best.map(|(v, f)| (v, lift(&f)))),
            Level::Done(best) => (TwinRule::Any, best.map(|(v, f)| (v, lift(&f)))),
        }
    } else if kind.requires_twins() {
        (TwinRule::NonTrivial, None)
    } else {
        (TwinRule::None, None)
    };
    let problem = Problem {
        n,
        goal,
        twins,
        deletion_base: match (kind, &base) {
            (ModelKind::F, Some((v, _))) => Some(*v),
            _ => None,
        },
        incumbent: base.as_ref().map(|(v, _)| *v),
    };
    let result = search::search(&problem, tracker, threads);
    let best = match result.found {
        Some((value, sets)) => {
            let masks = sets.into_iter().map(SetMask::from_bits);
            Some((
                value,
                Family::from_masks(n as usize, masks).expect("search output"),
            ))
        }
        None => base,
    };
    if tracker.is_aborted() {
        Level::Aborted(best)
    } else {
        Level::Done(best)
    }
}

/// Moves a witness on `n - 1` elements to `n` elements by cloning element 1.
fn lift(f: &Family) -> Family {
    f.clone_element(1).expect("n - 1 < 16")
}

/// Anytime result of a budgeted solve.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LowerBound {
    Infeasible,
    Feasible {
        value: u64,
        family: Family,
        /// The value is the proven optimum.
        proven: bool,
    },
    /// The budget ran out before any feasible family was found.
    Unknown,
}

/// Best feasible family found within `budget`, valid even when the search was
/// cut short.
pub fn lower_bound_report(inst: &ModelInstance, budget: &SearchBudget) -> LowerBound {
    let out = solve(inst, budget);
    match out.status {
        SolveStatus::Infeasible => LowerBound::Infeasible,
        SolveStatus::Optimal => LowerBound::Feasible {
            value: out.value.unwrap(),
            family: out.witness.unwrap(),
            proven: true,
        },
        SolveStatus::Aborted => match out.incumbent {
            Some((value, family)) => LowerBound::Feasible {
                value,
                family,
                proven: false,
            },
            None => LowerBound::Unknown,
        },
    }
}

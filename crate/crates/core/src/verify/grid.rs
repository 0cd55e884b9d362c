//! Solving rectangular ranges of cells.

use std::ops::RangeInclusive;
use std::path::PathBuf;

use rayon::prelude::*;

use super::table::{append_cache, Cell, CellKey, Provenance, ValueTable};
use crate::error::Result;
use crate::family::check_ground;
use crate::model::{ModelInstance, ModelKind};
use crate::solver::{solve, SearchBudget, SolveOutcome};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridSpec {
    pub kind: ModelKind,
    pub ns: RangeInclusive<u8>,
    pub params: RangeInclusive<u32>,
}

impl GridSpec {
    pub fn new(kind: ModelKind, ns: RangeInclusive<u8>, params: RangeInclusive<u32>) -> Self {
        GridSpec { kind, ns, params }
    }

    pub fn keys(&self) -> Vec<CellKey> {
        let mut out = Vec::new();
        for param in self.params.clone() {
            for n in self.ns.clone() {
                out.push(CellKey::new(self.kind, n, param));
            }
        }
        out
    }
}

#[derive(Clone, Debug)]
pub struct GridOptions {
    /// Budget for each cell separately.
    pub budget: SearchBudget,
    /// Cells solved concurrently; each cell runs single-threaded.
    pub threads: usize,
    /// Fill closed-form cells (`f = 2^n` for `a >= 2^(n-1)`, `g` infeasible for
    /// `m > 2^n`) without solving.
    pub analytic_trivial: bool,
    /// Results cache: finished cells are read from it and new ones appended.
    pub cache: Option<PathBuf>,
}

impl Default for GridOptions {
    fn default() -> Self {
        GridOptions {
            budget: SearchBudget::unlimited(),
            threads: 1,
            analytic_trivial: false,
            cache: None,
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct GridRun {
    pub table: ValueTable,
    /// Cells whose solve ran out of budget; absent from `table`.
    pub missing: Vec<CellKey>,
    /// Outcomes of cells solved in this run, in cell order.
    pub outcomes: Vec<SolveOutcome>,
}

impl GridRun {
    /// One line per missing cell.
    pub fn warnings(&self) -> Vec<String> {
        self.missing
            .iter()
            .map(|k| format!("warning: {k} not solved within budget"))
            .collect()
    }
}

/// Closed-form value of `key` if it lies in a trivial regime.
pub fn analytic_value(key: &CellKey) -> Option<Cell> {
    let size = 1u64 << key.n;
    match key.kind {
        ModelKind::F if key.param as u64 >= size / 2 => Some(Cell::Value(size)),
        ModelKind::G | ModelKind::GT if key.param as u64 > size => Some(Cell::Infeasible),
        _ => None,
    }
}

pub fn compute_grid(spec: &GridSpec, opts: &GridOptions) -> Result<GridRun> {
    for n in [*spec.ns.start(), *spec.ns.end()] {
        check_ground(n as usize)?;
    }
    let cached = match &opts.cache {
        Some(path) => ValueTable::load_cache(path)?,
        None => ValueTable::new(),
    };
    let mut run = GridRun::default();
    let mut todo = Vec::new();
    for key in spec.keys() {
        let inst = key.instance()?;
        if let Some(e) = cached.entry(&key) {
            if !matches!(e.provenance, Provenance::Reference(_)) {
                run.table.insert(key, e.cell, e.provenance.clone());
                continue;
            }
        }
        if opts.analytic_trivial {
            if let Some(cell) = analytic_value(&key) {
                run.table.insert(key, cell, Provenance::Analytic);
                continue;
            }
        }
        todo.push(inst);
    }

    let solve_one = |inst: &ModelInstance| solve(inst, &opts.budget);
    let outcomes: Vec<SolveOutcome> = if opts.threads > 1 && todo.len() > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(opts.threads)
            .build()
            .expect("thread pool");
        pool.install(|| todo.par_iter().map(solve_one).collect())
    } else {
        todo.iter().map(solve_one).collect()
    };

    let mut fresh = ValueTable::new();
    for out in &outcomes {
        if !fresh.record(out, Provenance::Solver) {
            run.missing.push(CellKey::from(&out.instance));
        }
    }
    if let Some(path) = &opts.cache {
        // analytic cells are cached too, so reruns skip them
        let new_analytic = run
            .table
            .iter()
            .filter(|(k, e)| e.provenance == Provenance::Analytic && cached.entry(k).is_none());
        append_cache(path, fresh.iter().chain(new_analytic))?;
    }
    run.table.merge(&fresh);
    run.outcomes = outcomes;
    Ok(run)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_f_row_is_power_set_size() {
        let spec = GridSpec::new(ModelKind::F, 3..=3, 4..=8);
        let run = compute_grid(&spec, &GridOptions::default()).unwrap();
        for a in 4..=8 {
            assert_eq!(run.table.get(ModelKind::F, 3, a), Some(Cell::Value(8)));
        }
        let analytic = compute_grid(
            &spec,
            &GridOptions {
                analytic_trivial: true,
                ..GridOptions::default()
            },
        )
        .unwrap();
        assert!(analytic.outcomes.is_empty());
        assert_eq!(analytic.table.get(ModelKind::F, 3, 6), Some(Cell::Value(8)));
        assert_eq!(
            analytic
                .table
                .entry(&CellKey::new(ModelKind::F, 3, 6))
                .unwrap()
                .provenance,
            Provenance::Analytic
        );
    }

    #[test]
    fn missing_cells_under_tiny_budget() {
        let spec = GridSpec::new(ModelKind::F, 6..=6, 20..=20);
        let run = compute_grid(
            &spec,
            &GridOptions {
                budget: SearchBudget::nodes(50),
                ..GridOptions::default()
            },
        )
        .unwrap();
        assert!(run.table.is_empty());
        assert_eq!(run.missing, vec![CellKey::new(ModelKind::F, 6, 20)]);
        assert_eq!(run.warnings().len(), 1);
    }

    #[test]
    fn cache_is_reused() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cache.txt");
        let spec = GridSpec::new(ModelKind::G, 3..=4, 2..=6);
        let opts = GridOptions {
            cache: Some(path.clone()),
            ..GridOptions::default()
        };
        let first = compute_grid(&spec, &opts).unwrap();
        assert_eq!(first.outcomes.len(), 10);
        let second = compute_grid(&spec, &opts).unwrap();
        assert!(second.outcomes.is_empty());
        assert_eq!(first.table, second.table);
    }

    #[test]
    fn parallel_cells_match_sequential() {
        let spec = GridSpec::new(ModelKind::GT, 3..=4, 4..=12);
        let seq = compute_grid(&spec, &GridOptions::default()).unwrap();
        let par = compute_grid(
            &spec,
            &GridOptions {
                threads: 3,
                ..GridOptions::default()
            },
        )
        .unwrap();
        assert_eq!(seq.table, par.table);
    }
}

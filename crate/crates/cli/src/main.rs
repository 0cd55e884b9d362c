//! `frankl`: solve, tabulate and verify extremal union-closed family values.

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write as _};
use std::ops::RangeInclusive;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;
use std::time::Duration;

use anyhow::{anyhow, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use frankl_core::family::{parse_family, write_family};
use frankl_core::lp::export;
use frankl_core::model::build;
use frankl_core::solver::{solve_with, SolveOptions};
use frankl_core::verify::{
    check_falgas_ravry, check_properties, check_stability, compare_to_reference, compute_grid,
    Cell, CheckReport, GridOptions, GridSpec, ValueTable,
};
use frankl_core::{Family, ModelInstance, ModelKind, SearchBudget, SolveStatus};

#[derive(Parser, Debug)]
#[command(
    name = "frankl",
    version,
    about = "Exact extremal values for union-closed families"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Solve one instance exactly.
    Solve(SolveArgs),
    /// Tabulate a kind over ranges of n and the parameter.
    Grid(GridArgs),
    /// Compute grids and run checks on them.
    Verify(VerifyArgs),
    /// Write the integer program of an instance in LP format.
    ExportLp(ExportArgs),
    /// Print the union closure of a family file.
    Closure(FileArgs),
    /// Print statistics of a family file.
    Inspect(FileArgs),
}

#[derive(Args, Debug)]
struct InstanceArgs {
    /// Model: f, g, ft or gt.
    #[arg(long, value_parser = parse_kind)]
    model: ModelKind,
    /// Ground-set size (1..=16).
    #[arg(long)]
    n: usize,
    /// Degree cap `a` for f/ft, set count `m` for g/gt.
    #[arg(long)]
    param: u32,
}

#[derive(Args, Debug, Clone)]
struct BudgetArgs {
    /// Stop after this many search nodes.
    #[arg(long)]
    budget_nodes: Option<u64>,
    /// Stop after this many seconds.
    #[arg(long)]
    budget_seconds: Option<f64>,
    /// Worker threads; 1 is deterministic.
    #[arg(long, default_value_t = 1)]
    threads: usize,
}

impl BudgetArgs {
    fn budget(&self) -> Result<SearchBudget> {
        let mut b = SearchBudget::unlimited();
        if let Some(n) = self.budget_nodes {
            b = b.with_nodes(n);
        }
        if let Some(s) = self.budget_seconds {
            let d =
                Duration::try_from_secs_f64(s).map_err(|_| anyhow!("bad --budget-seconds {s}"))?;
            b = b.with_time(d);
        }
        Ok(b)
    }
}

#[derive(Args, Debug)]
struct SolveArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    #[command(flatten)]
    budget: BudgetArgs,
    /// Write the optimal family here.
    #[arg(long)]
    witness: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum Format {
    Tsv,
    Markdown,
}

#[derive(Args, Debug)]
struct GridArgs {
    #[arg(long, value_parser = parse_kind)]
    model: ModelKind,
    /// Range of n, `A..B` or a single value.
    #[arg(long, value_parser = parse_range::<u8>)]
    n: RangeInclusive<u8>,
    /// Range of the parameter, `C..D` or a single value.
    #[arg(long, value_parser = parse_range::<u32>)]
    param: RangeInclusive<u32>,
    #[command(flatten)]
    budget: BudgetArgs,
    /// Results cache file.
    #[arg(long, env = "FRANKL_CACHE")]
    cache: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Tsv)]
    format: Format,
    /// Fill trivial cells analytically instead of solving them.
    #[arg(long)]
    analytic: bool,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum CheckName {
    Reference,
    Properties,
    Stability,
    FalgasRavry,
    All,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Checks to run, comma separated.
    #[arg(long, value_enum, value_delimiter = ',', default_value = "all")]
    checks: Vec<CheckName>,
    /// Grids as `KIND:A..B:C..D`, e.g. `f:1..5:1..16`; repeatable or comma separated.
    #[arg(long = "grid-spec", value_delimiter = ',', required = true, value_parser = parse_grid_spec)]
    grid_spec: Vec<GridSpec>,
    #[command(flatten)]
    budget: BudgetArgs,
    #[arg(long, env = "FRANKL_CACHE")]
    cache: Option<PathBuf>,
    #[arg(long)]
    analytic: bool,
}

#[derive(Args, Debug)]
struct ExportArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    /// Output path; standard output when omitted or `-`.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct FileArgs {
    /// Family file.
    #[arg(long = "in")]
    input: PathBuf,
}

fn parse_kind(s: &str) -> Result<ModelKind, String> {
    s.parse()
}

fn parse_range<T: FromStr + PartialOrd + Copy>(s: &str) -> Result<RangeInclusive<T>, String> {
    let num = |t: &str| {
        t.trim()
            .parse::<T>()
            .map_err(|_| format!("bad number `{t}` in range `{s}`"))
    };
    let (lo, hi) = match s.split_once("..") {
        Some((a, b)) => (num(a)?, num(b.trim_start_matches('='))?),
        None => {
            let v = num(s)?;
            (v, v)
        }
    };
    if lo > hi {
        return Err(format!("empty range `{s}`"));
    }
    Ok(lo..=hi)
}

fn parse_grid_spec(s: &str) -> Result<GridSpec, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let [kind, ns, params] = parts[..] else {
        return Err(format!("grid spec `{s}` is not KIND:A..B:C..D"));
    };
    Ok(GridSpec::new(
        parse_kind(kind)?,
        parse_range(ns)?,
        parse_range(params)?,
    ))
}

/// Exit status 2 marks invalid input, 1 a negative result.
struct Failure {
    code: u8,
    error: anyhow::Error,
}

impl<E: Into<anyhow::Error>> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure {
            code: 1,
            error: e.into(),
        }
    }
}

fn usage(e: impl Into<anyhow::Error>) -> Failure {
    Failure {
        code: 2,
        error: e.into(),
    }
}

fn instance(args: &InstanceArgs) -> Result<ModelInstance, Failure> {
    ModelInstance::new(args.model, args.n, args.param).map_err(usage)
}

fn read_family(path: &PathBuf) -> Result<Family> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_family(&text).with_context(|| format!("parsing {}", path.display()))
}

fn check_grid_spec(spec: &GridSpec) -> Result<(), Failure> {
    for n in [*spec.ns.start(), *spec.ns.end()] {
        if !(1..=16).contains(&n) {
            return Err(usage(anyhow!("n={n} is outside 1..=16")));
        }
    }
    if *spec.params.start() == 0 {
        return Err(usage(anyhow!("parameter must be at least 1")));
    }
    Ok(())
}

fn run_solve(args: &SolveArgs, out: &mut dyn io::Write) -> Result<u8, Failure> {
    let inst = instance(&args.instance)?;
    let budget = args.budget.budget().map_err(usage)?;
    let outcome = solve_with(
        &inst,
        &budget,
        &SolveOptions {
            threads: args.budget.threads.max(1),
        },
    );
    eprintln!(
        "{inst}: {} ({} nodes, {:.3}s)",
        outcome.status,
        outcome.stats.nodes,
        outcome.stats.elapsed.as_secs_f64()
    );
    match outcome.status {
        SolveStatus::Optimal => {
            writeln!(out, "value={}", outcome.value.unwrap())?;
            if let (Some(path), Some(w)) = (&args.witness, &outcome.witness) {
                fs::write(path, write_family(w))
                    .with_context(|| format!("writing {}", path.display()))?;
            }
            Ok(0)
        }
        SolveStatus::Infeasible => {
            writeln!(out, "infeasible")?;
            Ok(1)
        }
        SolveStatus::Aborted => {
            writeln!(out, "aborted")?;
            if let Some((v, _)) = &outcome.incumbent {
                let rel = if inst.kind.maximizes() { ">=" } else { "<=" };
                writeln!(out, "bound {rel} {v}")?;
            }
            Ok(1)
        }
    }
}

fn cell_text(cell: Option<Cell>) -> String {
    match cell {
        Some(Cell::Value(v)) => v.to_string(),
        Some(Cell::Infeasible) => "-".to_string(),
        None => "?".to_string(),
    }
}

/// Rows are parameter values, columns are values of n.
fn render_grid(table: &ValueTable, spec: &GridSpec, format: Format) -> String {
    let p = if spec.kind.maximizes() { "a" } else { "m" };
    let ns: Vec<u8> = spec.ns.clone().collect();
    let mut s = String::new();
    match format {
        Format::Tsv => {
            write!(s, "{p}\\n").unwrap();
            for n in &ns {
                write!(s, "\t{n}").unwrap();
            }
            s.push('\n');
            for param in spec.params.clone() {
                write!(s, "{param}").unwrap();
                for &n in &ns {
                    write!(s, "\t{}", cell_text(table.get(spec.kind, n, param))).unwrap();
                }
                s.push('\n');
            }
        }
        Format::Markdown => {
            write!(s, "| {p}\\n |").unwrap();
            for n in &ns {
                write!(s, " {n} |").unwrap();
            }
            s.push_str("\n|---|");
            for _ in &ns {
                s.push_str("---|");
            }
            s.push('\n');
            for param in spec.params.clone() {
                write!(s, "| {param} |").unwrap();
                for &n in &ns {
                    write!(s, " {} |", cell_text(table.get(spec.kind, n, param))).unwrap();
                }
                s.push('\n');
            }
        }
    }
    s
}

fn grid_options(
    budget: &BudgetArgs,
    cache: &Option<PathBuf>,
    analytic: bool,
) -> Result<GridOptions, Failure> {
    Ok(GridOptions {
        budget: budget.budget().map_err(usage)?,
        threads: budget.threads.max(1),
        analytic_trivial: analytic,
        cache: cache.clone(),
    })
}

fn run_grid(args: &GridArgs, out: &mut dyn io::Write) -> Result<u8, Failure> {
    let spec = GridSpec::new(args.model, args.n.clone(), args.param.clone());
    check_grid_spec(&spec)?;
    let opts = grid_options(&args.budget, &args.cache, args.analytic)?;
    let run = compute_grid(&spec, &opts)?;
    for w in run.warnings() {
        eprintln!("{w}");
    }
    out.write_all(render_grid(&run.table, &spec, args.format).as_bytes())?;
    Ok(0)
}

fn run_verify(args: &VerifyArgs, out: &mut dyn io::Write) -> Result<u8, Failure> {
    for spec in &args.grid_spec {
        check_grid_spec(spec)?;
    }
    let opts = grid_options(&args.budget, &args.cache, args.analytic)?;
    let mut table = ValueTable::new();
    for spec in &args.grid_spec {
        eprintln!(
            "computing {} n={:?} p={:?}",
            spec.kind, spec.ns, spec.params
        );
        let run = compute_grid(spec, &opts)?;
        for w in run.warnings() {
            eprintln!("{w}");
        }
        table.merge(&run.table);
    }
    let all = args.checks.contains(&CheckName::All);
    let wants = |c: CheckName| all || args.checks.contains(&c);
    let mut reports: Vec<CheckReport> = Vec::new();
    if wants(CheckName::Reference) {
        reports.push(compare_to_reference(&table));
    }
    if wants(CheckName::Properties) {
        reports.push(check_properties(&table));
    }
    if wants(CheckName::Stability) {
        reports.push(check_stability(&table));
    }
    if wants(CheckName::FalgasRavry) {
        reports.push(check_falgas_ravry(&table));
    }
    for r in &reports {
        out.write_all(r.to_text().as_bytes())?;
    }
    for r in &reports {
        for line in r.records() {
            writeln!(out, "{line}")?;
        }
    }
    Ok(if reports.iter().all(CheckReport::passed) {
        0
    } else {
        1
    })
}

fn run_export(args: &ExportArgs, out: &mut dyn io::Write) -> Result<u8, Failure> {
    let inst = instance(&args.instance)?;
    let text = export(&build(&inst)).to_text();
    match &args.out {
        Some(path) if path.as_os_str() != "-" => {
            fs::write(path, text).with_context(|| format!("writing {}", path.display()))?
        }
        _ => out.write_all(text.as_bytes())?,
    }
    Ok(0)
}

fn run_closure(args: &FileArgs, out: &mut dyn io::Write) -> Result<u8, Failure> {
    let family = read_family(&args.input)?;
    out.write_all(write_family(&family.union_closure()).as_bytes())?;
    Ok(0)
}

fn run_inspect(args: &FileArgs, out: &mut dyn io::Write) -> Result<u8, Failure> {
    let family = read_family(&args.input)?;
    let (a, m) = family.frankl_ratio();
    writeln!(
        out,
        "m={} n={} degree={} ratio={a}/{m} union_closed={}",
        family.len(),
        family.n(),
        family.degree(),
        family.is_union_closed()
    )?;
    let freq = family.frequencies();
    let freq: Vec<String> = freq.counts().iter().map(u32::to_string).collect();
    writeln!(out, "frequencies={}", freq.join(","))?;
    for (i, c) in family.twin_counts().iter().enumerate() {
        writeln!(
            out,
            "twins e={} total={} nontrivial={}",
            i + 1,
            c.total,
            c.nontrivial
        )?;
    }
    Ok(0)
}

fn run(cli: &Cli, out: &mut dyn io::Write) -> Result<u8, Failure> {
    match &cli.command {
        Command::Solve(a) => run_solve(a, out),
        Command::Grid(a) => run_grid(a, out),
        Command::Verify(a) => run_verify(a, out),
        Command::ExportLp(a) => run_export(a, out),
        Command::Closure(a) => run_closure(a, out),
        Command::Inspect(a) => run_inspect(a, out),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match run(&cli, &mut out) {
        Ok(code) => {
            let _ = out.flush();
            ExitCode::from(code)
        }
        Err(f) => {
            let _ = out.flush();
            eprintln!("error: {:#}", f.error);
            ExitCode::from(f.code)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(parse_range::<u8>("3..5").unwrap(), 3..=5);
        assert_eq!(parse_range::<u8>("3..=5").unwrap(), 3..=5);
        assert_eq!(parse_range::<u32>("7").unwrap(), 7..=7);
        assert!(parse_range::<u8>("5..3").is_err());
        assert!(parse_range::<u8>("x..3").is_err());
    }

    #[test]
    fn grid_specs() {
        let g = parse_grid_spec("gt:3..5:4..16").unwrap();
        assert_eq!(g.kind, ModelKind::GT);
        assert_eq!(g.ns, 3..=5);
        assert!(parse_grid_spec("f:1..5").is_err());
        assert!(parse_grid_spec("h:1..5:1..2").is_err());
    }

    #[test]
    fn markdown_layout() {
        let mut t = ValueTable::new();
        t.insert(
            frankl_core::verify::CellKey::new(ModelKind::G, 1, 2),
            Cell::Value(1),
            frankl_core::verify::Provenance::Solver,
        );
        t.insert(
            frankl_core::verify::CellKey::new(ModelKind::G, 1, 3),
            Cell::Infeasible,
            frankl_core::verify::Provenance::Solver,
        );
        let spec = GridSpec::new(ModelKind::G, 1..=2, 2..=3);
        assert_eq!(
            render_grid(&t, &spec, Format::Markdown),
            "| m\\n | 1 | 2 |\n|---|---|---|\n| 2 | 1 | ? |\n| 3 | - | ? |\n"
        );
    }
}

//! `mraf`: relaxed agreement forests of tree pairs from the command line.

mod report;
mod solve;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use mraf::approx::greedy_mast_raf;
use mraf::gadgets::{
    check_structural_lemmas, hardness_instance, nochain_caterpillar_family, unbounded_maf_instance, GadgetPieces,
    StructuralReport,
};
use mraf::mast::mast;
use mraf::phylo::{parse_newick, parse_pair, write_newick, PhyloTree};
use mraf::pims::{
    erdos_szekeres_partition, lds, lis, pims_exact, MonotonePartition, Permutation, PIMS_EXACT_MAX_N,
};
use mraf::raf::{
    mraf_bounds, validate_af, validate_raf, ExactOutcome, ForestKind, PartitionJson, RafPartition, Strategy,
};
use mraf::reduce::ReductionStep;
use mraf::{Budget, Error};
use serde::Serialize;

use crate::report::{build_report, pair_files, write_csv, ReportOptions};
use crate::solve::solve;

#[derive(Parser)]
#[command(name = "mraf", version, about = "Relaxed agreement forests, agreement subtrees and monotone partitions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    Bnb,
    CoverDp,
}

impl From<StrategyArg> for Strategy {
    fn from(s: StrategyArg) -> Self {
        match s {
            StrategyArg::Bnb => Strategy::Bnb,
            StrategyArg::CoverDp => Strategy::CoverDp,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(clap::Args)]
struct TimeoutArg {
    /// Seconds per solver call.
    #[arg(long, env = "RAF_TIMEOUT", default_value_t = 300.0)]
    timeout: f64,
}

impl TimeoutArg {
    fn duration(&self) -> Result<Duration> {
        Duration::try_from_secs_f64(self.timeout).context("timeout must be a non-negative number of seconds")
    }
}

#[derive(Subcommand)]
enum Command {
    /// Minimum relaxed agreement forest of a pair file.
    Exact {
        pair: PathBuf,
        #[arg(long, value_enum, default_value = "bnb")]
        strategy: StrategyArg,
        #[command(flatten)]
        timeout: TimeoutArg,
        /// Skip the common-cherry preprocessing.
        #[arg(long)]
        no_reduce: bool,
        /// Include wall-clock times (output is then not reproducible).
        #[arg(long)]
        timings: bool,
    },
    /// One row per pair file in a directory.
    Report {
        dir: PathBuf,
        #[arg(long, value_enum, default_value = "csv")]
        out: Format,
        #[arg(long, value_enum, default_value = "bnb")]
        strategy: StrategyArg,
        #[command(flatten)]
        timeout: TimeoutArg,
        /// Worker threads; defaults to the available parallelism.
        #[arg(long)]
        jobs: Option<usize>,
        #[arg(long)]
        timings: bool,
    },
    /// Maximum agreement subtree.
    Mast { pair: PathBuf },
    /// Forest built by repeatedly removing a maximum agreement subtree.
    Approx { pair: PathBuf },
    /// Lower and upper bounds on the forest size.
    Bounds { pair: PathBuf },
    /// Minimum partition of a permutation into monotone subsequences.
    Pims {
        permfile: PathBuf,
        #[command(flatten)]
        timeout: TimeoutArg,
    },
    /// Emit a generated tree pair as a pair file.
    Gadget {
        #[command(subcommand)]
        kind: GadgetKind,
    },
    /// Validate a partition (JSON) against a pair file.
    Check { pair: PathBuf, partition: PathBuf },
}

#[derive(Subcommand)]
enum GadgetKind {
    /// Tree pair encoding a permutation with `alpha` increasing and `beta`
    /// decreasing classes.
    Hardness {
        permfile: PathBuf,
        #[arg(long, default_value_t = 1)]
        alpha: usize,
        #[arg(long, default_value_t = 1)]
        beta: usize,
    },
    /// Pair with forest size 2 but agreement forests growing with the base
    /// tree, read as a single Newick tree.
    Obs2 { base: PathBuf },
    /// Interleaved caterpillars on `m` numbers and `m` letters.
    Nochain { m: usize },
}

/// Failure of a solver that ran out of time after printing its bounds.
#[derive(Debug)]
struct TimedOut;

impl std::fmt::Display for TimedOut {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("time limit reached; bounds reported")
    }
}

impl std::error::Error for TimedOut {}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn read_pair(path: &Path) -> Result<(PhyloTree, PhyloTree)> {
    parse_pair(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

fn read_permutation(path: &Path) -> Result<Permutation> {
    read(path)?.parse().with_context(|| format!("parsing {}", path.display()))
}

fn print_json<T: Serialize>(value: &T) -> Result<()> {
    let mut out = std::io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    Ok(())
}

#[derive(Serialize)]
struct Reduction {
    fired: bool,
    n_after: usize,
    steps: Vec<ReductionStep>,
}

#[derive(Serialize)]
struct ExactJson {
    status: &'static str,
    n: usize,
    lower: usize,
    upper: usize,
    strategy: String,
    #[serde(flatten)]
    partition: PartitionJson,
    reduction: Reduction,
    #[serde(skip_serializing_if = "Option::is_none")]
    elapsed_ms: Option<u128>,
}

fn cmd_exact(pair: &Path, strategy: Strategy, timeout: Duration, reduce: bool, timings: bool) -> Result<()> {
    let (t1, t2) = read_pair(pair)?;
    let solved = solve(&t1, &t2, strategy, timeout, reduce)?;
    let (lower, upper) = solved.outcome.interval();
    let status = match solved.outcome {
        ExactOutcome::Optimal(_) => "optimal",
        ExactOutcome::TimedOut { .. } => "timeout",
    };
    print_json(&ExactJson {
        status,
        n: t1.n(),
        lower,
        upper,
        strategy: strategy.to_string(),
        partition: solved.outcome.best().clone().normalized().to_json(t1.universe()),
        reduction: Reduction { fired: !solved.steps.is_empty(), n_after: solved.reduced_n, steps: solved.steps },
        elapsed_ms: timings.then_some(solved.elapsed.as_millis()),
    })?;
    if status == "timeout" {
        return Err(TimedOut.into());
    }
    Ok(())
}

fn cmd_report(dir: &Path, format: Format, opts: ReportOptions) -> Result<()> {
    let files = pair_files(dir)?;
    let rows = build_report(&files, &opts);
    match format {
        Format::Csv => write_csv(&rows, opts.timings, std::io::stdout().lock())?,
        Format::Json => print_json(&rows)?,
    }
    if rows.iter().any(|r| r.mraf.is_none() && r.mraf_lower.is_some()) {
        return Err(TimedOut.into());
    }
    Ok(())
}

#[derive(Serialize)]
struct MastJson {
    n: usize,
    size: usize,
    taxa: Vec<String>,
}

#[derive(Serialize)]
struct BoundsJson {
    n: usize,
    mast: usize,
    lower: usize,
    upper: usize,
    greedy: usize,
}

#[derive(Serialize)]
struct ClassJson {
    direction: mraf::pims::Direction,
    positions: Vec<usize>,
    values: Vec<usize>,
}

#[derive(Serialize)]
struct PimsJson {
    n: usize,
    exact: bool,
    size: usize,
    lis: usize,
    lds: usize,
    classes: Vec<ClassJson>,
}

fn pims_json(pi: &Permutation, m: &MonotonePartition, exact: bool) -> PimsJson {
    let classes = m
        .classes
        .iter()
        .filter(|c| !c.positions.is_empty())
        .map(|c| ClassJson {
            direction: c.direction,
            positions: c.positions.iter().map(|&p| p + 1).collect(),
            values: c.positions.iter().map(|&p| pi.value(p)).collect(),
        })
        .collect();
    PimsJson { n: pi.len(), exact, size: m.size(), lis: lis(pi).len(), lds: lds(pi).len(), classes }
}

fn cmd_pims(path: &Path, timeout: Duration) -> Result<()> {
    let pi = read_permutation(path)?;
    if pi.len() > PIMS_EXACT_MAX_N {
        return print_json(&pims_json(&pi, &erdos_szekeres_partition(&pi), false));
    }
    match pims_exact(&pi, Budget::with_timeout(timeout)) {
        Ok(m) => print_json(&pims_json(&pi, &m, true)),
        Err(Error::Timeout) => {
            print_json(&pims_json(&pi, &erdos_szekeres_partition(&pi), false))?;
            Err(TimedOut.into())
        }
        Err(e) => Err(e.into()),
    }
}

fn print_pair(comment: &str, t1: &PhyloTree, t2: &PhyloTree) -> Result<()> {
    let mut out = std::io::stdout().lock();
    for line in comment.lines() {
        writeln!(out, "# {line}")?;
    }
    writeln!(out, "{}", write_newick(t1))?;
    writeln!(out, "{}", write_newick(t2))?;
    Ok(())
}

fn cmd_gadget(kind: GadgetKind) -> Result<()> {
    match kind {
        GadgetKind::Hardness { permfile, alpha, beta } => {
            let pi = read_permutation(&permfile)?;
            let inst = hardness_instance(&pi, alpha, beta)?;
            let comment = format!(
                "hardness gadget for permutation {pi}, alpha = {alpha}, beta = {beta}\n{} taxa",
                inst.t1.n()
            );
            print_pair(&comment, &inst.t1, &inst.t2)
        }
        GadgetKind::Obs2 { base } => {
            let text = read(&base)?;
            let line = text
                .lines()
                .map(|l| l.split('#').next().unwrap_or("").trim())
                .find(|l| !l.is_empty())
                .context("no tree in base file")?;
            let base = parse_newick(line, None)?;
            let f = unbounded_maf_instance(&base)?;
            print_pair(&format!("unbounded agreement forest family on {} base leaves", base.n()), &f.t1, &f.t2)
        }
        GadgetKind::Nochain { m } => {
            let f = nochain_caterpillar_family(m)?;
            print_pair(&format!("interleaved caterpillars, m = {m}"), &f.t1, &f.t2)
        }
    }
}

#[derive(Serialize)]
struct CheckJson {
    kind: ForestKind,
    size: usize,
    valid_raf: bool,
    valid_af: bool,
    valid: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    structural: Option<StructuralReport>,
}

fn cmd_check(pair: &Path, partition: &Path) -> Result<()> {
    let (t1, t2) = read_pair(pair)?;
    let json: PartitionJson = serde_json::from_str(&read(partition)?)
        .with_context(|| format!("parsing {}", partition.display()))?;
    let p = RafPartition::from_json(t1.universe(), &json)?;
    let valid_raf = validate_raf(&t1, &t2, &p)?;
    let valid_af = valid_raf && validate_af(&t1, &t2, &p)?;
    let valid = match p.kind {
        ForestKind::Raf => valid_raf,
        ForestKind::Af => valid_af,
    };
    let structural = GadgetPieces::from_labels(t1.universe()).map(|pieces| check_structural_lemmas(&pieces, &p));
    print_json(&CheckJson { kind: p.kind, size: p.size(), valid_raf, valid_af, valid, structural })
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Exact { pair, strategy, timeout, no_reduce, timings } => {
            cmd_exact(&pair, strategy.into(), timeout.duration()?, !no_reduce, timings)
        }
        Command::Report { dir, out, strategy, timeout, jobs, timings } => {
            let jobs = jobs.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
            let opts = ReportOptions { strategy: strategy.into(), timeout: timeout.duration()?, timings, jobs };
            cmd_report(&dir, out, opts)
        }
        Command::Mast { pair } => {
            let (t1, t2) = read_pair(&pair)?;
            let m = mast(&t1, &t2)?;
            print_json(&MastJson { n: t1.n(), size: m.size, taxa: t1.universe().labels_of(&m.taxa) })
        }
        Command::Approx { pair } => {
            let (t1, t2) = read_pair(&pair)?;
            print_json(&greedy_mast_raf(&t1, &t2)?.normalized().to_json(t1.universe()))
        }
        Command::Bounds { pair } => {
            let (t1, t2) = read_pair(&pair)?;
            let b = mraf_bounds(&t1, &t2)?;
            let greedy = greedy_mast_raf(&t1, &t2)?.size();
            print_json(&BoundsJson { n: t1.n(), mast: b.mast_size, lower: b.lower, upper: b.upper, greedy })
        }
        Command::Pims { permfile, timeout } => cmd_pims(&permfile, timeout.duration()?),
        Command::Gadget { kind } => cmd_gadget(kind),
        Command::Check { pair, partition } => cmd_check(&pair, &partition),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) if e.is::<TimedOut>() => {
            eprintln!("mraf: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

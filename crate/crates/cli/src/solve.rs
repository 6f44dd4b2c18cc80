//! Exact solving with common-cherry preprocessing, shared by `exact` and
//! `report`.

use std::time::{Duration, Instant};

use mraf::raf::{mraf_exact, ExactOutcome, RafPartition, Strategy};
use mraf::reduce::{subtree_reduce, ReductionStep};
use mraf::{Budget, PhyloTree};

pub struct Solved {
    /// Outcome on the original taxa.
    pub outcome: ExactOutcome,
    pub steps: Vec<ReductionStep>,
    pub reduced_n: usize,
    pub elapsed: Duration,
}

pub fn solve(t1: &PhyloTree, t2: &PhyloTree, strategy: Strategy, timeout: Duration, reduce: bool) -> mraf::Result<Solved> {
    let start = Instant::now();
    let budget = Budget::with_timeout(timeout);
    if !reduce {
        let outcome = mraf_exact(t1, t2, strategy, budget)?;
        return Ok(Solved { outcome, steps: Vec::new(), reduced_n: t1.n(), elapsed: start.elapsed() });
    }
    let trace = subtree_reduce(t1, t2)?;
    let (r1, r2) = &trace.final_pair;
    let expand = |p: &RafPartition| trace.expand(p);
    let outcome = match mraf_exact(r1, r2, strategy, budget)? {
        ExactOutcome::Optimal(p) => ExactOutcome::Optimal(expand(&p)),
        ExactOutcome::TimedOut { lower, best } => ExactOutcome::TimedOut { lower, best: expand(&best) },
    };
    Ok(Solved { outcome, reduced_n: r1.n(), steps: trace.steps, elapsed: start.elapsed() })
}

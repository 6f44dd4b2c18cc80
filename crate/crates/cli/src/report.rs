//! One row of solver results per pair file in a directory.

use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::thread;
use std::time::{Duration, Instant};

use anyhow::{Context, Result};
use mraf::approx::greedy_mast_raf;
use mraf::mast::mast;
use mraf::phylo::parse_pair;
use mraf::raf::{maf_bruteforce, ExactOutcome, Strategy, MAF_BRUTEFORCE_MAX_N};
use serde::Serialize;

use crate::solve::solve;

pub struct ReportOptions {
    pub strategy: Strategy,
    pub timeout: Duration,
    pub timings: bool,
    pub jobs: usize,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct Timings {
    pub mraf_ms: u128,
    pub mast_ms: u128,
    pub greedy_ms: u128,
    pub maf_ms: Option<u128>,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct ReportRow {
    pub pair: String,
    pub n: Option<usize>,
    /// Exact size; absent when the solver timed out.
    pub mraf: Option<usize>,
    pub mraf_lower: Option<usize>,
    pub mraf_upper: Option<usize>,
    pub mast: Option<usize>,
    /// `ceil(n / mast)`.
    pub lower_bound: Option<usize>,
    pub greedy: Option<usize>,
    /// Only computed for small pairs.
    pub maf: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings: Option<Timings>,
}

pub const CSV_HEADER: [&str; 10] =
    ["pair", "n", "mraf", "mraf_lower", "mraf_upper", "mast", "lower_bound", "greedy", "maf", "error"];
pub const CSV_TIMING_HEADER: [&str; 4] = ["mraf_ms", "mast_ms", "greedy_ms", "maf_ms"];

fn cell<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map(T::to_string).unwrap_or_default()
}

impl ReportRow {
    fn csv_record(&self, timings: bool) -> Vec<String> {
        let mut rec = vec![
            self.pair.clone(),
            cell(&self.n),
            cell(&self.mraf),
            cell(&self.mraf_lower),
            cell(&self.mraf_upper),
            cell(&self.mast),
            cell(&self.lower_bound),
            cell(&self.greedy),
            cell(&self.maf),
            self.error.clone().unwrap_or_default(),
        ];
        if timings {
            let t = self.timings.clone().unwrap_or_default();
            rec.extend([t.mraf_ms.to_string(), t.mast_ms.to_string(), t.greedy_ms.to_string(), cell(&t.maf_ms)]);
        }
        rec
    }
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, u128) {
    let start = Instant::now();
    let v = f();
    (v, start.elapsed().as_millis())
}

pub fn row_for(path: &Path, opts: &ReportOptions) -> ReportRow {
    let pair = path.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let mut row = ReportRow { pair, ..ReportRow::default() };
    if let Err(e) = fill_row(path, opts, &mut row) {
        row.error = Some(format!("{e:#}"));
    }
    row
}

fn fill_row(path: &Path, opts: &ReportOptions, row: &mut ReportRow) -> Result<()> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let (t1, t2) = parse_pair(&text)?;
    let n = t1.n();
    row.n = Some(n);
    let mut timings = Timings::default();

    let (found, ms) = timed(|| mast(&t1, &t2));
    let m = found?.size;
    timings.mast_ms = ms;
    row.mast = Some(m);
    row.lower_bound = Some(n.div_ceil(m.max(1)));

    let (greedy, ms) = timed(|| greedy_mast_raf(&t1, &t2));
    timings.greedy_ms = ms;
    row.greedy = Some(greedy?.size());

    let solved = solve(&t1, &t2, opts.strategy, opts.timeout, true)?;
    timings.mraf_ms = solved.elapsed.as_millis();
    let (lower, upper) = solved.outcome.interval();
    row.mraf_lower = Some(lower);
    row.mraf_upper = Some(upper);
    if let ExactOutcome::Optimal(p) = &solved.outcome {
        row.mraf = Some(p.size());
    }

    if n <= MAF_BRUTEFORCE_MAX_N {
        let (maf, ms) = timed(|| maf_bruteforce(&t1, &t2));
        timings.maf_ms = Some(ms);
        row.maf = Some(maf?.size());
    }
    if opts.timings {
        row.timings = Some(timings);
    }
    Ok(())
}

/// Regular files of `dir` in file-name order.
pub fn pair_files(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut files = Vec::new();
    for entry in std::fs::read_dir(dir).with_context(|| format!("reading directory {}", dir.display()))? {
        let entry = entry?;
        if entry.file_type()?.is_file() {
            files.push(entry.path());
        }
    }
    files.sort();
    Ok(files)
}

/// Rows for every file, computed on up to `opts.jobs` threads and returned
/// in file order.
pub fn build_report(files: &[PathBuf], opts: &ReportOptions) -> Vec<ReportRow> {
    let rows: Vec<Mutex<Option<ReportRow>>> = files.iter().map(|_| Mutex::new(None)).collect();
    let next = AtomicUsize::new(0);
    thread::scope(|s| {
        for _ in 0..opts.jobs.clamp(1, files.len().max(1)) {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(path) = files.get(i) else { break };
                *rows[i].lock().expect("row lock") = Some(row_for(path, opts));
            });
        }
    });
    rows.into_iter().map(|m| m.into_inner().expect("row lock").expect("every row computed")).collect()
}

pub fn write_csv(rows: &[ReportRow], timings: bool, out: impl std::io::Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header: Vec<&str> = CSV_HEADER.to_vec();
    if timings {
        header.extend(CSV_TIMING_HEADER);
    }
    w.write_record(&header)?;
    for r in rows {
        w.write_record(r.csv_record(timings))?;
    }
    w.flush()?;
    Ok(())
}

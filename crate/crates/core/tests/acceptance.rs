//! Acceptance suite. Prints one PASS, FAIL or SKIP line per criterion and
//! exits non-zero if any criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::time::{Duration, Instant};

use mraf::approx::greedy_mast_raf;
use mraf::caterpillar_dp::caterpillar_xp_decide;
use mraf::gadgets::{hardness_instance, pims_solution_to_raf_gadget, unbounded_maf_instance};
use mraf::mast::mast;
use mraf::phylo::{parse_newick, parse_pair, PhyloTree};
use mraf::pims::{
    erdos_szekeres_partition, lds, lis, pims_exact, Direction, MonotoneClass, MonotonePartition, Permutation,
};
use mraf::raf::{maf_bruteforce, mraf_bounds, mraf_bruteforce, mraf_exact, validate_raf, ExactOutcome, Strategy};
use mraf::random::{
    perturbed_pair, plant_common_chain, random_caterpillar, random_pair, random_permutation, random_tree,
};
use mraf::reduce::{find_common_chains, subtree_reduce};
use mraf::{Budget, TaxonSet, Universe};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

enum Verdict {
    Pass(String),
    Fail(String),
    Skip(String),
}

use Verdict::{Fail, Pass, Skip};

type Criterion = (&'static str, fn() -> Verdict);

fn exact_size(t1: &PhyloTree, t2: &PhyloTree, strategy: Strategy) -> usize {
    mraf_exact(t1, t2, strategy, Budget::unlimited()).unwrap().into_optimal().unwrap().size()
}

fn ceil_div(a: usize, b: usize) -> usize {
    a.div_ceil(b)
}

fn ceil_sqrt(n: usize) -> usize {
    let mut r = (n as f64).sqrt() as usize;
    while r * r < n {
        r += 1;
    }
    while r > 0 && (r - 1) * (r - 1) >= n {
        r -= 1;
    }
    r
}

/// Smallest `r` with `r >= 2 sqrt(x)`, i.e. `r^2 >= 4x`.
fn ceil_two_sqrt(x: usize) -> usize {
    ceil_sqrt(4 * x)
}

fn oracle_equivalence() -> Verdict {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for i in 0..240 {
        let n = 4 + i % 4;
        let (t1, t2) = if i % 2 == 0 { random_pair(n, &mut rng) } else { perturbed_pair(n, 2, &mut rng) };
        let bnb = exact_size(&t1, &t2, Strategy::Bnb);
        let dp = exact_size(&t1, &t2, Strategy::CoverDp);
        let brute = mraf_bruteforce(&t1, &t2).unwrap().size();
        if bnb != dp || dp != brute {
            return Fail(format!("pair {i}: bnb {bnb}, cover-dp {dp}, brute force {brute}"));
        }
    }
    let elapsed = start.elapsed();
    if elapsed > Duration::from_secs(60) {
        return Fail(format!("240 pairs agree but took {elapsed:?}"));
    }
    Pass("240 pairs with n in 4..=7: bnb = cover-dp = brute force".into())
}

/// Name, n, MRAF, MAST.
const GRASS: [(&str, usize, usize, usize); 15] = [
    ("00_rpoC_waxy", 10, 2, 8),
    ("01_phyB_waxy", 14, 2, 11),
    ("02_phyB_rbcL", 21, 3, 14),
    ("03_rbcL_waxy", 12, 2, 9),
    ("04_phyB_rpoC", 21, 2, 15),
    ("05_waxy_ITS", 15, 3, 10),
    ("06_phyB_ITS", 30, 4, 17),
    ("07_ndhF_waxy", 19, 3, 11),
    ("08_ndhF_rpoC", 34, 3, 20),
    ("09_rbcL_rpoC", 26, 4, 14),
    ("10_ndhF_rbcL", 36, 4, 20),
    ("11_rbcL_ITS", 29, 4, 17),
    ("12_ndhF_phyB", 40, 3, 30),
    ("13_rpoC_ITS", 31, 4, 16),
    ("14_ndhF_ITS", 46, 5, 20),
];

fn grass_dir() -> PathBuf {
    std::env::var_os("MRAF_GRASS_DIR")
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/../../data/grass")))
}

fn grass_table() -> Verdict {
    let dir = grass_dir();
    if !dir.is_dir() {
        return Skip(format!("grass pair files not found at {} (set MRAF_GRASS_DIR)", dir.display()));
    }
    let mut notes = Vec::new();
    for (name, n, want_mraf, want_mast) in GRASS {
        let path = dir.join(format!("{name}.txt"));
        let Ok(text) = std::fs::read_to_string(&path) else {
            return Fail(format!("missing {}", path.display()));
        };
        let (t1, t2) = match parse_pair(&text) {
            Ok(p) => p,
            Err(e) => return Fail(format!("{name}: {e}")),
        };
        if t1.n() != n {
            return Fail(format!("{name}: n = {}, expected {n}", t1.n()));
        }
        let got_mast = mast(&t1, &t2).unwrap().size;
        if got_mast != want_mast {
            return Fail(format!("{name}: MAST {got_mast}, expected {want_mast}"));
        }
        let budget = Budget::with_timeout(Duration::from_secs(600));
        match mraf_exact(&t1, &t2, Strategy::Bnb, budget).unwrap() {
            ExactOutcome::Optimal(p) if p.size() == want_mraf => {}
            ExactOutcome::Optimal(p) => return Fail(format!("{name}: MRAF {}, expected {want_mraf}", p.size())),
            ExactOutcome::TimedOut { lower, best } if n <= 31 => {
                return Fail(format!("{name}: timed out with interval [{lower}, {}]", best.size()))
            }
            ExactOutcome::TimedOut { lower, best } => {
                if !(lower <= want_mraf && want_mraf <= best.size()) {
                    return Fail(format!("{name}: interval [{lower}, {}] misses {want_mraf}", best.size()));
                }
                notes.push(format!("{name} in [{lower}, {}]", best.size()));
            }
        }
        let b = mraf_bounds(&t1, &t2).unwrap();
        if b.lower != n.div_ceil(want_mast) || !(b.lower <= want_mraf && want_mraf <= b.upper) {
            return Fail(format!("{name}: bounds [{}, {}] inconsistent with the table", b.lower, b.upper));
        }
    }
    if notes.is_empty() {
        Pass("all 15 rows solved exactly and match MRAF and MAST".into())
    } else {
        Pass(format!("rows up to n = 31 match; timed-out stretch rows: {}", notes.join(", ")))
    }
}

fn unbounded_family() -> Verdict {
    let start = Instant::now();
    let bases = ["(1,2,3);", "((1,2),(3,4));"];
    for text in bases {
        let base = parse_newick(text, None).unwrap();
        let f = unbounded_maf_instance(&base).unwrap();
        let size = exact_size(&f.t1, &f.t2, Strategy::Bnb);
        if size != 2 {
            return Fail(format!("base with {} leaves: MRAF {size}", base.n()));
        }
    }
    let f = unbounded_maf_instance(&parse_newick(bases[0], None).unwrap()).unwrap();
    let maf = maf_bruteforce(&f.t1, &f.t2).unwrap().size();
    if maf < 3 {
        return Fail(format!("MAF {maf} on 12 taxa"));
    }
    if start.elapsed() > Duration::from_secs(300) {
        return Fail(format!("took {:?}", start.elapsed()));
    }
    Pass(format!("MRAF = 2 for bases of 3 and 4 leaves; MAF = {maf} for 3"))
}

fn greedy_bounds() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut tested = 0;
    let mut witness = None;
    for i in 0..300 {
        let n = 6 + i % 10;
        let (t1, t2) = random_pair(n, &mut rng);
        let greedy = greedy_mast_raf(&t1, &t2).unwrap().size();
        let opt = exact_size(&t1, &t2, Strategy::Bnb);
        tested += 1;
        if !(opt <= greedy && greedy <= ceil_div(n, 3)) {
            return Fail(format!("n = {n}: optimum {opt}, greedy {greedy}"));
        }
        if witness.is_none() && 3 * greedy >= 4 * opt {
            witness = Some((n, greedy, opt));
        }
    }
    match witness {
        Some((n, g, o)) => Pass(format!("{tested} pairs satisfy the bounds; n = {n} has greedy {g} vs optimum {o}")),
        None => Fail(format!("{tested} pairs satisfy the bounds but none reaches ratio 4/3")),
    }
}

/// Fewest monotone classes by trying every set partition of the positions,
/// cut only by the best count found so far.
fn pims_by_enumeration(pi: &Permutation) -> usize {
    fn monotone(values: &[usize]) -> bool {
        values.windows(2).all(|w| w[0] < w[1]) || values.windows(2).all(|w| w[0] > w[1])
    }
    fn go(pi: &Permutation, i: usize, blocks: &mut Vec<Vec<usize>>, best: &mut usize) {
        if blocks.len() >= *best {
            return;
        }
        if i == pi.len() {
            *best = blocks.len();
            return;
        }
        for b in 0..blocks.len() {
            blocks[b].push(pi.value(i));
            if monotone(&blocks[b]) {
                go(pi, i + 1, blocks, best);
            }
            blocks[b].pop();
        }
        blocks.push(vec![pi.value(i)]);
        go(pi, i + 1, blocks, best);
        blocks.pop();
    }
    let mut best = pi.len() + 1;
    go(pi, 0, &mut Vec::new(), &mut best);
    best.min(pi.len())
}

fn pims_suite() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for i in 0..1000 {
        let n = 1 + i % 200;
        let pi = random_permutation(n, &mut rng);
        let m = erdos_szekeres_partition(&pi);
        if m.validate(&pi).is_err() || m.size() > ceil_two_sqrt(n) {
            return Fail(format!("n = {n}: {} classes for {pi}", m.size()));
        }
        if lis(&pi).len().max(lds(&pi).len()) < ceil_sqrt(n) {
            return Fail(format!("n = {n}: LIS and LDS both below ceil(sqrt(n)) for {pi}"));
        }
    }
    let mut checked = 0;
    for n in 1..=7 {
        for pi in Permutation::all(n) {
            let m = pims_exact(&pi, Budget::unlimited()).unwrap();
            let want = pims_by_enumeration(&pi);
            if m.validate(&pi).is_err() || m.size() != want {
                return Fail(format!("{pi}: exact {} classes, enumeration {want}", m.size()));
            }
            checked += 1;
        }
    }
    Pass(format!("1000 random permutations up to n = 200; {checked} permutations up to n = 7 match enumeration"))
}

/// A split into one increasing and one decreasing class, either possibly
/// empty, if one exists.
fn skew_split(pi: &Permutation) -> Option<MonotonePartition> {
    let n = pi.len();
    (0u32..1 << n).find_map(|mask| {
        let inc: Vec<usize> = (0..n).filter(|&p| mask >> p & 1 == 1).collect();
        let dec: Vec<usize> = (0..n).filter(|&p| mask >> p & 1 == 0).collect();
        let up = inc.windows(2).all(|w| pi.value(w[0]) < pi.value(w[1]));
        let down = dec.windows(2).all(|w| pi.value(w[0]) > pi.value(w[1]));
        (up && down).then(|| MonotonePartition {
            classes: vec![
                MonotoneClass { direction: Direction::Increasing, positions: inc },
                MonotoneClass { direction: Direction::Decreasing, positions: dec },
            ],
        })
    })
}

fn gadget_equivalence() -> Verdict {
    let mut yes = 0;
    let mut no = 0;
    for n in 1..=5 {
        for pi in Permutation::all(n) {
            let inst = hardness_instance(&pi, 1, 1).unwrap();
            if inst.t1.n() != n + 8 * 4 {
                return Fail(format!("{pi}: {} leaves", inst.t1.n()));
            }
            let mraf = exact_size(&inst.t1, &inst.t2, Strategy::Bnb);
            let split = skew_split(&pi);
            if (mraf <= 2) != split.is_some() {
                return Fail(format!("{pi}: MRAF {mraf}, split exists: {}", split.is_some()));
            }
            match split {
                Some(m) => {
                    yes += 1;
                    let p = pims_solution_to_raf_gadget(&inst, &m).unwrap();
                    if p.size() != 2 || !validate_raf(&inst.t1, &inst.t2, &p).unwrap() || !inst.check(&p).is_clean()
                    {
                        return Fail(format!("{pi}: forward-mapped forest rejected"));
                    }
                }
                None => no += 1,
            }
        }
    }
    Pass(format!("all 153 permutations up to n = 5: {yes} yes, {no} no, leaf counts n + 32"))
}

fn caterpillar_dp() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut yes = 0;
    for i in 0..50 {
        let n = 5 + i % 8;
        let k = 1 + i % 3;
        let u = Universe::numbered(n);
        let t1 = random_caterpillar(u.clone(), &mut rng);
        let t2 = random_tree(u, &mut rng);
        let opt = exact_size(&t1, &t2, Strategy::Bnb);
        let got = caterpillar_xp_decide(&t1, &t2, k).unwrap();
        if got.is_some() != (opt <= k) {
            return Fail(format!("n = {n}, k = {k}: optimum {opt}, decision {}", got.is_some()));
        }
        if let Some(p) = got {
            yes += 1;
            if p.size() > k || !validate_raf(&t1, &t2, &p).unwrap() {
                return Fail(format!("n = {n}, k = {k}: invalid witness"));
            }
        }
    }
    Pass(format!("50 instances with n in 5..=12, k in 1..=3 agree; {yes} witnesses validate"))
}

fn sandwich() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for i in 0..100 {
        let n = 4 + i % 9;
        let (t1, t2, pi) = mraf::random::random_caterpillar_pair(n, &mut rng);
        let mraf = exact_size(&t1, &t2, Strategy::Bnb);
        let pims = pims_exact(&pi, Budget::unlimited()).unwrap().size();
        let slack = ceil_two_sqrt(2 * mraf);
        if !(mraf <= pims && pims <= mraf + slack) {
            return Fail(format!("{pi}: MRAF {mraf}, PIMS {pims}"));
        }
    }
    Pass("100 caterpillar pairs with n in 4..=12".into())
}

fn drop_taxon(t: &PhyloTree, x: usize) -> PhyloTree {
    let mut keep = t.taxa();
    keep.remove(x);
    t.restrict(&keep).unwrap()
}

fn reduction_safety() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut merged = 0;
    for i in 0..100 {
        let n = 4 + i % 7;
        let (t1, t2) = perturbed_pair(n, 1 + i % 3, &mut rng);
        let before = exact_size(&t1, &t2, Strategy::Bnb);
        let trace = subtree_reduce(&t1, &t2).unwrap();
        let (r1, r2) = &trace.final_pair;
        let after = exact_size(r1, r2, Strategy::Bnb);
        if before != after {
            return Fail(format!("pair {i}: MRAF {before} before reduction, {after} after"));
        }
        merged += trace.steps.len();
    }
    for attempt in 0..4000 {
        let base = rng.gen_range(5..=11);
        let (t1, t2, chain) = plant_common_chain(base, 5, &mut rng);
        let planted = TaxonSet::from_ids(t1.n(), chain.iter().copied());
        if !find_common_chains(&t1, &t2).unwrap().iter().any(|c| planted.is_subset(c)) {
            return Fail(format!("attempt {attempt}: planted chain not detected"));
        }
        let full = exact_size(&t1, &t2, Strategy::Bnb);
        for &c in &chain {
            let (s1, s2) = (drop_taxon(&t1, c), drop_taxon(&t2, c));
            let shorter = exact_size(&s1, &s2, Strategy::Bnb);
            if shorter < full {
                return Pass(format!(
                    "100 reductions ({merged} merges) keep MRAF; deleting {} from a 5-chain lowers MRAF {full} -> {shorter} (attempt {attempt})",
                    t1.label(c)
                ));
            }
        }
    }
    Fail("reductions keep MRAF, but no chain deletion lowered MRAF in 4000 attempts".into())
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("oracle equivalence", oracle_equivalence),
        ("grass table", grass_table),
        ("unbounded MAF family", unbounded_family),
        ("greedy bounds", greedy_bounds),
        ("monotone partitions", pims_suite),
        ("hardness gadget", gadget_equivalence),
        ("caterpillar DP", caterpillar_dp),
        ("sandwich inequality", sandwich),
        ("reduction safety", reduction_safety),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let verdict = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Fail(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let secs = start.elapsed().as_secs_f64();
        let (tag, detail) = match verdict {
            Pass(d) => ("PASS", d),
            Fail(d) => {
                failed += 1;
                ("FAIL", d)
            }
            Skip(d) => ("SKIP", d),
        };
        println!("{tag} [{}] {name}: {detail} ({secs:.1}s)", i + 1);
    }
    if failed > 0 {
        eprintln!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}

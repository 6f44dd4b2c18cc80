use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::budget::{Budget, Ticker};
use crate::error::{Error, Result};
use crate::phylo::PhyloTree;
use crate::raf::bounds::mraf_bounds;
use crate::raf::hypergraph::{build_conflict_hypergraph, ConflictHypergraph};
use crate::raf::partition::{ForestKind, RafPartition};
use crate::taxa::{TaxonId, TaxonSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    /// Weak coloring of the conflict hypergraph by branch and bound.
    Bnb,
    /// Memoized minimum cover by maximal agreement sets.
    CoverDp,
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Strategy::Bnb => "bnb",
            Strategy::CoverDp => "cover-dp",
        })
    }
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bnb" => Ok(Strategy::Bnb),
            "cover-dp" | "cover_dp" => Ok(Strategy::CoverDp),
            _ => Err(Error::InvalidParameters(format!("unknown strategy {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExactOutcome {
    Optimal(RafPartition),
    /// The budget ran out: every RAF has at least `lower` components and
    /// `best` is the smallest one found.
    TimedOut { lower: usize, best: RafPartition },
}

impl ExactOutcome {
    pub fn optimal(&self) -> Option<&RafPartition> {
        match self {
            ExactOutcome::Optimal(p) => Some(p),
            ExactOutcome::TimedOut { .. } => None,
        }
    }

    pub fn best(&self) -> &RafPartition {
        match self {
            ExactOutcome::Optimal(p) | ExactOutcome::TimedOut { best: p, .. } => p,
        }
    }

    pub fn into_optimal(self) -> Result<RafPartition> {
        match self {
            ExactOutcome::Optimal(p) => Ok(p),
            ExactOutcome::TimedOut { .. } => Err(Error::Timeout),
        }
    }

    /// `(lower, upper)` on the optimum size.
    pub fn interval(&self) -> (usize, usize) {
        match self {
            ExactOutcome::Optimal(p) => (p.size(), p.size()),
            ExactOutcome::TimedOut { lower, best } => (*lower, best.size()),
        }
    }
}

pub const COVER_DP_MAX_N: usize = 24;

/// A minimum relaxed agreement forest.
pub fn mraf_exact(t1: &PhyloTree, t2: &PhyloTree, strategy: Strategy, budget: Budget) -> Result<ExactOutcome> {
    t1.check_same_universe(t2)?;
    let n = t1.n();
    if strategy == Strategy::CoverDp && n > COVER_DP_MAX_N {
        return Err(Error::TooLarge { what: "cover_dp", n, max: COVER_DP_MAX_N });
    }
    let bounds = mraf_bounds(t1, t2)?;
    if bounds.lower >= bounds.upper {
        return Ok(ExactOutcome::Optimal(bounds.witness_upper));
    }
    let h = build_conflict_hypergraph(t1, t2)?;
    let mut ticker = Ticker::new(budget);
    let found = match strategy {
        Strategy::Bnb => color_search(&h, bounds.lower, bounds.upper, &mut ticker),
        Strategy::CoverDp => cover_search(&h, &mut ticker).map(Some).ok_or(bounds.lower),
    };
    Ok(match found {
        Ok(Some(p)) => ExactOutcome::Optimal(p),
        Ok(None) => ExactOutcome::Optimal(bounds.witness_upper),
        Err(lower) => ExactOutcome::TimedOut { lower, best: bounds.witness_upper },
    })
}

/// Iterative deepening over the color count: `Ok(Some(p))` for the first
/// feasible count below `upper`, `Ok(None)` if there is none, and on timeout
/// `Err(k)` with every count below `k` refuted.
fn color_search(
    h: &ConflictHypergraph,
    lower: usize,
    upper: usize,
    ticker: &mut Ticker,
) -> std::result::Result<Option<RafPartition>, usize> {
    let n = h.n();
    let neighborhoods = h.neighborhoods();
    let mut by_conflict: Vec<TaxonId> = (0..n).collect();
    by_conflict.sort_by_key(|&t| (std::cmp::Reverse(h.incident(t).len()), t));
    let mut rank = vec![0; n];
    for (r, &t) in by_conflict.iter().enumerate() {
        rank[t] = r;
    }
    for k in lower.max(1)..upper {
        let mut s = Coloring {
            neighborhoods: &neighborhoods,
            rank: &rank,
            k,
            color: vec![UNCOLORED; n],
            forbidden: vec![0; n * k],
            log: Vec::new(),
            used: 0,
            assigned: 0,
            ticker: &mut *ticker,
        };
        if s.search() {
            let mut components = vec![TaxonSet::empty(n); s.used];
            for (t, &c) in s.color.iter().enumerate() {
                components[c].insert(t);
            }
            return Ok(Some(RafPartition::new(components, ForestKind::Raf)));
        }
        if ticker.is_expired() {
            return Err(k);
        }
    }
    Ok(None)
}

const UNCOLORED: usize = usize::MAX;

struct Coloring<'a> {
    neighborhoods: &'a [Vec<[TaxonId; 3]>],
    rank: &'a [usize],
    k: usize,
    color: Vec<usize>,
    /// `forbidden[t * k + c] > 0` when giving `t` color `c` would complete a
    /// monochromatic edge.
    forbidden: Vec<u32>,
    log: Vec<usize>,
    used: usize,
    assigned: usize,
    ticker: &'a mut Ticker,
}

impl Coloring<'_> {
    fn options(&self, t: TaxonId) -> usize {
        let open = (0..self.used).filter(|&c| self.forbidden[t * self.k + c] == 0).count();
        open + usize::from(self.used < self.k)
    }

    /// Unassigned taxon with the fewest colors left, ties by static rank.
    fn pick(&self) -> TaxonId {
        (0..self.color.len())
            .filter(|&t| self.color[t] == UNCOLORED)
            .min_by_key(|&t| (self.options(t), self.rank[t]))
            .expect("an unassigned taxon")
    }

    /// Records, for each edge through `t`, a ban on the last free member
    /// when the other three share color `c`.
    fn propagate(&mut self, t: TaxonId, c: usize) {
        for others in &self.neighborhoods[t] {
            let mut same = 0;
            let mut free = None;
            for &u in others {
                if self.color[u] == c {
                    same += 1;
                } else if self.color[u] == UNCOLORED {
                    free = Some(u);
                }
            }
            if same == 2 {
                if let Some(u) = free {
                    let slot = u * self.k + c;
                    self.forbidden[slot] += 1;
                    self.log.push(slot);
                }
            }
        }
    }

    fn search(&mut self) -> bool {
        if self.assigned == self.color.len() {
            return true;
        }
        if self.ticker.tick() {
            return false;
        }
        let t = self.pick();
        let limit = (self.used + 1).min(self.k);
        for c in 0..limit {
            if self.forbidden[t * self.k + c] > 0 {
                continue;
            }
            let mark = self.log.len();
            let used_before = self.used;
            self.color[t] = c;
            self.used = self.used.max(c + 1);
            self.assigned += 1;
            self.propagate(t, c);
            if self.search() {
                return true;
            }
            for slot in self.log.drain(mark..) {
                self.forbidden[slot] -= 1;
            }
            self.color[t] = UNCOLORED;
            self.used = used_before;
            self.assigned -= 1;
            if self.ticker.is_expired() {
                return false;
            }
        }
        false
    }
}

struct Cover<'a> {
    /// For each taxon, the other three members of each edge as a bitmask.
    rivals: Vec<Vec<u32>>,
    memo: HashMap<u32, (u8, u32)>,
    ticker: &'a mut Ticker,
}

impl Cover<'_> {
    fn fits(&self, t: usize, block: u32) -> bool {
        self.rivals[t].iter().all(|&m| m & !block != 0)
    }

    /// Maximal agreement subsets of `rest` that contain `pivot`.
    fn maximal_blocks(&mut self, rest: u32, pivot: usize) -> Vec<u32> {
        let cands: Vec<usize> = (0..32).filter(|&i| i != pivot && rest >> i & 1 == 1).collect();
        let mut out = Vec::new();
        self.extend_block(rest, &cands, 0, 1 << pivot, &mut out);
        out
    }

    fn extend_block(&mut self, rest: u32, cands: &[usize], i: usize, block: u32, out: &mut Vec<u32>) {
        if self.ticker.tick() {
            return;
        }
        if i == cands.len() {
            let outside = rest & !block;
            if (0..32).filter(|&x| outside >> x & 1 == 1).all(|x| !self.fits(x, block)) {
                out.push(block);
            }
            return;
        }
        let t = cands[i];
        if self.fits(t, block) {
            self.extend_block(rest, cands, i + 1, block | 1 << t, out);
        }
        self.extend_block(rest, cands, i + 1, block, out);
    }

    /// Minimum number of agreement blocks partitioning `rest`.
    fn solve(&mut self, rest: u32) -> u8 {
        if rest == 0 {
            return 0;
        }
        if let Some(&(v, _)) = self.memo.get(&rest) {
            return v;
        }
        let pivot = rest.trailing_zeros() as usize;
        let mut best = (u8::MAX, 0);
        for block in self.maximal_blocks(rest, pivot) {
            if self.ticker.is_expired() {
                return u8::MAX;
            }
            let v = self.solve(rest & !block).saturating_add(1);
            if v < best.0 {
                best = (v, block);
                if v == 1 {
                    break;
                }
            }
        }
        if !self.ticker.is_expired() {
            self.memo.insert(rest, best);
        }
        best.0
    }
}

fn cover_search(h: &ConflictHypergraph, ticker: &mut Ticker) -> Option<RafPartition> {
    let n = h.n();
    let rivals = h
        .neighborhoods()
        .into_iter()
        .map(|list| list.into_iter().map(|o| o.iter().fold(0u32, |m, &u| m | 1 << u)).collect())
        .collect();
    let mut cover = Cover { rivals, memo: HashMap::new(), ticker };
    let full = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    cover.solve(full);
    if cover.ticker.is_expired() {
        return None;
    }
    let mut components = Vec::new();
    let mut rest = full;
    while rest != 0 {
        let (_, block) = cover.memo[&rest];
        components.push(TaxonSet::from_ids(n, (0..n).filter(|&i| block >> i & 1 == 1)));
        rest &= !block;
    }
    Some(RafPartition::new(components, ForestKind::Raf))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phylo::{identity_caterpillar, parse_newick, permutation_caterpillar};
    use crate::pims::Permutation;
    use crate::raf::partition::validate_raf;

    fn solve(t1: &PhyloTree, t2: &PhyloTree, s: Strategy) -> RafPartition {
        mraf_exact(t1, t2, s, Budget::unlimited()).unwrap().into_optimal().unwrap()
    }

    #[test]
    fn identical_trees() {
        let t = identity_caterpillar(9).unwrap();
        for s in [Strategy::Bnb, Strategy::CoverDp] {
            assert_eq!(solve(&t, &t, s).size(), 1);
        }
    }

    #[test]
    fn strategies_agree_on_caterpillars() {
        let t1 = identity_caterpillar(9).unwrap();
        let pi = Permutation::new(vec![3, 7, 1, 9, 5, 2, 8, 4, 6]).unwrap();
        let t2 = permutation_caterpillar(&pi).unwrap();
        let a = solve(&t1, &t2, Strategy::Bnb);
        let b = solve(&t1, &t2, Strategy::CoverDp);
        assert_eq!(a.size(), b.size());
        assert!(validate_raf(&t1, &t2, &a).unwrap());
        assert!(validate_raf(&t1, &t2, &b).unwrap());
    }

    #[test]
    fn one_disagreeing_quartet() {
        let t1 = parse_newick("((1,2),3,(4,5));", None).unwrap();
        let t2 = parse_newick("((1,3),2,(4,5));", Some(t1.universe())).unwrap();
        assert_eq!(solve(&t1, &t2, Strategy::Bnb).size(), 2);
    }

    #[test]
    fn cover_dp_guard() {
        let t = identity_caterpillar(25).unwrap();
        assert!(matches!(
            mraf_exact(&t, &t, Strategy::CoverDp, Budget::unlimited()),
            Err(Error::TooLarge { .. })
        ));
    }

    #[test]
    fn strategy_names() {
        assert_eq!("cover-dp".parse::<Strategy>().unwrap(), Strategy::CoverDp);
        assert_eq!(Strategy::Bnb.to_string(), "bnb");
        assert!("dfs".parse::<Strategy>().is_err());
    }
}

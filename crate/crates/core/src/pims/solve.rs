use crate::budget::{Budget, Ticker};
use crate::error::{Error, Result};
use crate::pims::permutation::{Direction, MonotoneClass, MonotonePartition, Permutation};

/// Longest strictly monotone subsequence of `pi` restricted to `positions`
/// (which must be increasing), by patience sorting.
fn longest_monotone(pi: &Permutation, positions: &[usize], dir: Direction) -> Vec<usize> {
    let key = |p: usize| match dir {
        Direction::Increasing => pi.value(p),
        Direction::Decreasing => pi.len() + 1 - pi.value(p),
    };
    let mut tails: Vec<usize> = Vec::new();
    let mut prev: Vec<Option<usize>> = vec![None; positions.len()];
    for (i, &p) in positions.iter().enumerate() {
        let k = key(p);
        let slot = tails.partition_point(|&t| key(positions[t]) < k);
        prev[i] = slot.checked_sub(1).map(|s| tails[s]);
        if slot == tails.len() {
            tails.push(i);
        } else {
            tails[slot] = i;
        }
    }
    let mut out = Vec::with_capacity(tails.len());
    let mut cur = tails.last().copied();
    while let Some(i) = cur {
        out.push(positions[i]);
        cur = prev[i];
    }
    out.reverse();
    out
}

/// Positions of a longest increasing subsequence.
pub fn lis(pi: &Permutation) -> Vec<usize> {
    longest_monotone(pi, &(0..pi.len()).collect::<Vec<_>>(), Direction::Increasing)
}

/// Positions of a longest decreasing subsequence.
pub fn lds(pi: &Permutation) -> Vec<usize> {
    longest_monotone(pi, &(0..pi.len()).collect::<Vec<_>>(), Direction::Decreasing)
}

/// Greedy partition: strip the longer of a longest increasing and a longest
/// decreasing subsequence until nothing is left. Uses at most `⌈2√n⌉` classes.
pub fn erdos_szekeres_partition(pi: &Permutation) -> MonotonePartition {
    greedy_monotone_cover(pi, (0..pi.len()).collect())
}

pub(crate) fn greedy_monotone_cover(pi: &Permutation, mut rest: Vec<usize>) -> MonotonePartition {
    let mut classes = Vec::new();
    while !rest.is_empty() {
        let inc = longest_monotone(pi, &rest, Direction::Increasing);
        let dec = longest_monotone(pi, &rest, Direction::Decreasing);
        let (direction, positions) =
            if inc.len() >= dec.len() { (Direction::Increasing, inc) } else { (Direction::Decreasing, dec) };
        rest.retain(|p| positions.binary_search(p).is_err());
        classes.push(MonotoneClass { direction, positions });
    }
    MonotonePartition { classes }
}

pub const PIMS_EXACT_MAX_N: usize = 20;

struct Search<'a> {
    pi: &'a Permutation,
    limit: usize,
    classes: Vec<MonotoneClass>,
    ticker: Ticker,
}

impl Search<'_> {
    fn last(&self, c: usize) -> usize {
        self.pi.value(*self.classes[c].positions.last().unwrap())
    }

    /// Class of the given direction that can take `v` with the tightest fit.
    /// Appending there dominates every other class of that direction.
    fn best_fit(&self, v: usize, dir: Direction) -> Option<usize> {
        let candidates = (0..self.classes.len()).filter(|&c| self.classes[c].direction == dir);
        match dir {
            Direction::Increasing => candidates.filter(|&c| self.last(c) < v).max_by_key(|&c| self.last(c)),
            Direction::Decreasing => candidates.filter(|&c| self.last(c) > v).min_by_key(|&c| self.last(c)),
        }
    }

    fn dfs(&mut self, pos: usize) -> bool {
        if pos == self.pi.len() {
            return true;
        }
        if self.ticker.tick() {
            return false;
        }
        let v = self.pi.value(pos);
        for dir in [Direction::Increasing, Direction::Decreasing] {
            match self.best_fit(v, dir) {
                Some(c) => {
                    self.classes[c].positions.push(pos);
                    if self.dfs(pos + 1) {
                        return true;
                    }
                    self.classes[c].positions.pop();
                }
                None if self.classes.len() < self.limit => {
                    self.classes.push(MonotoneClass { direction: dir, positions: vec![pos] });
                    if self.dfs(pos + 1) {
                        return true;
                    }
                    self.classes.pop();
                }
                None => {}
            }
            if self.ticker.is_expired() {
                return false;
            }
        }
        false
    }
}

/// Minimum partition into monotone classes, by iterative deepening on the
/// class count with the greedy partition as the initial upper bound.
pub fn pims_exact(pi: &Permutation, budget: Budget) -> Result<MonotonePartition> {
    let n = pi.len();
    if n > PIMS_EXACT_MAX_N {
        return Err(Error::TooLarge { what: "pims_exact", n, max: PIMS_EXACT_MAX_N });
    }
    let greedy = erdos_szekeres_partition(pi);
    if n == 0 {
        return Ok(greedy);
    }
    let longest = lis(pi).len().max(lds(pi).len());
    let lower = n.div_ceil(longest);
    let mut ticker = Ticker::new(budget);
    for limit in lower..greedy.classes.len() {
        let mut s = Search { pi, limit, classes: Vec::new(), ticker };
        if s.dfs(0) {
            return Ok(MonotonePartition { classes: s.classes });
        }
        if s.ticker.is_expired() {
            return Err(Error::Timeout);
        }
        ticker = s.ticker;
    }
    Ok(greedy)
}

//! Deciding whether a caterpillar and an arbitrary tree admit a relaxed
//! agreement forest with at most `k` components, in time polynomial for
//! fixed `k`.
//!
//! Components are described by their first and last taxon in caterpillar
//! order. A component with ends `l` and `r` agrees in both trees exactly when
//! its interior taxa hang off the `l`–`r` path of the second tree in distinct
//! bags, visited in caterpillar order. Taxa are scanned in caterpillar order
//! while each open component remembers the bag of its last interior taxon;
//! states that were already refuted are memoized.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::phylo::{caterpillar_order, PhyloTree, VertexId};
use crate::raf::{triples_partition, ForestKind, RafPartition};
use crate::taxa::{TaxonId, TaxonSet};

/// Subtrees hanging off one internal vertex of a leaf-to-leaf path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bag {
    pub attachment: VertexId,
    pub taxa: TaxonSet,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BagDecomposition {
    pub path: Vec<VertexId>,
    /// One bag per internal path vertex, ordered from `l` to `r`.
    pub bags: Vec<Bag>,
}

impl BagDecomposition {
    /// Bag index of every taxon; `None` for the two ends.
    pub fn index_of_taxa(&self, n: usize) -> Vec<Option<usize>> {
        let mut idx = vec![None; n];
        for (i, b) in self.bags.iter().enumerate() {
            for t in b.taxa.iter() {
                idx[t] = Some(i);
            }
        }
        idx
    }
}

/// The path between the leaves of `l` and `r` with the taxa hanging off each
/// of its internal vertices.
pub fn path_bags(tree: &PhyloTree, l: TaxonId, r: TaxonId) -> Result<BagDecomposition> {
    let n = tree.n();
    for t in [l, r] {
        if t >= n {
            return Err(Error::UnknownTaxon(t));
        }
    }
    if l == r {
        return Err(Error::DegeneratePath);
    }
    let path = tree.path(tree.leaf(l), tree.leaf(r));
    let mut on_path = vec![false; tree.vertex_count()];
    for &v in &path {
        on_path[v] = true;
    }
    let mut bags = Vec::with_capacity(path.len().saturating_sub(2));
    for &w in &path[1..path.len() - 1] {
        let mut taxa = TaxonSet::empty(n);
        let mut stack: Vec<(VertexId, VertexId)> =
            tree.neighbors(w).iter().filter(|&&u| !on_path[u]).map(|&u| (u, w)).collect();
        while let Some((v, from)) = stack.pop() {
            if let Some(t) = tree.taxon_at(v) {
                taxa.insert(t);
            }
            stack.extend(tree.neighbors(v).iter().filter(|&&u| u != from).map(|&u| (u, v)));
        }
        bags.push(Bag { attachment: w, taxa });
    }
    Ok(BagDecomposition { path, bags })
}

/// A component still waiting for its last taxon.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
struct Open {
    left: usize,
    right: usize,
    /// Bag index of the last interior taxon, if any.
    last: Option<usize>,
}

struct Decider<'a> {
    n: usize,
    k: usize,
    order: &'a [TaxonId],
    /// `bag[l][r][x]`: bag index of taxon at order position `x` on the path
    /// between order positions `l < r`.
    bag: &'a [Vec<Vec<Option<usize>>>],
    refuted: HashSet<(usize, usize, Vec<Open>)>,
    open: Vec<Open>,
    used: usize,
    /// Component index per order position, for the witness.
    owner: Vec<usize>,
    starts: Vec<usize>,
}

impl Decider<'_> {
    fn run(&mut self, x: usize) -> bool {
        if x == self.n {
            return self.open.is_empty();
        }
        let key = (x, self.used, self.open.clone());
        if self.refuted.contains(&key) {
            return false;
        }
        if self.step(x) {
            return true;
        }
        self.refuted.insert(key);
        false
    }

    fn step(&mut self, x: usize) -> bool {
        if let Some(j) = self.open.iter().position(|o| o.right == x) {
            let closed = self.open.remove(j);
            self.owner[x] = self.component_of(closed.left);
            if self.run(x + 1) {
                return true;
            }
            self.open.insert(j, closed);
            return false;
        }
        for j in 0..self.open.len() {
            let Open { left, right, last } = self.open[j];
            let Some(b) = self.bag[left][right][x] else { continue };
            if last.is_some_and(|prev| prev >= b) {
                continue;
            }
            self.open[j].last = Some(b);
            self.owner[x] = self.component_of(left);
            if self.run(x + 1) {
                return true;
            }
            self.open[j].last = last;
        }
        if self.used == self.k {
            return false;
        }
        self.used += 1;
        self.starts.push(x);
        self.owner[x] = self.used - 1;
        if self.run(x + 1) {
            return true;
        }
        let closers: Vec<usize> = (x + 1..self.n).filter(|&r| self.open.iter().all(|o| o.right != r)).collect();
        for r in closers {
            self.open.push(Open { left: x, right: r, last: None });
            let pos = self.open.len() - 1;
            if self.run(x + 1) {
                return true;
            }
            self.open.remove(pos);
        }
        self.starts.pop();
        self.used -= 1;
        false
    }

    fn component_of(&self, left: usize) -> usize {
        self.starts.iter().position(|&s| s == left).expect("open component has a start")
    }
}

/// Some RAF with at most `k` components if one exists. `t1` must be a
/// caterpillar; `t2` is arbitrary.
pub fn caterpillar_xp_decide(t1: &PhyloTree, t2: &PhyloTree, k: usize) -> Result<Option<RafPartition>> {
    t1.check_same_universe(t2)?;
    if k == 0 {
        return Err(Error::InvalidParameters("k must be at least 1".into()));
    }
    let n = t1.n();
    let base = if n >= 4 { Some(caterpillar_order(t1).ok_or(Error::NotACaterpillar)?) } else { None };
    if n <= 3 * k {
        return Ok(Some(triples_partition(n)));
    }
    let base = base.expect("n > 3k >= 3");
    let mut orders = Vec::new();
    for swap_front in [false, true] {
        for swap_back in [false, true] {
            let mut seq = base.sequence.clone();
            if swap_front {
                seq.swap(0, 1);
            }
            if swap_back {
                seq.swap(n - 2, n - 1);
            }
            orders.push(seq);
        }
    }
    for order in &orders {
        if let Some(p) = decide_in_order(t2, order, k)? {
            return Ok(Some(p));
        }
    }
    Ok(None)
}

fn decide_in_order(t2: &PhyloTree, order: &[TaxonId], k: usize) -> Result<Option<RafPartition>> {
    let n = order.len();
    let mut bag = vec![vec![Vec::new(); n]; n];
    for l in 0..n {
        for r in l + 1..n {
            let by_taxon = path_bags(t2, order[l], order[r])?.index_of_taxa(n);
            bag[l][r] = (0..n).map(|x| by_taxon[order[x]]).collect();
        }
    }
    let mut d = Decider {
        n,
        k,
        order,
        bag: &bag,
        refuted: HashSet::new(),
        open: Vec::new(),
        used: 0,
        owner: vec![0; n],
        starts: Vec::new(),
    };
    if !d.run(0) {
        return Ok(None);
    }
    let mut components = vec![TaxonSet::empty(n); d.used];
    for x in 0..n {
        components[d.owner[x]].insert(d.order[x]);
    }
    Ok(Some(RafPartition::new(components, ForestKind::Raf)))
}

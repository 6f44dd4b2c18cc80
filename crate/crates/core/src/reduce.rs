//! Common-cherry reduction, which preserves the minimum relaxed agreement
//! forest size, and detection of common chains, which are only reported.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::phylo::PhyloTree;
use crate::raf::RafPartition;
use crate::taxa::{TaxonId, TaxonSet, Universe};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionStep {
    pub pair: [String; 2],
    pub merged: String,
}

#[derive(Debug, Clone)]
pub struct ReductionTrace {
    pub steps: Vec<ReductionStep>,
    pub final_pair: (PhyloTree, PhyloTree),
    /// Original taxa represented by each taxon of the reduced pair.
    pub expansion_map: Vec<TaxonSet>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionTraceJson {
    pub steps: Vec<ReductionStep>,
    pub expansion_map: BTreeMap<String, Vec<String>>,
}

impl ReductionTrace {
    /// Maps a partition of the reduced taxa back to the original taxa.
    pub fn expand(&self, p: &RafPartition) -> RafPartition {
        let n = self.expansion_map.first().map_or(0, TaxonSet::universe_size);
        let components = p
            .components
            .iter()
            .map(|c| {
                let mut out = TaxonSet::empty(n);
                for t in c.iter() {
                    out.union_with(&self.expansion_map[t]);
                }
                out
            })
            .collect();
        RafPartition::new(components, p.kind)
    }

    pub fn to_json(&self, original: &Universe) -> ReductionTraceJson {
        let reduced = self.final_pair.0.universe();
        let expansion_map = self
            .expansion_map
            .iter()
            .enumerate()
            .map(|(t, set)| (reduced.label(t).to_string(), original.labels_of(set)))
            .collect();
        ReductionTraceJson { steps: self.steps.clone(), expansion_map }
    }
}

/// Merges common cherries until none is left (or at most three taxa
/// remain), always taking the smallest pair of ids first.
pub fn subtree_reduce(t1: &PhyloTree, t2: &PhyloTree) -> Result<ReductionTrace> {
    t1.check_same_universe(t2)?;
    let n = t1.n();
    let mut cur = (t1.clone(), t2.clone());
    let mut expansion_map: Vec<TaxonSet> = (0..n).map(|t| TaxonSet::from_ids(n, [t])).collect();
    let mut steps = Vec::new();
    while cur.0.n() > 3 {
        let c2 = cur.1.cherries();
        let Some((a, b)) = cur.0.cherries().into_iter().find(|c| c2.binary_search(c).is_ok()) else { break };
        let m = cur.0.n();
        let mut keep = TaxonSet::full(m);
        keep.remove(b);
        let (la, lb) = (cur.0.label(a).to_string(), cur.0.label(b).to_string());
        let merged = fresh_label(cur.0.universe(), &format!("{la}+{lb}"));
        let mut labels = cur.0.universe().labels_of(&keep);
        labels[a] = merged.clone();
        let universe = Universe::new(labels);
        let r1 = cur.0.restrict(&keep)?.with_universe(universe.clone())?;
        let r2 = cur.1.restrict(&keep)?.with_universe(universe)?;
        let absorbed = expansion_map.remove(b);
        expansion_map[a].union_with(&absorbed);
        steps.push(ReductionStep { pair: [la, lb], merged });
        cur = (r1, r2);
    }
    Ok(ReductionTrace { steps, final_pair: cur, expansion_map })
}

fn fresh_label(universe: &Universe, wanted: &str) -> String {
    let mut label = wanted.to_string();
    while universe.id_of(&label).is_some() {
        label.push('\'');
    }
    label
}

/// Linked taxa: same parent (a cherry) or parents joined by an edge.
fn link(tree: &PhyloTree, x: TaxonId, y: TaxonId) -> Option<bool> {
    let (px, py) = (tree.parent_of(x)?, tree.parent_of(y)?);
    if px == py {
        Some(true)
    } else if tree.neighbors(px).contains(&py) {
        Some(false)
    } else {
        None
    }
}

struct ChainSearch<'a> {
    trees: [&'a PhyloTree; 2],
    seq: Vec<TaxonId>,
    found: Vec<TaxonSet>,
}

impl ChainSearch<'_> {
    /// Whether `y` may follow the current sequence in `tree`: the parents
    /// must keep walking along a path, and two taxa may share a parent only
    /// at the two ends of the chain.
    fn extends(&self, tree: &PhyloTree, y: TaxonId) -> Option<bool> {
        let k = self.seq.len();
        let last = self.seq[k - 1];
        let cherry = link(tree, last, y)?;
        if k >= 2 {
            let prev = self.seq[k - 2];
            let (pp, pl, py) = (tree.parent_of(prev)?, tree.parent_of(last)?, tree.parent_of(y)?);
            if pp == pl {
                if k != 2 || cherry {
                    return None;
                }
            } else if py == pp {
                return None;
            }
        }
        Some(cherry)
    }

    fn grow(&mut self, n: usize, closed: bool) {
        let mut extended = false;
        if !closed {
            for y in 0..n {
                if self.seq.contains(&y) {
                    continue;
                }
                let (Some(c1), Some(c2)) = (self.extends(self.trees[0], y), self.extends(self.trees[1], y)) else {
                    continue;
                };
                // A cherry link ends the chain unless it is the first link.
                let ends = (c1 || c2) && self.seq.len() >= 2;
                self.seq.push(y);
                self.grow(n, ends);
                self.seq.pop();
                extended = true;
            }
        }
        if !extended && self.seq.len() >= 4 {
            self.found.push(TaxonSet::from_ids(n, self.seq.iter().copied()));
        }
    }
}

/// Maximal runs of at least four taxa that form a caterpillar-like chain in
/// both trees, in the same order. Purely diagnostic: shrinking such chains
/// does not preserve the forest size.
pub fn find_common_chains(t1: &PhyloTree, t2: &PhyloTree) -> Result<Vec<TaxonSet>> {
    t1.check_same_universe(t2)?;
    let n = t1.n();
    if n < 4 {
        return Ok(Vec::new());
    }
    let mut s = ChainSearch { trees: [t1, t2], seq: Vec::new(), found: Vec::new() };
    for start in 0..n {
        s.seq.push(start);
        s.grow(n, false);
        s.seq.pop();
    }
    let mut found = s.found;
    found.sort();
    found.dedup();
    let maximal: Vec<TaxonSet> =
        found.iter().filter(|c| !found.iter().any(|d| d != *c && c.is_subset(d))).cloned().collect();
    Ok(maximal)
}

//! Maximum agreement subtrees of two unrooted binary trees.
//!
//! Both trees are viewed through their directed edges: edge `u -> v` stands
//! for the rooted subtree hanging at `v` away from `u`. The rooted agreement
//! value of every pair of directed edges is tabulated in order of subtree
//! size, using the usual binary-node matching. An unrooted agreement set that
//! contains taxon `x` is exactly `x` plus a rooted agreement set of the two
//! subtrees hanging from `x`'s neighbor, so the unrooted optimum is the best
//! such value over all taxa.

use crate::error::{Error, Result};
use crate::phylo::{is_homeomorphic, PhyloTree};
use crate::taxa::{TaxonId, TaxonSet};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MastResult {
    pub taxa: TaxonSet,
    pub size: usize,
}

struct DirectedEdges {
    /// Child edges of each directed edge; a leaf head has none.
    children: Vec<Option<[usize; 2]>>,
    taxon: Vec<Option<TaxonId>>,
    below: Vec<TaxonSet>,
    /// Edge ids sorted by increasing subtree size.
    order: Vec<usize>,
    /// Directed edge from each taxon's leaf into the tree.
    from_leaf: Vec<usize>,
}

impl DirectedEdges {
    fn new(tree: &PhyloTree) -> Self {
        let nv = tree.vertex_count();
        let mut base = vec![0; nv + 1];
        for v in 0..nv {
            base[v + 1] = base[v] + tree.degree(v);
        }
        let total = base[nv];
        let id_of = |u: usize, v: usize| -> usize {
            base[u] + tree.neighbors(u).iter().position(|&w| w == v).expect("adjacent")
        };
        let mut children = vec![None; total];
        let mut taxon = vec![None; total];
        for (u, &offset) in base.iter().enumerate().take(nv) {
            for (slot, &v) in tree.neighbors(u).iter().enumerate() {
                let e = offset + slot;
                taxon[e] = tree.taxon_at(v);
                if taxon[e].is_none() {
                    let mut kids = tree.neighbors(v).iter().filter(|&&w| w != u).map(|&w| id_of(v, w));
                    children[e] = Some([kids.next().unwrap(), kids.next().unwrap()]);
                }
            }
        }
        // Subtree taxon sets, memoized bottom-up with an explicit stack.
        let n = tree.n();
        let mut below: Vec<Option<TaxonSet>> = vec![None; total];
        for start in 0..total {
            let mut stack = vec![start];
            while let Some(&e) = stack.last() {
                if below[e].is_some() {
                    stack.pop();
                    continue;
                }
                match (taxon[e], children[e]) {
                    (Some(t), _) => {
                        below[e] = Some(TaxonSet::from_ids(n, [t]));
                        stack.pop();
                    }
                    (None, Some([a, b])) => match (&below[a], &below[b]) {
                        (Some(x), Some(y)) => {
                            below[e] = Some(x.union(y));
                            stack.pop();
                        }
                        _ => {
                            if below[a].is_none() {
                                stack.push(a);
                            }
                            if below[b].is_none() {
                                stack.push(b);
                            }
                        }
                    },
                    (None, None) => unreachable!("internal vertex without children"),
                }
            }
        }
        let below: Vec<TaxonSet> = below.into_iter().map(Option::unwrap).collect();
        let mut order: Vec<usize> = (0..total).collect();
        order.sort_by_key(|&e| (below[e].len(), e));
        let from_leaf = (0..n).map(|t| id_of(tree.leaf(t), tree.neighbors(tree.leaf(t))[0])).collect();
        DirectedEdges { children, taxon, below, order, from_leaf }
    }
}

struct Table<'a> {
    a: &'a DirectedEdges,
    b: &'a DirectedEdges,
    width: usize,
    val: Vec<u32>,
}

impl Table<'_> {
    fn get(&self, e1: usize, e2: usize) -> u32 {
        self.val[e1 * self.width + e2]
    }

    /// Candidate values in a fixed order; the first maximum is the choice.
    fn options(&self, e1: usize, e2: usize) -> [u32; 6] {
        let [a1, a2] = self.a.children[e1].unwrap();
        let [b1, b2] = self.b.children[e2].unwrap();
        [
            self.get(a1, b1) + self.get(a2, b2),
            self.get(a1, b2) + self.get(a2, b1),
            self.get(a1, e2),
            self.get(a2, e2),
            self.get(e1, b1),
            self.get(e1, b2),
        ]
    }

    fn fill(&mut self) {
        for &e1 in &self.a.order {
            for &e2 in &self.b.order {
                let v = match (self.a.taxon[e1], self.b.taxon[e2]) {
                    (Some(x), _) => self.b.below[e2].contains(x) as u32,
                    (None, Some(y)) => self.a.below[e1].contains(y) as u32,
                    (None, None) => *self.options(e1, e2).iter().max().unwrap(),
                };
                self.val[e1 * self.width + e2] = v;
            }
        }
    }

    fn witness(&self, e1: usize, e2: usize, out: &mut TaxonSet) {
        let mut stack = vec![(e1, e2)];
        while let Some((e1, e2)) = stack.pop() {
            let v = self.get(e1, e2);
            if v == 0 {
                continue;
            }
            match (self.a.taxon[e1], self.b.taxon[e2]) {
                (Some(x), _) => out.insert(x),
                (None, Some(y)) => out.insert(y),
                (None, None) => {
                    let [a1, a2] = self.a.children[e1].unwrap();
                    let [b1, b2] = self.b.children[e2].unwrap();
                    let opts = self.options(e1, e2);
                    let pick = opts.iter().position(|&o| o == v).unwrap();
                    match pick {
                        0 => stack.extend([(a1, b1), (a2, b2)]),
                        1 => stack.extend([(a1, b2), (a2, b1)]),
                        2 => stack.push((a1, e2)),
                        3 => stack.push((a2, e2)),
                        4 => stack.push((e1, b1)),
                        _ => stack.push((e1, b2)),
                    }
                }
            }
        }
    }
}

/// A maximum agreement subtree of `t1` and `t2`. Deterministic: the same
/// inputs always yield the same optimum.
pub fn mast(t1: &PhyloTree, t2: &PhyloTree) -> Result<MastResult> {
    t1.check_same_universe(t2)?;
    let n = t1.n();
    if n <= 3 {
        return Ok(MastResult { taxa: t1.taxa(), size: n });
    }
    let a = DirectedEdges::new(t1);
    let b = DirectedEdges::new(t2);
    let width = b.children.len();
    let mut table = Table { a: &a, b: &b, width, val: vec![0; a.children.len() * width] };
    table.fill();
    let (best_x, best) = (0..n)
        .map(|x| (x, table.get(a.from_leaf[x], b.from_leaf[x])))
        .fold((0, 0), |acc, cur| if cur.1 > acc.1 { cur } else { acc });
    let mut taxa = TaxonSet::from_ids(n, [best_x]);
    table.witness(a.from_leaf[best_x], b.from_leaf[best_x], &mut taxa);
    debug_assert_eq!(taxa.len(), best as usize + 1);
    Ok(MastResult { size: taxa.len(), taxa })
}

pub const MAST_BRUTEFORCE_MAX_N: usize = 12;

/// Exhaustive MAST: subsets by decreasing size, first agreeing one wins.
pub fn mast_bruteforce(t1: &PhyloTree, t2: &PhyloTree) -> Result<MastResult> {
    t1.check_same_universe(t2)?;
    let n = t1.n();
    if n > MAST_BRUTEFORCE_MAX_N {
        return Err(Error::TooLarge { what: "mast_bruteforce", n, max: MAST_BRUTEFORCE_MAX_N });
    }
    for size in (1..=n).rev() {
        for mask in 0u32..(1 << n) {
            if mask.count_ones() as usize != size {
                continue;
            }
            let s = TaxonSet::from_ids(n, (0..n).filter(|&i| mask >> i & 1 == 1));
            if is_homeomorphic(t1, t2, &s)? {
                return Ok(MastResult { taxa: s, size });
            }
        }
    }
    unreachable!("singletons always agree")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phylo::{identity_caterpillar, parse_newick, permutation_caterpillar};
    use crate::pims::Permutation;

    #[test]
    fn identical_trees_agree_everywhere() {
        let t = identity_caterpillar(9).unwrap();
        let m = mast(&t, &t).unwrap();
        assert_eq!(m.size, 9);
        assert_eq!(m.taxa, t.taxa());
    }

    #[test]
    fn small_caterpillar_pair() {
        let t1 = identity_caterpillar(5).unwrap();
        let pi = Permutation::new(vec![1, 2, 4, 3, 5]).unwrap();
        let t2 = permutation_caterpillar(&pi).unwrap();
        let m = mast(&t1, &t2).unwrap();
        assert_eq!(m.size, 4);
        assert!(is_homeomorphic(&t1, &t2, &m.taxa).unwrap());
        assert_eq!(mast_bruteforce(&t1, &t2).unwrap().size, 4);
    }

    #[test]
    fn deterministic() {
        let t1 = parse_newick("((a,b),(c,d),((e,f),(g,h)));", None).unwrap();
        let t2 = parse_newick("((a,c),(b,d),((e,g),(f,h)));", Some(t1.universe())).unwrap();
        let first = mast(&t1, &t2).unwrap();
        for _ in 0..5 {
            assert_eq!(mast(&t1, &t2).unwrap(), first);
        }
        assert_eq!(first.size, mast_bruteforce(&t1, &t2).unwrap().size);
    }

    #[test]
    fn bruteforce_guard() {
        let t = identity_caterpillar(13).unwrap();
        assert!(matches!(mast_bruteforce(&t, &t), Err(Error::TooLarge { .. })));
    }
}

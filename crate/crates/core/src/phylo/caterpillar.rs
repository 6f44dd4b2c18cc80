use crate::error::{Error, Result};
use crate::phylo::tree::{PhyloTree, TreeBuilder};
use crate::pims::Permutation;
use crate::taxa::{TaxonId, Universe};

/// Leaf order along the spine of a caterpillar.
///
/// The two leaves of each end cherry are incomparable; `sequence` lists them
/// with the smaller id first and `end_ties` records both cherries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CaterpillarOrder {
    pub sequence: Vec<TaxonId>,
    pub end_ties: [[TaxonId; 2]; 2],
}

impl CaterpillarOrder {
    /// The same caterpillar read from the other end.
    pub fn reversed(&self) -> CaterpillarOrder {
        let mut sequence = self.sequence.clone();
        sequence.reverse();
        CaterpillarOrder { sequence, end_ties: [self.end_ties[1], self.end_ties[0]] }
    }

    pub fn to_tree(&self, universe: Universe) -> Result<PhyloTree> {
        caterpillar_from_sequence(universe, &self.sequence)
    }

    /// Spine positions: both members of an end cherry share a position.
    pub fn positions(&self) -> Vec<usize> {
        let n = self.sequence.len();
        let mut pos = vec![0; n];
        for (i, &t) in self.sequence.iter().enumerate() {
            pos[t] = i.clamp(1, n - 2);
        }
        pos
    }
}

/// Caterpillar whose spine carries `sequence[0..]` in order, the first two and
/// last two entries forming the end cherries.
pub fn caterpillar_from_sequence(universe: Universe, sequence: &[TaxonId]) -> Result<PhyloTree> {
    let n = universe.len();
    if sequence.len() != n {
        return Err(Error::InvalidParameters(format!(
            "sequence has {} taxa, universe has {n}",
            sequence.len()
        )));
    }
    let mut b = TreeBuilder::new(universe);
    match n {
        0 => return Err(Error::EmptyTaxonSet),
        1 => {
            b.add_leaf(sequence[0]);
        }
        2 => {
            let (x, y) = (b.add_leaf(sequence[0]), b.add_leaf(sequence[1]));
            b.add_edge(x, y);
        }
        _ => {
            let spine = b.add_path(n - 2);
            for (i, &t) in sequence.iter().enumerate() {
                let leaf = b.add_leaf(t);
                b.add_edge(spine[i.saturating_sub(1).min(n - 3)], leaf);
            }
        }
    }
    b.build()
}

/// The identity caterpillar on taxa labelled `1..=n` in spine order.
pub fn identity_caterpillar(n: usize) -> Result<PhyloTree> {
    if n < 4 {
        return Err(Error::TooSmall("identity caterpillar", 4));
    }
    caterpillar_from_sequence(Universe::numbered(n), &(0..n).collect::<Vec<_>>())
}

/// Caterpillar whose i-th spine position carries the taxon labelled `π(i)`.
/// Taxon ids match [`identity_caterpillar`]: label `v` has id `v - 1`.
pub fn permutation_caterpillar(pi: &Permutation) -> Result<PhyloTree> {
    let n = pi.len();
    if n < 4 {
        return Err(Error::TooSmall("permutation caterpillar", 4));
    }
    let seq: Vec<TaxonId> = pi.values().iter().map(|&v| v - 1).collect();
    caterpillar_from_sequence(Universe::numbered(n), &seq)
}

/// Spine order of `tree` if deleting its leaves leaves a path.
pub fn caterpillar_order(tree: &PhyloTree) -> Option<CaterpillarOrder> {
    if tree.n() < 4 {
        return None;
    }
    let internal = |v: usize| !tree.is_leaf(v);
    let inner_deg = |v: usize| tree.neighbors(v).iter().filter(|&&w| internal(w)).count();
    let mut start = None;
    for v in (0..tree.vertex_count()).filter(|&v| internal(v)) {
        match inner_deg(v) {
            0 | 1 => {
                if start.is_none() {
                    start = Some(v);
                }
            }
            2 => {}
            _ => return None,
        }
    }
    let mut spine = vec![start?];
    let mut prev = usize::MAX;
    loop {
        let cur = *spine.last().unwrap();
        let next = tree.neighbors(cur).iter().copied().find(|&w| internal(w) && w != prev);
        match next {
            Some(w) => {
                prev = cur;
                spine.push(w);
            }
            None => break,
        }
    }
    let leaves_at = |v: usize| -> Vec<TaxonId> {
        let mut ls: Vec<TaxonId> = tree.neighbors(v).iter().filter_map(|&w| tree.taxon_at(w)).collect();
        ls.sort_unstable();
        ls
    };
    let first = leaves_at(spine[0]);
    let last = leaves_at(*spine.last().unwrap());
    if first.len() != 2 || last.len() != 2 {
        return None;
    }
    let mut sequence = first.clone();
    for &v in &spine[1..spine.len() - 1] {
        sequence.extend(leaves_at(v));
    }
    sequence.extend(&last);
    let order = CaterpillarOrder { sequence, end_ties: [[first[0], first[1]], [last[0], last[1]]] };
    if first[0] < last[0] {
        Some(order)
    } else {
        let mut r = order.reversed();
        let n = r.sequence.len();
        r.sequence.swap(0, 1);
        r.sequence.swap(n - 2, n - 1);
        Some(r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phylo::newick::parse_newick;

    #[test]
    fn identity_order() {
        for n in 4..10 {
            let o = caterpillar_order(&identity_caterpillar(n).unwrap()).unwrap();
            assert_eq!(o.sequence, (0..n).collect::<Vec<_>>());
            assert_eq!(o.end_ties, [[0, 1], [n - 2, n - 1]]);
        }
    }

    #[test]
    fn balanced_tree_is_not_a_caterpillar() {
        let t = parse_newick("(((1,2),(3,4)),((5,6),(7,8)));", None).unwrap();
        assert!(caterpillar_order(&t).is_none());
    }

    #[test]
    fn reversal_describes_same_tree() {
        let pi = Permutation::new(vec![3, 6, 1, 5, 2, 4, 7]).unwrap();
        let t = permutation_caterpillar(&pi).unwrap();
        let o = caterpillar_order(&t).unwrap();
        let back = o.reversed().to_tree(t.universe().clone()).unwrap();
        assert!(back.equals(&t).unwrap());
        assert!(o.to_tree(t.universe().clone()).unwrap().equals(&t).unwrap());
        assert_eq!(o.end_ties, [[2, 5], [3, 6]]);
    }

    #[test]
    fn permutation_caterpillar_symmetries() {
        let n = 7;
        let id = identity_caterpillar(n).unwrap();
        let fwd = Permutation::identity(n);
        let rev = Permutation::new((1..=n).rev().collect()).unwrap();
        assert!(permutation_caterpillar(&fwd).unwrap().equals(&id).unwrap());
        assert!(permutation_caterpillar(&rev).unwrap().equals(&id).unwrap());
    }

    #[test]
    fn too_small() {
        assert!(identity_caterpillar(3).is_err());
    }
}

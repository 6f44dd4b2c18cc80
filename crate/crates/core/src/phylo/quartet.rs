use std::fmt;

use crate::error::{Error, Result};
use crate::phylo::tree::PhyloTree;
use crate::taxa::{TaxonId, TaxonSet};

/// Which partner the smallest of the four (sorted) taxa is paired with.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum QuartetSplit {
    /// `ab|cd`
    AbCd,
    /// `ac|bd`
    AcBd,
    /// `ad|bc`
    AdBc,
}

/// A quartet topology on four distinct taxa, stored with the taxa sorted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Quartet {
    pub taxa: [TaxonId; 4],
    pub split: QuartetSplit,
}

impl Quartet {
    /// The two cherries of the quartet.
    pub fn pairs(&self) -> ([TaxonId; 2], [TaxonId; 2]) {
        let [a, b, c, d] = self.taxa;
        match self.split {
            QuartetSplit::AbCd => ([a, b], [c, d]),
            QuartetSplit::AcBd => ([a, c], [b, d]),
            QuartetSplit::AdBc => ([a, d], [b, c]),
        }
    }

    pub fn taxa_set(&self, universe: usize) -> TaxonSet {
        TaxonSet::from_ids(universe, self.taxa)
    }

    pub fn display<'a>(&self, tree: &'a PhyloTree) -> impl fmt::Display + 'a {
        let ([a, b], [c, d]) = self.pairs();
        let l = |t| tree.label(t).to_string();
        format!("{}{}|{}{}", l(a), l(b), l(c), l(d))
    }
}

/// Picks the split from three pairwise distance sums `ab+cd`, `ac+bd`, `ad+bc`:
/// the induced split is the one with the strictly smallest sum.
pub(crate) fn split_from_sums(ab_cd: u32, ac_bd: u32, ad_bc: u32) -> QuartetSplit {
    if ab_cd < ac_bd && ab_cd < ad_bc {
        QuartetSplit::AbCd
    } else if ac_bd < ad_bc {
        QuartetSplit::AcBd
    } else {
        QuartetSplit::AdBc
    }
}

fn sorted_distinct(ids: [TaxonId; 4]) -> Result<[TaxonId; 4]> {
    let mut s = ids;
    s.sort_unstable();
    if s.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::RepeatedTaxa);
    }
    Ok(s)
}

/// Topology induced by `tree` on the four taxa of `q`.
pub fn quartet_topology(tree: &PhyloTree, q: &TaxonSet) -> Result<Quartet> {
    tree.check_taxa(q)?;
    let ids = q.to_vec();
    let ids: [TaxonId; 4] = ids.try_into().map_err(|_| Error::RepeatedTaxa)?;
    quartet_of(tree, ids)
}

/// Topology induced on four taxa given as ids (any order, must be distinct).
pub fn quartet_of(tree: &PhyloTree, ids: [TaxonId; 4]) -> Result<Quartet> {
    if let Some(&t) = ids.iter().find(|&&t| t >= tree.n()) {
        return Err(Error::UnknownTaxon(t));
    }
    let [a, b, c, d] = sorted_distinct(ids)?;
    let from = |x: TaxonId| tree.distances_from(tree.leaf(x));
    let (da, db) = (from(a), from(b));
    let (lb, lc, ld) = (tree.leaf(b), tree.leaf(c), tree.leaf(d));
    let dcd = from(c)[ld];
    let split = split_from_sums(da[lb] + dcd, da[lc] + db[ld], da[ld] + db[lc]);
    Ok(Quartet { taxa: [a, b, c, d], split })
}

/// Bulk quartet queries backed by a precomputed leaf distance matrix.
pub struct QuartetOracle {
    dist: Vec<Vec<u32>>,
}

impl QuartetOracle {
    pub fn new(tree: &PhyloTree) -> Self {
        QuartetOracle { dist: tree.leaf_distances() }
    }

    /// Split for sorted, distinct `a < b < c < d`.
    pub fn split(&self, a: TaxonId, b: TaxonId, c: TaxonId, d: TaxonId) -> QuartetSplit {
        let dd = &self.dist;
        split_from_sums(dd[a][b] + dd[c][d], dd[a][c] + dd[b][d], dd[a][d] + dd[b][c])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phylo::caterpillar::{identity_caterpillar, permutation_caterpillar};
    use crate::pims::Permutation;

    fn q(t: &PhyloTree, labels: [&str; 4]) -> Quartet {
        let ids = labels.map(|l| t.universe().id_of(l).unwrap());
        quartet_of(t, ids).unwrap()
    }

    #[test]
    fn identity_caterpillar_quartets() {
        let five = identity_caterpillar(5).unwrap();
        let got = q(&five, ["1", "2", "4", "5"]);
        assert_eq!(got.split, QuartetSplit::AbCd);
        assert_eq!(got.display(&five).to_string(), "12|45");

        let six = identity_caterpillar(6).unwrap();
        assert_eq!(q(&six, ["1", "3", "4", "6"]).display(&six).to_string(), "13|46");
    }

    #[test]
    fn permutation_caterpillar_quartet() {
        let pi = Permutation::new(vec![2, 1, 4, 3, 5]).unwrap();
        let t = permutation_caterpillar(&pi).unwrap();
        let got = q(&t, ["2", "1", "4", "3"]);
        let ([a, b], [c, d]) = got.pairs();
        let as_labels = |x: TaxonId| t.label(x).to_string();
        let mut p1 = [as_labels(a), as_labels(b)];
        let mut p2 = [as_labels(c), as_labels(d)];
        p1.sort();
        p2.sort();
        assert_eq!((p1, p2), (["1".to_string(), "2".to_string()], ["3".to_string(), "4".to_string()]));
    }

    #[test]
    fn repeated_taxa_are_rejected() {
        let t = identity_caterpillar(5).unwrap();
        assert_eq!(quartet_of(&t, [0, 1, 1, 2]).unwrap_err(), Error::RepeatedTaxa);
        let three = TaxonSet::from_ids(5, [0, 1, 2]);
        assert_eq!(quartet_topology(&t, &three).unwrap_err(), Error::RepeatedTaxa);
    }

    #[test]
    fn oracle_matches_single_queries() {
        let t = identity_caterpillar(7).unwrap();
        let o = QuartetOracle::new(&t);
        for a in 0..7 {
            for b in a + 1..7 {
                for c in b + 1..7 {
                    for d in c + 1..7 {
                        assert_eq!(o.split(a, b, c, d), quartet_of(&t, [a, b, c, d]).unwrap().split);
                    }
                }
            }
        }
    }
}

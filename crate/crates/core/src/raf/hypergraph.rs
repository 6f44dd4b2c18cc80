use crate::error::Result;
use crate::phylo::{PhyloTree, QuartetOracle};
use crate::taxa::{TaxonId, TaxonSet};

/// Quartets on which two trees disagree. A taxon set agrees in both trees
/// exactly when it contains none of these edges.
#[derive(Debug, Clone)]
pub struct ConflictHypergraph {
    n: usize,
    edges: Vec<[TaxonId; 4]>,
    incidence: Vec<Vec<usize>>,
}

pub fn build_conflict_hypergraph(t1: &PhyloTree, t2: &PhyloTree) -> Result<ConflictHypergraph> {
    t1.check_same_universe(t2)?;
    let n = t1.n();
    let (o1, o2) = (QuartetOracle::new(t1), QuartetOracle::new(t2));
    let mut edges = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                for d in c + 1..n {
                    if o1.split(a, b, c, d) != o2.split(a, b, c, d) {
                        edges.push([a, b, c, d]);
                    }
                }
            }
        }
    }
    Ok(ConflictHypergraph::from_edges(n, edges))
}

impl ConflictHypergraph {
    pub(crate) fn from_edges(n: usize, edges: Vec<[TaxonId; 4]>) -> Self {
        let mut incidence = vec![Vec::new(); n];
        for (i, e) in edges.iter().enumerate() {
            for &t in e {
                incidence[t].push(i);
            }
        }
        ConflictHypergraph { n, edges, incidence }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Edges as sorted 4-tuples, in lexicographic order.
    pub fn edges(&self) -> &[[TaxonId; 4]] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Indices of the edges containing `t`.
    pub fn incident(&self, t: TaxonId) -> &[usize] {
        &self.incidence[t]
    }

    /// For each taxon, the other three members of every edge containing it.
    pub fn neighborhoods(&self) -> Vec<Vec<[TaxonId; 3]>> {
        (0..self.n)
            .map(|t| {
                self.incidence[t]
                    .iter()
                    .map(|&i| {
                        let mut rest = [0; 3];
                        let mut k = 0;
                        for &u in &self.edges[i] {
                            if u != t {
                                rest[k] = u;
                                k += 1;
                            }
                        }
                        rest
                    })
                    .collect()
            })
            .collect()
    }

    /// True iff no edge lies inside `s`.
    pub fn is_agreement_set(&self, s: &TaxonSet) -> bool {
        s.iter().all(|t| {
            self.incidence[t].iter().all(|&i| {
                let e = &self.edges[i];
                e[0] != t || !e[1..].iter().all(|&u| s.contains(u))
            })
        })
    }

    /// True iff no edge is monochromatic under `colors` (one entry per taxon).
    pub fn is_weak_coloring(&self, colors: &[usize]) -> bool {
        self.edges.iter().all(|e| e[1..].iter().any(|&u| colors[u] != colors[e[0]]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phylo::{identity_caterpillar, is_homeomorphic, parse_newick, quartet_of};

    #[test]
    fn identical_trees_have_no_edges() {
        let t = identity_caterpillar(8).unwrap();
        let h = build_conflict_hypergraph(&t, &t).unwrap();
        assert_eq!(h.edge_count(), 0);
        assert!(h.is_agreement_set(&t.taxa()));
    }

    #[test]
    fn edges_match_direct_comparison() {
        let t1 = parse_newick("((a,b),(c,d),(e,f));", None).unwrap();
        let t2 = parse_newick("((a,e),(c,b),(d,f));", Some(t1.universe())).unwrap();
        let h = build_conflict_hypergraph(&t1, &t2).unwrap();
        let mut expected = Vec::new();
        for a in 0..6 {
            for b in a + 1..6 {
                for c in b + 1..6 {
                    for d in c + 1..6 {
                        let q = [a, b, c, d];
                        if quartet_of(&t1, q).unwrap() != quartet_of(&t2, q).unwrap() {
                            expected.push(q);
                        }
                    }
                }
            }
        }
        assert_eq!(h.edges(), &expected[..]);
        for mask in 0u32..64 {
            let s = TaxonSet::from_ids(6, (0..6).filter(|&i| mask >> i & 1 == 1));
            assert_eq!(h.is_agreement_set(&s), is_homeomorphic(&t1, &t2, &s).unwrap());
        }
    }

    #[test]
    fn weak_coloring() {
        let h = ConflictHypergraph::from_edges(5, vec![[0, 1, 2, 3]]);
        assert!(!h.is_weak_coloring(&[0, 0, 0, 0, 1]));
        assert!(h.is_weak_coloring(&[0, 0, 0, 1, 1]));
        assert_eq!(h.neighborhoods()[2], vec![[0, 1, 3]]);
    }
}

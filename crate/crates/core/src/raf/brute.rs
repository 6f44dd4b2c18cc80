use crate::error::{Error, Result};
use crate::phylo::{is_homeomorphic, PhyloTree};
use crate::raf::partition::{ForestKind, RafPartition};
use crate::taxa::TaxonSet;

pub const MRAF_BRUTEFORCE_MAX_N: usize = 10;
pub const MAF_BRUTEFORCE_MAX_N: usize = 12;

fn mask_set(n: usize, mask: u32) -> TaxonSet {
    TaxonSet::from_ids(n, (0..n).filter(|&i| mask >> i & 1 == 1))
}

/// Lazily evaluated per-subset agreement test.
struct AgreementCache<'a> {
    t1: &'a PhyloTree,
    t2: &'a PhyloTree,
    known: Vec<Option<bool>>,
}

impl<'a> AgreementCache<'a> {
    fn new(t1: &'a PhyloTree, t2: &'a PhyloTree) -> Self {
        AgreementCache { t1, t2, known: vec![None; 1 << t1.n()] }
    }

    fn agrees(&mut self, mask: u32) -> bool {
        if let Some(v) = self.known[mask as usize] {
            return v;
        }
        let v = is_homeomorphic(self.t1, self.t2, &mask_set(self.t1.n(), mask)).expect("same universe");
        self.known[mask as usize] = Some(v);
        v
    }
}

fn to_partition(n: usize, blocks: &[u32], kind: ForestKind) -> RafPartition {
    RafPartition::new(blocks.iter().map(|&b| mask_set(n, b)).collect(), kind)
}

/// Minimum RAF by enumerating every set partition of the taxa.
pub fn mraf_bruteforce(t1: &PhyloTree, t2: &PhyloTree) -> Result<RafPartition> {
    t1.check_same_universe(t2)?;
    let n = t1.n();
    if n > MRAF_BRUTEFORCE_MAX_N {
        return Err(Error::TooLarge { what: "mraf_bruteforce", n, max: MRAF_BRUTEFORCE_MAX_N });
    }
    let mut cache = AgreementCache::new(t1, t2);
    let mut best: Option<Vec<u32>> = None;
    let mut blocks = Vec::new();
    every_partition(0, n, &mut blocks, &mut |blocks| {
        if best.as_ref().is_some_and(|b| b.len() <= blocks.len()) {
            return;
        }
        if blocks.iter().all(|&b| cache.agrees(b)) {
            best = Some(blocks.to_vec());
        }
    });
    Ok(to_partition(n, &best.expect("singletons always agree"), ForestKind::Raf))
}

fn every_partition(i: usize, n: usize, blocks: &mut Vec<u32>, visit: &mut dyn FnMut(&[u32])) {
    if i == n {
        visit(blocks);
        return;
    }
    for b in 0..blocks.len() {
        blocks[b] |= 1 << i;
        every_partition(i + 1, n, blocks, visit);
        blocks[b] &= !(1 << i);
    }
    blocks.push(1 << i);
    every_partition(i + 1, n, blocks, visit);
    blocks.pop();
}

struct AfSearch<'a> {
    n: usize,
    agreement: AgreementCache<'a>,
    spans: Vec<Option<[Vec<bool>; 2]>>,
    blocks: Vec<u32>,
    best: Option<Vec<u32>>,
}

impl AfSearch<'_> {
    fn span(&mut self, mask: u32) -> &[Vec<bool>; 2] {
        let idx = mask as usize;
        if self.spans[idx].is_none() {
            let s = mask_set(self.n, mask);
            self.spans[idx] = Some([self.agreement.t1.spanning_vertices(&s), self.agreement.t2.spanning_vertices(&s)]);
        }
        self.spans[idx].as_ref().unwrap()
    }

    fn disjoint(&mut self, a: u32, b: u32) -> bool {
        let sa = self.span(a).clone();
        let sb = self.span(b);
        (0..2).all(|k| !sa[k].iter().zip(&sb[k]).any(|(&x, &y)| x && y))
    }

    /// Both conditions are inherited by subsets, so partial blocks that
    /// already fail can be cut.
    fn admissible(&mut self, changed: usize) -> bool {
        let m = self.blocks[changed];
        if !self.agreement.agrees(m) {
            return false;
        }
        (0..self.blocks.len()).all(|j| j == changed || self.disjoint(m, self.blocks[j]))
    }

    fn run(&mut self, i: usize) {
        if self.best.as_ref().is_some_and(|b| b.len() <= self.blocks.len()) {
            return;
        }
        if i == self.n {
            self.best = Some(self.blocks.clone());
            return;
        }
        for b in 0..self.blocks.len() {
            self.blocks[b] |= 1 << i;
            if self.admissible(b) {
                self.run(i + 1);
            }
            self.blocks[b] &= !(1 << i);
        }
        self.blocks.push(1 << i);
        let last = self.blocks.len() - 1;
        if self.admissible(last) {
            self.run(i + 1);
        }
        self.blocks.pop();
    }
}

/// Minimum agreement forest (vertex-disjoint components) by exhaustive
/// search with pruning.
pub fn maf_bruteforce(t1: &PhyloTree, t2: &PhyloTree) -> Result<RafPartition> {
    t1.check_same_universe(t2)?;
    let n = t1.n();
    if n > MAF_BRUTEFORCE_MAX_N {
        return Err(Error::TooLarge { what: "maf_bruteforce", n, max: MAF_BRUTEFORCE_MAX_N });
    }
    let mut s = AfSearch {
        n,
        agreement: AgreementCache::new(t1, t2),
        spans: vec![None; 1 << n],
        blocks: Vec::new(),
        best: None,
    };
    s.run(0);
    Ok(to_partition(n, &s.best.expect("singletons form an agreement forest"), ForestKind::Af))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phylo::{identity_caterpillar, parse_newick};
    use crate::raf::partition::{validate_af, validate_raf};

    #[test]
    fn identical_trees() {
        let t = identity_caterpillar(7).unwrap();
        assert_eq!(mraf_bruteforce(&t, &t).unwrap().size(), 1);
        assert_eq!(maf_bruteforce(&t, &t).unwrap().size(), 1);
    }

    #[test]
    fn single_quartet_difference() {
        // By hand: {1,2,4,5} plus {3} is optimal.
        let t1 = parse_newick("((1,2),3,(4,5));", None).unwrap();
        let t2 = parse_newick("((1,3),2,(4,5));", Some(t1.universe())).unwrap();
        let p = mraf_bruteforce(&t1, &t2).unwrap();
        assert_eq!(p.size(), 2);
        assert!(validate_raf(&t1, &t2, &p).unwrap());
        let f = maf_bruteforce(&t1, &t2).unwrap();
        assert!(validate_af(&t1, &t2, &f).unwrap());
        assert!(f.size() >= p.size());
    }

    #[test]
    fn guards() {
        let t = identity_caterpillar(11).unwrap();
        assert!(mraf_bruteforce(&t, &t).is_err());
        assert!(maf_bruteforce(&t, &t).is_ok());
        let t = identity_caterpillar(13).unwrap();
        assert!(maf_bruteforce(&t, &t).is_err());
    }
}

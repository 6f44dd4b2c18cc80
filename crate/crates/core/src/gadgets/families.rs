//! Small tree-pair families with a known relaxed agreement forest.

use crate::error::{Error, Result};
use crate::phylo::{caterpillar_from_sequence, PhyloTree, TreeBuilder};
use crate::raf::{ForestKind, RafPartition};
use crate::taxa::{TaxonId, TaxonSet, Universe};

/// A tree pair together with a forest known to be valid for it.
#[derive(Debug, Clone)]
pub struct Family {
    pub t1: PhyloTree,
    pub t2: PhyloTree,
    pub witness: RafPartition,
}

/// Every leaf `x` of `base` becomes a vertex joined to two cherries on four
/// new taxa `x.a, x.b, x.c, x.d`: `(a,b),(c,d)` in the first tree and
/// `(a,c),(b,d)` in the second. Two components always suffice (`{*.a, *.b}`
/// and `{*.c, *.d}`), while any agreement forest needs at least one
/// component per original leaf.
pub fn unbounded_maf_instance(base: &PhyloTree) -> Result<Family> {
    let m = base.n();
    if m < 2 {
        return Err(Error::TooSmall("unbounded_maf_instance", 2));
    }
    let labels: Vec<String> = (0..m)
        .flat_map(|x| ["a", "b", "c", "d"].map(|s| format!("{}.{s}", base.label(x))))
        .collect();
    let universe = Universe::new(labels);
    let quad = |x: TaxonId| [4 * x, 4 * x + 1, 4 * x + 2, 4 * x + 3];
    let build = |pairing: [[usize; 2]; 2]| -> Result<PhyloTree> {
        let mut b = TreeBuilder::new(universe.clone());
        let hub: Vec<_> = (0..base.vertex_count()).map(|_| b.add_internal()).collect();
        for (u, v) in base.edges() {
            b.add_edge(hub[u], hub[v]);
        }
        for x in 0..m {
            let u = hub[base.leaf(x)];
            let q = quad(x);
            for pair in pairing {
                let p = b.add_internal();
                b.add_edge(u, p);
                for i in pair {
                    let l = b.add_leaf(q[i]);
                    b.add_edge(p, l);
                }
            }
        }
        b.build()
    };
    let t1 = build([[0, 1], [2, 3]])?;
    let t2 = build([[0, 2], [1, 3]])?;
    let n = 4 * m;
    let witness = RafPartition::new(
        vec![
            TaxonSet::from_ids(n, (0..m).flat_map(|x| [4 * x, 4 * x + 1])),
            TaxonSet::from_ids(n, (0..m).flat_map(|x| [4 * x + 2, 4 * x + 3])),
        ],
        ForestKind::Raf,
    );
    Ok(Family { t1, t2, witness })
}

/// `a, b, ..., z, aa, ab, ...`
fn letter(mut i: usize) -> String {
    let mut s = Vec::new();
    loop {
        s.push(b'a' + (i % 26) as u8);
        if i < 26 {
            break;
        }
        i = i / 26 - 1;
    }
    s.reverse();
    String::from_utf8(s).expect("ascii")
}

/// Caterpillars interleaving numbers `1..=m` with letters: the first tree
/// reads `1, L_m, 2, L_(m-1), ..., m, L_1` and the second
/// `1, L_1, 2, L_2, ..., m, L_m`. The numbers and the letters each form one
/// component, and the pair has no common cherry.
pub fn nochain_caterpillar_family(m: usize) -> Result<Family> {
    if m < 2 {
        return Err(Error::TooSmall("nochain_caterpillar_family", 2));
    }
    let mut labels: Vec<String> = (1..=m).map(|i| i.to_string()).collect();
    labels.extend((0..m).map(letter));
    let universe = Universe::new(labels);
    let seq1: Vec<TaxonId> = (0..m).flat_map(|i| [i, m + (m - 1 - i)]).collect();
    let seq2: Vec<TaxonId> = (0..m).flat_map(|i| [i, m + i]).collect();
    let t1 = caterpillar_from_sequence(universe.clone(), &seq1)?;
    let t2 = caterpillar_from_sequence(universe, &seq2)?;
    let n = 2 * m;
    let witness =
        RafPartition::new(vec![TaxonSet::from_ids(n, 0..m), TaxonSet::from_ids(n, m..n)], ForestKind::Raf);
    Ok(Family { t1, t2, witness })
}

//! Random instance generators for tests and experiments.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::phylo::{caterpillar_from_sequence, PhyloTree, TreeBuilder, VertexId};
use crate::pims::Permutation;
use crate::taxa::{TaxonId, TaxonSet, Universe};

/// Adds `taxa` to `b` by stepwise insertion on uniformly chosen edges and
/// returns the edge list of the result.
fn grow<R: Rng + ?Sized>(b: &mut TreeBuilder, taxa: &[TaxonId], rng: &mut R) -> Vec<(VertexId, VertexId)> {
    let mut edges = Vec::new();
    match taxa.len() {
        0 => {}
        1 => {
            b.add_leaf(taxa[0]);
        }
        2 => {
            let (x, y) = (b.add_leaf(taxa[0]), b.add_leaf(taxa[1]));
            b.add_edge(x, y);
            edges.push((x, y));
        }
        _ => {
            let c = b.add_internal();
            for &t in &taxa[..3] {
                let l = b.add_leaf(t);
                b.add_edge(c, l);
                edges.push((c, l));
            }
            for &t in &taxa[3..] {
                let i = rng.gen_range(0..edges.len());
                let (u, v) = edges.swap_remove(i);
                let w = b.subdivide(u, v);
                let l = b.add_leaf(t);
                b.add_edge(w, l);
                edges.extend([(u, w), (w, v), (w, l)]);
            }
        }
    }
    edges
}

/// A tree drawn by inserting the taxa in random order on random edges.
pub fn random_tree<R: Rng + ?Sized>(universe: Universe, rng: &mut R) -> PhyloTree {
    let mut taxa: Vec<TaxonId> = (0..universe.len()).collect();
    taxa.shuffle(rng);
    let mut b = TreeBuilder::new(universe);
    grow(&mut b, &taxa, rng);
    b.build().expect("stepwise insertion yields a binary tree")
}

pub fn random_caterpillar<R: Rng + ?Sized>(universe: Universe, rng: &mut R) -> PhyloTree {
    let mut seq: Vec<TaxonId> = (0..universe.len()).collect();
    seq.shuffle(rng);
    caterpillar_from_sequence(universe, &seq).expect("caterpillar on a full sequence")
}

pub fn random_permutation<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Permutation {
    let mut v: Vec<usize> = (1..=n).collect();
    v.shuffle(rng);
    Permutation::new(v).expect("shuffled identity")
}

/// Two independent random trees on taxa labelled `1..=n`.
pub fn random_pair<R: Rng + ?Sized>(n: usize, rng: &mut R) -> (PhyloTree, PhyloTree) {
    let u = Universe::numbered(n);
    (random_tree(u.clone(), rng), random_tree(u, rng))
}

/// Moves a random leaf to a random edge elsewhere in the tree.
pub fn prune_regraft<R: Rng + ?Sized>(tree: &PhyloTree, rng: &mut R) -> PhyloTree {
    let n = tree.n();
    if n < 4 {
        return tree.clone();
    }
    let t = rng.gen_range(0..n);
    let leaf = tree.leaf(t);
    let parent = tree.neighbors(leaf)[0];
    let mut b = TreeBuilder::from_tree(tree);
    b.remove_edge(leaf, parent);
    let targets: Vec<(VertexId, VertexId)> = tree.edges().filter(|&(u, v)| u != leaf && v != leaf).collect();
    let (u, v) = targets[rng.gen_range(0..targets.len())];
    let w = b.subdivide(u, v);
    b.add_edge(w, leaf);
    b.build().expect("regrafting keeps the tree binary")
}

/// A random tree and a copy perturbed by `moves` leaf relocations; such
/// pairs tend to share cherries.
pub fn perturbed_pair<R: Rng + ?Sized>(n: usize, moves: usize, rng: &mut R) -> (PhyloTree, PhyloTree) {
    let t1 = random_tree(Universe::numbered(n), rng);
    let mut t2 = t1.clone();
    for _ in 0..moves {
        t2 = prune_regraft(&t2, rng);
    }
    (t1, t2)
}

/// A random caterpillar paired with the identity caterpillar order.
pub fn random_caterpillar_pair<R: Rng + ?Sized>(n: usize, rng: &mut R) -> (PhyloTree, PhyloTree, Permutation) {
    let pi = random_permutation(n, rng);
    let u = Universe::numbered(n);
    let id: Vec<TaxonId> = (0..n).collect();
    let seq: Vec<TaxonId> = pi.values().iter().map(|&v| v - 1).collect();
    let t1 = caterpillar_from_sequence(u.clone(), &id).expect("identity caterpillar");
    let t2 = caterpillar_from_sequence(u, &seq).expect("permutation caterpillar");
    (t1, t2, pi)
}

/// Random trees on `base` taxa labelled `1..=base`, each with the same chain
/// of `chain_len` extra taxa `c1, c2, ...` spliced into a random edge.
/// Returns the pair and the chain taxa in order.
pub fn plant_common_chain<R: Rng + ?Sized>(
    base: usize,
    chain_len: usize,
    rng: &mut R,
) -> (PhyloTree, PhyloTree, Vec<TaxonId>) {
    assert!(base >= 2, "need an edge to splice into");
    let mut labels: Vec<String> = (1..=base).map(|i| i.to_string()).collect();
    labels.extend((1..=chain_len).map(|i| format!("c{i}")));
    let universe = Universe::new(labels);
    let chain: Vec<TaxonId> = (base..base + chain_len).collect();
    let make = |rng: &mut R| {
        let mut taxa: Vec<TaxonId> = (0..base).collect();
        taxa.shuffle(rng);
        let mut b = TreeBuilder::new(universe.clone());
        let edges = grow(&mut b, &taxa, rng);
        let (u, v) = edges[rng.gen_range(0..edges.len())];
        b.remove_edge(u, v);
        let spine = b.add_path(chain_len);
        b.add_edge(u, spine[0]);
        b.add_edge(*spine.last().unwrap(), v);
        for (&s, &t) in spine.iter().zip(&chain) {
            let l = b.add_leaf(t);
            b.add_edge(s, l);
        }
        b.build().expect("spliced chain keeps the tree binary")
    };
    let t1 = make(rng);
    let t2 = make(rng);
    (t1, t2, chain)
}

/// Uniformly random subset of `0..n`, each taxon kept with probability `p`.
pub fn random_subset<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> TaxonSet {
    TaxonSet::from_ids(n, (0..n).filter(|_| rng.gen_bool(p)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phylo::caterpillar_order;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generated_trees_are_binary() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for n in 1..15 {
            let t = random_tree(Universe::numbered(n), &mut rng);
            assert_eq!(t.n(), n);
            if n >= 3 {
                assert_eq!(t.vertex_count(), 2 * n - 2);
            }
            let moved = prune_regraft(&t, &mut rng);
            assert_eq!(moved.vertex_count(), t.vertex_count());
        }
    }

    #[test]
    fn caterpillars_are_caterpillars() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for n in 4..12 {
            assert!(caterpillar_order(&random_caterpillar(Universe::numbered(n), &mut rng)).is_some());
            let (t1, t2, pi) = random_caterpillar_pair(n, &mut rng);
            assert_eq!(pi.len(), n);
            assert!(caterpillar_order(&t1).is_some() && caterpillar_order(&t2).is_some());
        }
    }

    #[test]
    fn planted_chain_shape() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let (t1, t2, chain) = plant_common_chain(6, 5, &mut rng);
        assert_eq!(t1.n(), 11);
        assert!(t1.check_same_universe(&t2).is_ok());
        for t in [&t1, &t2] {
            for w in chain.windows(2) {
                let (a, b) = (t.parent_of(w[0]).unwrap(), t.parent_of(w[1]).unwrap());
                assert!(t.neighbors(a).contains(&b));
            }
        }
    }
}

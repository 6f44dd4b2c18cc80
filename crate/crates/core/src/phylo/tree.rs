use std::collections::VecDeque;
use std::fmt;

use crate::error::{Error, Result};
use crate::taxa::{TaxonId, TaxonSet, Universe};

/// Index of a vertex inside one [`PhyloTree`].
pub type VertexId = usize;

/// An unrooted binary phylogenetic tree whose leaves are bijectively labelled
/// by the taxa of its [`Universe`].
///
/// Trees with one or two taxa are representable (a single vertex, or a single
/// edge) because restriction can produce them; every other tree has internal
/// vertices of degree exactly three.
#[derive(Clone)]
pub struct PhyloTree {
    universe: Universe,
    adj: Vec<Vec<VertexId>>,
    taxon_of: Vec<Option<TaxonId>>,
    leaf_of: Vec<VertexId>,
}

impl PhyloTree {
    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    /// Number of taxa (leaves).
    pub fn n(&self) -> usize {
        self.leaf_of.len()
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn neighbors(&self, v: VertexId) -> &[VertexId] {
        &self.adj[v]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.adj[v].len()
    }

    pub fn taxon_at(&self, v: VertexId) -> Option<TaxonId> {
        self.taxon_of[v]
    }

    pub fn leaf(&self, t: TaxonId) -> VertexId {
        self.leaf_of[t]
    }

    pub fn is_leaf(&self, v: VertexId) -> bool {
        self.taxon_of[v].is_some()
    }

    /// The unique neighbor of a taxon's leaf (`None` for one-taxon trees).
    pub fn parent_of(&self, t: TaxonId) -> Option<VertexId> {
        self.adj[self.leaf_of[t]].first().copied()
    }

    pub fn label(&self, t: TaxonId) -> &str {
        self.universe.label(t)
    }

    pub fn taxa(&self) -> TaxonSet {
        self.universe.full_set()
    }

    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, ns)| ns.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
    }

    pub fn check_same_universe(&self, other: &PhyloTree) -> Result<()> {
        if self.universe.same_as(&other.universe) {
            Ok(())
        } else {
            Err(Error::UniverseMismatch)
        }
    }

    pub fn check_taxa(&self, s: &TaxonSet) -> Result<()> {
        if s.universe_size() != self.n() {
            return Err(Error::UniverseMismatch);
        }
        Ok(())
    }

    /// Same tree over a relabelled but equally sized universe.
    pub fn with_universe(&self, universe: Universe) -> Result<PhyloTree> {
        if universe.len() != self.n() {
            return Err(Error::UniverseMismatch);
        }
        Ok(PhyloTree { universe, ..self.clone() })
    }

    /// Breadth-first distances (in edges) from `src` to every vertex.
    pub fn distances_from(&self, src: VertexId) -> Vec<u32> {
        let mut dist = vec![u32::MAX; self.adj.len()];
        let mut queue = VecDeque::from([src]);
        dist[src] = 0;
        while let Some(u) = queue.pop_front() {
            for &v in &self.adj[u] {
                if dist[v] == u32::MAX {
                    dist[v] = dist[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    /// Leaf-to-leaf distance matrix indexed by taxon.
    pub fn leaf_distances(&self) -> Vec<Vec<u32>> {
        (0..self.n())
            .map(|a| {
                let d = self.distances_from(self.leaf_of[a]);
                self.leaf_of.iter().map(|&v| d[v]).collect()
            })
            .collect()
    }

    /// Vertex sequence of the unique path between two vertices, inclusive.
    pub fn path(&self, from: VertexId, to: VertexId) -> Vec<VertexId> {
        let mut pred = vec![usize::MAX; self.adj.len()];
        let mut queue = VecDeque::from([from]);
        pred[from] = from;
        while let Some(u) = queue.pop_front() {
            if u == to {
                break;
            }
            for &v in &self.adj[u] {
                if pred[v] == usize::MAX {
                    pred[v] = u;
                    queue.push_back(v);
                }
            }
        }
        let mut path = vec![to];
        let mut cur = to;
        while cur != from {
            cur = pred[cur];
            path.push(cur);
        }
        path.reverse();
        path
    }

    /// Vertices of the minimal subtree `T[S]` connecting the leaves of `s`.
    pub fn spanning_vertices(&self, s: &TaxonSet) -> Vec<bool> {
        let mut keep = vec![false; self.adj.len()];
        let Some(root_taxon) = s.first() else {
            return keep;
        };
        // Root at a member leaf; a vertex lies on T[S] iff its subtree holds a member.
        let root = self.leaf_of[root_taxon];
        let order = self.dfs_order(root);
        let mut parent = vec![usize::MAX; self.adj.len()];
        for &(v, p) in &order {
            parent[v] = p;
        }
        let mut has_member = vec![false; self.adj.len()];
        for &(v, _) in order.iter().rev() {
            if let Some(t) = self.taxon_of[v] {
                if s.contains(t) {
                    has_member[v] = true;
                }
            }
            if has_member[v] && parent[v] != usize::MAX {
                has_member[parent[v]] = true;
            }
        }
        for (v, k) in keep.iter_mut().enumerate() {
            *k = has_member[v];
        }
        keep
    }

    /// Preorder `(vertex, parent)` pairs from `root`; the root's parent is `usize::MAX`.
    pub(crate) fn dfs_order(&self, root: VertexId) -> Vec<(VertexId, VertexId)> {
        let mut order = Vec::with_capacity(self.adj.len());
        let mut stack = vec![(root, usize::MAX)];
        while let Some((v, p)) = stack.pop() {
            order.push((v, p));
            for &w in self.adj[v].iter().rev() {
                if w != p {
                    stack.push((w, v));
                }
            }
        }
        order
    }

    /// The restriction `T|S`: minimal spanning subtree of `S` with degree-2
    /// vertices suppressed. Taxa of the result are renumbered `0..|S|` in
    /// ascending order of their ids here, and keep their labels.
    pub fn restrict(&self, s: &TaxonSet) -> Result<PhyloTree> {
        self.check_taxa(s)?;
        if s.is_empty() {
            return Err(Error::EmptyTaxonSet);
        }
        let keep = self.spanning_vertices(s);
        let mut new_taxon = vec![usize::MAX; self.n()];
        for (i, t) in s.iter().enumerate() {
            new_taxon[t] = i;
        }
        let mut b = TreeBuilder::new(self.universe.subset(s));
        let mut map = vec![usize::MAX; self.adj.len()];
        for v in 0..self.adj.len() {
            if keep[v] {
                map[v] = match self.taxon_of[v] {
                    Some(t) if s.contains(t) => b.add_leaf(new_taxon[t]),
                    _ => b.add_internal(),
                };
            }
        }
        for (u, v) in self.edges() {
            if keep[u] && keep[v] {
                b.add_edge(map[u], map[v]);
            }
        }
        b.build()
    }

    /// Canonical token stream: the tree is hung from the neighbor of taxon 0's
    /// leaf and every child list is ordered by smallest taxon id underneath.
    pub fn canonical_tokens(&self) -> Vec<Token> {
        let mut out = Vec::with_capacity(3 * self.adj.len());
        match self.n() {
            0 => {}
            1 => out.push(Token::Taxon(0)),
            _ => {
                let anchor = self.adj[self.leaf_of[0]][0];
                let root = if self.n() == 2 { self.leaf_of[0] } else { anchor };
                if self.n() == 2 {
                    out.extend([Token::Open, Token::Taxon(0), Token::Taxon(1), Token::Close]);
                } else {
                    self.emit(root, usize::MAX, &mut out);
                }
            }
        }
        out
    }

    fn emit(&self, v: VertexId, parent: VertexId, out: &mut Vec<Token>) -> TaxonId {
        if let Some(t) = self.taxon_of[v] {
            out.push(Token::Taxon(t));
            return t;
        }
        let mut parts: Vec<(TaxonId, Vec<Token>)> = self.adj[v]
            .iter()
            .filter(|&&w| w != parent)
            .map(|&w| {
                let mut sub = Vec::new();
                let m = self.emit(w, v, &mut sub);
                (m, sub)
            })
            .collect();
        parts.sort_by_key(|(m, _)| *m);
        out.push(Token::Open);
        for (_, sub) in &parts {
            out.extend_from_slice(sub);
        }
        out.push(Token::Close);
        parts[0].0
    }

    /// Label-preserving isomorphism test.
    pub fn equals(&self, other: &PhyloTree) -> Result<bool> {
        self.check_same_universe(other)?;
        Ok(self.canonical_tokens() == other.canonical_tokens())
    }

    /// Whether `{a, b}` is a cherry (both leaves share their neighbor).
    pub fn is_cherry(&self, a: TaxonId, b: TaxonId) -> bool {
        a != b && self.n() >= 3 && self.parent_of(a) == self.parent_of(b)
    }

    /// All cherries `(a, b)` with `a < b`, sorted.
    pub fn cherries(&self) -> Vec<(TaxonId, TaxonId)> {
        let mut out = Vec::new();
        if self.n() < 3 {
            return out;
        }
        for v in 0..self.adj.len() {
            if self.is_leaf(v) {
                continue;
            }
            let leaves: Vec<TaxonId> = self.adj[v].iter().filter_map(|&w| self.taxon_of[w]).collect();
            for i in 0..leaves.len() {
                for j in i + 1..leaves.len() {
                    out.push((leaves[i].min(leaves[j]), leaves[i].max(leaves[j])));
                }
            }
        }
        out.sort_unstable();
        out
    }
}

impl fmt::Debug for PhyloTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::phylo::newick::write_newick(self))
    }
}

/// One symbol of a canonical tree serialization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Token {
    Open,
    Close,
    Taxon(TaxonId),
}

/// Incremental constructor for [`PhyloTree`].
///
/// `build` prunes unlabelled vertices of degree at most one, suppresses
/// unlabelled vertices of degree two and then validates the result, so
/// callers may describe subdivided or partially spanning graphs.
pub struct TreeBuilder {
    universe: Universe,
    adj: Vec<Vec<VertexId>>,
    taxon_of: Vec<Option<TaxonId>>,
}

impl TreeBuilder {
    pub fn new(universe: Universe) -> Self {
        TreeBuilder { universe, adj: Vec::new(), taxon_of: Vec::new() }
    }

    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    pub fn add_internal(&mut self) -> VertexId {
        self.adj.push(Vec::new());
        self.taxon_of.push(None);
        self.adj.len() - 1
    }

    pub fn add_leaf(&mut self, taxon: TaxonId) -> VertexId {
        let v = self.add_internal();
        self.taxon_of[v] = Some(taxon);
        v
    }

    pub fn add_edge(&mut self, u: VertexId, v: VertexId) {
        self.adj[u].push(v);
        self.adj[v].push(u);
    }

    /// Adds a path of `len` fresh internal vertices and returns them in order.
    pub fn add_path(&mut self, len: usize) -> Vec<VertexId> {
        let vs: Vec<VertexId> = (0..len).map(|_| self.add_internal()).collect();
        for w in vs.windows(2) {
            self.add_edge(w[0], w[1]);
        }
        vs
    }

    /// A builder holding a copy of `tree` with the same vertex ids.
    pub fn from_tree(tree: &PhyloTree) -> Self {
        let mut b = TreeBuilder::new(tree.universe.clone());
        b.adj = tree.adj.clone();
        b.taxon_of = tree.taxon_of.clone();
        b
    }

    /// Removes the edge `u`–`v` if present.
    pub fn remove_edge(&mut self, u: VertexId, v: VertexId) {
        self.adj[u].retain(|&w| w != v);
        self.adj[v].retain(|&w| w != u);
    }

    /// Replaces edge `u`–`v` by a path through a fresh vertex, returned.
    pub fn subdivide(&mut self, u: VertexId, v: VertexId) -> VertexId {
        self.remove_edge(u, v);
        let w = self.add_internal();
        self.add_edge(u, w);
        self.add_edge(w, v);
        w
    }

    pub fn build(mut self) -> Result<PhyloTree> {
        let n = self.universe.len();
        let total = self.adj.len();
        let mut alive = vec![true; total];

        // Prune dangling unlabelled vertices.
        let mut stack: Vec<VertexId> =
            (0..total).filter(|&v| self.taxon_of[v].is_none() && self.adj[v].len() <= 1).collect();
        while let Some(v) = stack.pop() {
            if !alive[v] || self.adj[v].len() > 1 || self.taxon_of[v].is_some() {
                continue;
            }
            alive[v] = false;
            if let Some(&w) = self.adj[v].first() {
                self.adj[w].retain(|&x| x != v);
                if self.taxon_of[w].is_none() && self.adj[w].len() <= 1 {
                    stack.push(w);
                }
            }
            self.adj[v].clear();
        }

        // Suppress unlabelled degree-2 vertices.
        for (v, live) in alive.iter_mut().enumerate() {
            if *live && self.taxon_of[v].is_none() && self.adj[v].len() == 2 {
                let (a, b) = (self.adj[v][0], self.adj[v][1]);
                for (x, y) in [(a, b), (b, a)] {
                    let slot = self.adj[x].iter().position(|&z| z == v).expect("symmetric adjacency");
                    self.adj[x][slot] = y;
                }
                *live = false;
                self.adj[v].clear();
            }
        }

        let mut remap = vec![usize::MAX; total];
        let mut next = 0;
        for v in 0..total {
            if alive[v] {
                remap[v] = next;
                next += 1;
            }
        }
        let mut adj = vec![Vec::new(); next];
        let mut taxon_of = vec![None; next];
        let mut leaf_of = vec![usize::MAX; n];
        for v in 0..total {
            if !alive[v] {
                continue;
            }
            let nv = remap[v];
            adj[nv] = self.adj[v].iter().map(|&w| remap[w]).collect();
            taxon_of[nv] = self.taxon_of[v];
            if let Some(t) = self.taxon_of[v] {
                if t >= n {
                    return Err(Error::UnknownTaxon(t));
                }
                if leaf_of[t] != usize::MAX {
                    return Err(Error::InvalidParameters(format!("taxon {t} placed twice")));
                }
                leaf_of[t] = nv;
            }
        }
        if let Some(t) = leaf_of.iter().position(|&v| v == usize::MAX) {
            return Err(Error::InvalidParameters(format!("taxon {t} has no leaf")));
        }
        let tree = PhyloTree { universe: self.universe, adj, taxon_of, leaf_of };
        tree.validate()?;
        Ok(tree)
    }
}

impl PhyloTree {
    fn validate(&self) -> Result<()> {
        let n = self.n();
        let edge_count: usize = self.adj.iter().map(Vec::len).sum::<usize>() / 2;
        let bad = |msg: String| Err(Error::InvalidParameters(msg));
        if n == 0 {
            return bad("tree has no taxa".into());
        }
        if edge_count + 1 != self.adj.len() {
            return bad(format!("{} vertices but {edge_count} edges", self.adj.len()));
        }
        let reached = self.distances_from(0).iter().filter(|&&d| d != u32::MAX).count();
        if reached != self.adj.len() {
            return bad("tree is disconnected".into());
        }
        for v in 0..self.adj.len() {
            let d = self.adj[v].len();
            match self.taxon_of[v] {
                Some(t) if n >= 2 && d != 1 => {
                    return bad(format!("taxon {} sits on a vertex of degree {d}", self.universe.label(t)))
                }
                None if d != 3 => return bad(format!("internal vertex of degree {d}")),
                _ => {}
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phylo::caterpillar::identity_caterpillar;

    #[test]
    fn restriction_to_everything_is_identity() {
        let t = identity_caterpillar(7).unwrap();
        let r = t.restrict(&t.taxa()).unwrap();
        assert!(r.equals(&t).unwrap());
    }

    #[test]
    fn small_restrictions_are_degenerate_but_valid() {
        let t = identity_caterpillar(6).unwrap();
        let one = t.restrict(&TaxonSet::from_ids(6, [3])).unwrap();
        assert_eq!((one.n(), one.vertex_count()), (1, 1));
        let two = t.restrict(&TaxonSet::from_ids(6, [0, 5])).unwrap();
        assert_eq!((two.n(), two.vertex_count()), (2, 2));
        let three = t.restrict(&TaxonSet::from_ids(6, [0, 2, 5])).unwrap();
        assert_eq!((three.n(), three.vertex_count()), (3, 4));
    }

    #[test]
    fn restrict_rejects_empty_set() {
        let t = identity_caterpillar(5).unwrap();
        assert_eq!(t.restrict(&TaxonSet::empty(5)).unwrap_err(), Error::EmptyTaxonSet);
    }

    #[test]
    fn builder_suppresses_subdivisions() {
        let mut b = TreeBuilder::new(Universe::numbered(3));
        let c = b.add_internal();
        for t in 0..3 {
            let mid = b.add_internal();
            let leaf = b.add_leaf(t);
            b.add_edge(c, mid);
            b.add_edge(mid, leaf);
        }
        let t = b.build().unwrap();
        assert_eq!(t.vertex_count(), 4);
    }

    #[test]
    fn builder_rejects_multifurcation() {
        let mut b = TreeBuilder::new(Universe::numbered(4));
        let c = b.add_internal();
        for t in 0..4 {
            let l = b.add_leaf(t);
            b.add_edge(c, l);
        }
        assert!(b.build().is_err());
    }

    #[test]
    fn cherries_of_identity_caterpillar() {
        let t = identity_caterpillar(6).unwrap();
        assert_eq!(t.cherries(), vec![(0, 1), (4, 5)]);
    }
}

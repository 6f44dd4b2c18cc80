use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, NewickError, Result};
use crate::phylo::{is_homeomorphic, PhyloTree};
use crate::taxa::{TaxonSet, Universe};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ForestKind {
    #[serde(rename = "RAF")]
    Raf,
    #[serde(rename = "AF")]
    Af,
}

impl fmt::Display for ForestKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ForestKind::Raf => "RAF",
            ForestKind::Af => "AF",
        })
    }
}

/// A partition of the taxa into components, each claimed to agree in both
/// trees (and, for [`ForestKind::Af`], to span vertex-disjoint subtrees).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RafPartition {
    pub components: Vec<TaxonSet>,
    pub kind: ForestKind,
}

/// Label-based JSON form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionJson {
    pub components: Vec<Vec<String>>,
    pub kind: ForestKind,
    pub size: usize,
    /// `size - 1`.
    #[serde(default)]
    pub distance: usize,
}

impl RafPartition {
    pub fn new(components: Vec<TaxonSet>, kind: ForestKind) -> Self {
        RafPartition { components, kind }
    }

    /// Number of components.
    pub fn size(&self) -> usize {
        self.components.len()
    }

    /// `size - 1`; zero exactly for the one-component forest.
    pub fn distance(&self) -> usize {
        self.size().saturating_sub(1)
    }

    /// Components sorted by their smallest taxon.
    pub fn normalized(mut self) -> Self {
        self.components.sort_by_key(|c| c.first());
        self
    }

    /// Component index of every taxon.
    pub fn coloring(&self, n: usize) -> Result<Vec<usize>> {
        self.check_partition(n)?;
        let mut colors = vec![0; n];
        for (i, c) in self.components.iter().enumerate() {
            for t in c.iter() {
                colors[t] = i;
            }
        }
        Ok(colors)
    }

    /// Nonempty, pairwise disjoint components covering `0..n`.
    pub fn check_partition(&self, n: usize) -> Result<()> {
        let mut covered = TaxonSet::empty(n);
        for (i, c) in self.components.iter().enumerate() {
            if c.universe_size() != n {
                return Err(Error::NotAPartition(format!("component {i} is over {} taxa, expected {n}", c.universe_size())));
            }
            if c.is_empty() {
                return Err(Error::NotAPartition(format!("component {i} is empty")));
            }
            if !c.is_disjoint(&covered) {
                return Err(Error::NotAPartition(format!("component {i} overlaps an earlier one")));
            }
            covered.union_with(c);
        }
        if covered.len() != n {
            let missing = TaxonSet::full(n).difference(&covered);
            return Err(Error::NotAPartition(format!("taxon {} is not covered", missing.first().unwrap())));
        }
        Ok(())
    }

    pub fn to_json(&self, universe: &Universe) -> PartitionJson {
        PartitionJson {
            components: self.components.iter().map(|c| universe.labels_of(c)).collect(),
            kind: self.kind,
            size: self.size(),
            distance: self.distance(),
        }
    }

    /// Rebuilds a partition from labels; unknown labels are an error, and
    /// the result is checked to be a partition.
    pub fn from_json(universe: &Universe, json: &PartitionJson) -> Result<Self> {
        let n = universe.len();
        let mut components = Vec::with_capacity(json.components.len());
        for labels in &json.components {
            let mut set = TaxonSet::empty(n);
            for l in labels {
                let id = universe.id_of(l).ok_or_else(|| Error::Newick(NewickError::UnknownLabel(l.clone())))?;
                if set.contains(id) {
                    return Err(Error::NotAPartition(format!("label {l} repeated")));
                }
                set.insert(id);
            }
            components.push(set);
        }
        let p = RafPartition { components, kind: json.kind };
        p.check_partition(n)?;
        Ok(p)
    }
}

/// Whether every component of `p` agrees in both trees. Errors if `p` is
/// not a partition of the taxa.
pub fn validate_raf(t1: &PhyloTree, t2: &PhyloTree, p: &RafPartition) -> Result<bool> {
    t1.check_same_universe(t2)?;
    p.check_partition(t1.n())?;
    for c in &p.components {
        if !is_homeomorphic(t1, t2, c)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// [`validate_raf`] plus pairwise vertex-disjointness of the spanning
/// subtrees of the components in both trees.
pub fn validate_af(t1: &PhyloTree, t2: &PhyloTree, p: &RafPartition) -> Result<bool> {
    if !validate_raf(t1, t2, p)? {
        return Ok(false);
    }
    for tree in [t1, t2] {
        let mut used = vec![false; tree.vertex_count()];
        for c in &p.components {
            for (v, inside) in tree.spanning_vertices(c).into_iter().enumerate() {
                if inside && std::mem::replace(&mut used[v], true) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

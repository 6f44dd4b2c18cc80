//! The pair of trees encoding a permutation, in which a forest with
//! `alpha + beta` components exists exactly when the permutation splits into
//! at most `alpha` increasing and `beta` decreasing subsequences.
//!
//! Both trees carry the permutation taxa `v1..vn` on a central caterpillar
//! (identity order in the first tree, permutation order in the second), and
//! `8k` side caterpillars hung from two paths at the ends of the central one.
//! Side caterpillars for increasing classes are reversed between the trees;
//! those for decreasing classes switch ends.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::phylo::{PhyloTree, TreeBuilder, VertexId};
use crate::pims::{Direction, MonotonePartition, Permutation};
use crate::raf::{ForestKind, RafPartition};
use crate::taxa::{TaxonId, TaxonSet, Universe};

/// Kinds of side caterpillar.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Side {
    /// Left, increasing.
    L,
    /// Right, increasing.
    R,
    /// Left, decreasing.
    Lh,
    /// Right, decreasing.
    Rh,
}

impl Side {
    pub const ALL: [Side; 4] = [Side::L, Side::R, Side::Lh, Side::Rh];

    fn prefix(self) -> &'static str {
        match self {
            Side::L => "L",
            Side::R => "R",
            Side::Lh => "Lh",
            Side::Rh => "Rh",
        }
    }

    fn index(self) -> usize {
        self as usize
    }

    fn hatted(self) -> bool {
        matches!(self, Side::Lh | Side::Rh)
    }
}

/// Taxon ids of the named groups of a hardness instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GadgetPieces {
    pub k: usize,
    /// `perm[i]` is the taxon `v(i+1)`.
    pub perm: Vec<TaxonId>,
    /// `side[s][i]` lists the leaves of caterpillar `i+1` of kind `s`, in
    /// spine order.
    pub side: [Vec<Vec<TaxonId>>; 4],
}

impl GadgetPieces {
    /// The eight class sets: for each kind, caterpillars `1..=k` and
    /// `k+1..=2k`. Order: L1, L2, R1, R2, Lh1, Lh2, Rh1, Rh2.
    pub fn class_sets(&self, universe: usize) -> Vec<(String, TaxonSet)> {
        let mut out = Vec::with_capacity(8);
        for s in Side::ALL {
            for half in 0..2 {
                let ids = self.side[s.index()][half * self.k..(half + 1) * self.k].iter().flatten().copied();
                out.push((format!("{}{}", s.prefix(), half + 1), TaxonSet::from_ids(universe, ids)));
            }
        }
        out
    }

    /// Recognizes the pieces from taxon labels as produced by
    /// [`hardness_instance`]; `None` if the labels do not fit that scheme.
    pub fn from_labels(universe: &Universe) -> Option<GadgetPieces> {
        let mut perm: Vec<(usize, TaxonId)> = Vec::new();
        let mut side: [Vec<(usize, usize, TaxonId)>; 4] = Default::default();
        for (id, label) in universe.labels().iter().enumerate() {
            if let Some(rest) = label.strip_prefix('v') {
                perm.push((rest.parse().ok()?, id));
                continue;
            }
            let (s, rest) = [Side::Lh, Side::Rh, Side::L, Side::R]
                .into_iter()
                .find_map(|s| label.strip_prefix(s.prefix()).map(|r| (s, r)))?;
            let (i, j) = rest.split_once('_')?;
            side[s.index()].push((i.parse().ok()?, j.parse().ok()?, id));
        }
        perm.sort_unstable();
        if perm.iter().enumerate().any(|(i, &(v, _))| v != i + 1) {
            return None;
        }
        let count = side[0].iter().map(|&(i, _, _)| i).max()?;
        if count % 2 != 0 {
            return None;
        }
        let k = count / 2;
        let mut grouped: [Vec<Vec<TaxonId>>; 4] = Default::default();
        for s in Side::ALL {
            let list = &mut side[s.index()];
            list.sort_unstable();
            let mut g = vec![Vec::new(); 2 * k];
            for &(i, j, id) in list.iter() {
                if i == 0 || i > 2 * k || j != g[i - 1].len() + 1 {
                    return None;
                }
                g[i - 1].push(id);
            }
            grouped[s.index()] = g;
        }
        let len = |s: Side| grouped[s.index()][0].len();
        let uniform = Side::ALL.iter().all(|&s| grouped[s.index()].iter().all(|c| c.len() == len(s) && !c.is_empty()));
        if !uniform || len(Side::L) != len(Side::R) || len(Side::Lh) != len(Side::Rh) {
            return None;
        }
        Some(GadgetPieces { k, perm: perm.into_iter().map(|(_, id)| id).collect(), side: grouped })
    }

    /// Half the side caterpillar lengths.
    pub fn alpha_beta(&self) -> (usize, usize) {
        (self.side[Side::L.index()][0].len() / 2, self.side[Side::Lh.index()][0].len() / 2)
    }
}

#[derive(Debug, Clone)]
pub struct HardnessInstance {
    pub t1: PhyloTree,
    pub t2: PhyloTree,
    pub pieces: GadgetPieces,
    pub pi: Permutation,
    pub alpha: usize,
    pub beta: usize,
    /// Vertices per tree before degree-2 vertices are contracted.
    pub vertices_before_contraction: usize,
}

impl HardnessInstance {
    pub fn k(&self) -> usize {
        self.alpha + self.beta
    }
}

struct Layout {
    universe: Universe,
    pieces: GadgetPieces,
}

fn layout(n: usize, alpha: usize, beta: usize) -> Layout {
    let k = alpha + beta;
    let mut labels: Vec<String> = (1..=n).map(|i| format!("v{i}")).collect();
    let mut side: [Vec<Vec<TaxonId>>; 4] = Default::default();
    for s in Side::ALL {
        let len = 2 * if s.hatted() { beta } else { alpha };
        for i in 1..=2 * k {
            let mut leaves = Vec::with_capacity(len);
            for j in 1..=len {
                leaves.push(labels.len());
                labels.push(format!("{}{i}_{j}", s.prefix()));
            }
            side[s.index()].push(leaves);
        }
    }
    Layout { universe: Universe::new(labels), pieces: GadgetPieces { k, perm: (0..n).collect(), side } }
}

/// Names of the vertices on the two connecting paths.
#[derive(Clone, Copy)]
enum Stop {
    S(usize),
    Sh(usize),
    T(usize),
    Th(usize),
    SStar,
    TStar,
}

/// Path vertices of one tree, addressed by name.
struct Paths {
    s: Vec<VertexId>,
    sh: Vec<VertexId>,
    t: Vec<VertexId>,
    th: Vec<VertexId>,
    s_star: VertexId,
    t_star: VertexId,
}

impl Paths {
    fn new(b: &mut TreeBuilder, k: usize) -> Self {
        let fresh = |b: &mut TreeBuilder| (0..2 * k).map(|_| b.add_internal()).collect::<Vec<_>>();
        let s = fresh(b);
        let sh = fresh(b);
        let t = fresh(b);
        let th = fresh(b);
        Paths { s, sh, t, th, s_star: b.add_internal(), t_star: b.add_internal() }
    }

    fn at(&self, stop: Stop) -> VertexId {
        match stop {
            Stop::S(i) => self.s[i - 1],
            Stop::Sh(i) => self.sh[i - 1],
            Stop::T(i) => self.t[i - 1],
            Stop::Th(i) => self.th[i - 1],
            Stop::SStar => self.s_star,
            Stop::TStar => self.t_star,
        }
    }

    fn link(&self, b: &mut TreeBuilder, stops: &[Stop]) {
        for w in stops.windows(2) {
            b.add_edge(self.at(w[0]), self.at(w[1]));
        }
    }
}

/// Side caterpillar spines: `spine[s][i][j]` is vertex `j+1` of caterpillar
/// `i+1` of kind `s`, with its leaf attached.
fn side_caterpillars(b: &mut TreeBuilder, pieces: &GadgetPieces) -> [Vec<Vec<VertexId>>; 4] {
    let mut spines: [Vec<Vec<VertexId>>; 4] = Default::default();
    for s in Side::ALL {
        for leaves in &pieces.side[s.index()] {
            let spine = b.add_path(leaves.len());
            for (&v, &t) in spine.iter().zip(leaves) {
                let l = b.add_leaf(t);
                b.add_edge(v, l);
            }
            spines[s.index()].push(spine);
        }
    }
    spines
}

fn central(b: &mut TreeBuilder, taxa: impl Iterator<Item = TaxonId>) -> Vec<VertexId> {
    let taxa: Vec<TaxonId> = taxa.collect();
    let spine = b.add_path(taxa.len());
    for (&v, &t) in spine.iter().zip(&taxa) {
        let l = b.add_leaf(t);
        b.add_edge(v, l);
    }
    spine
}

pub fn hardness_instance(pi: &Permutation, alpha: usize, beta: usize) -> Result<HardnessInstance> {
    let n = pi.len();
    let k = alpha + beta;
    if n == 0 || alpha == 0 || beta == 0 {
        return Err(Error::InvalidParameters("need n >= 1, alpha >= 1 and beta >= 1".into()));
    }
    let cap = (2.0 * (n as f64).sqrt()).ceil() as usize;
    if k > cap {
        return Err(Error::InvalidParameters(format!("alpha + beta = {k} exceeds ceil(2 sqrt(n)) = {cap}")));
    }
    let Layout { universe, pieces } = layout(n, alpha, beta);
    let (len_inc, len_dec) = (2 * alpha, 2 * beta);
    let (l, r, lh, rh) = (Side::L.index(), Side::R.index(), Side::Lh.index(), Side::Rh.index());

    let mut b1 = TreeBuilder::new(universe.clone());
    let sp = side_caterpillars(&mut b1, &pieces);
    let p1 = Paths::new(&mut b1, k);
    let x = central(&mut b1, 0..n);
    let mut start = Vec::new();
    start.extend((1..=k).map(Stop::Sh));
    start.extend((1..=k).map(Stop::S));
    start.push(Stop::SStar);
    start.extend((k + 1..=2 * k).rev().map(Stop::S));
    start.extend((k + 1..=2 * k).rev().map(Stop::Sh));
    let mut end = Vec::new();
    end.extend((1..=k).rev().map(Stop::Th));
    end.extend((1..=k).rev().map(Stop::T));
    end.push(Stop::TStar);
    end.extend((k + 1..=2 * k).map(Stop::T));
    end.extend((k + 1..=2 * k).map(Stop::Th));
    p1.link(&mut b1, &start);
    p1.link(&mut b1, &end);
    b1.add_edge(p1.s_star, x[0]);
    b1.add_edge(p1.t_star, x[n - 1]);
    for (i, (l_spine, r_spine)) in sp[l].iter().zip(&sp[r]).enumerate() {
        b1.add_edge(p1.s[i], l_spine[len_inc - 1]);
        b1.add_edge(p1.t[i], r_spine[0]);
        b1.add_edge(p1.sh[i], sp[lh][i][len_dec - 1]);
        b1.add_edge(p1.th[i], sp[rh][i][0]);
    }

    let mut b2 = TreeBuilder::new(universe);
    let sp = side_caterpillars(&mut b2, &pieces);
    let p2 = Paths::new(&mut b2, k);
    let y = central(&mut b2, pi.values().iter().map(|&v| v - 1));
    let mut start = Vec::new();
    start.extend((1..=k).map(Stop::S));
    start.extend((1..=k).map(Stop::Sh));
    start.push(Stop::SStar);
    start.extend((k + 1..=2 * k).rev().map(Stop::Sh));
    start.extend((k + 1..=2 * k).rev().map(Stop::S));
    let mut end = Vec::new();
    end.extend((1..=k).rev().map(Stop::T));
    end.extend((1..=k).rev().map(Stop::Th));
    end.push(Stop::TStar);
    end.extend((k + 1..=2 * k).map(Stop::Th));
    end.extend((k + 1..=2 * k).map(Stop::T));
    p2.link(&mut b2, &start);
    p2.link(&mut b2, &end);
    b2.add_edge(p2.s_star, y[0]);
    b2.add_edge(p2.t_star, y[n - 1]);
    for (i, (l_spine, r_spine)) in sp[l].iter().zip(&sp[r]).enumerate() {
        b2.add_edge(p2.s[i], l_spine[0]);
        b2.add_edge(p2.t[i], r_spine[len_inc - 1]);
    }
    for i in 1..=k {
        b2.add_edge(p2.at(Stop::Sh(k - i + 1)), sp[rh][i - 1][len_dec - 1]);
        b2.add_edge(p2.at(Stop::Sh(2 * k - i + 1)), sp[rh][k + i - 1][len_dec - 1]);
        b2.add_edge(p2.at(Stop::Th(k - i + 1)), sp[lh][i - 1][0]);
        b2.add_edge(p2.at(Stop::Th(2 * k - i + 1)), sp[lh][k + i - 1][0]);
    }

    let vertices_before_contraction = 2 * (4 * k + 1) + 4 * k * (2 * len_inc + 2 * len_dec) + 2 * n;
    Ok(HardnessInstance {
        t1: b1.build()?,
        t2: b2.build()?,
        pieces,
        pi: pi.clone(),
        alpha,
        beta,
        vertices_before_contraction,
    })
}

/// The forest built from a monotone partition: each class, padded with
/// empty classes up to `alpha` increasing and `beta` decreasing ones, takes
/// two leaves from each side caterpillar of its direction.
pub fn pims_solution_to_raf_gadget(inst: &HardnessInstance, m: &MonotonePartition) -> Result<RafPartition> {
    m.validate(&inst.pi)?;
    let (inc, dec) = m.direction_counts();
    if inc > inst.alpha || dec > inst.beta {
        return Err(Error::InvalidParameters(format!(
            "partition has {inc} increasing and {dec} decreasing classes, instance allows {} and {}",
            inst.alpha, inst.beta
        )));
    }
    let universe = inst.t1.n();
    let mut by_dir: [Vec<Vec<usize>>; 2] = [vec![Vec::new(); inst.alpha], vec![Vec::new(); inst.beta]];
    let mut next = [0, 0];
    for c in m.classes.iter().filter(|c| !c.positions.is_empty()) {
        let d = usize::from(c.direction == Direction::Decreasing);
        by_dir[d][next[d]] = c.positions.clone();
        next[d] += 1;
    }
    let p = &inst.pieces;
    let mut components = Vec::with_capacity(inst.k());
    for (d, classes) in by_dir.iter().enumerate() {
        let sides = if d == 0 { [Side::L, Side::R] } else { [Side::Lh, Side::Rh] };
        for (i, positions) in classes.iter().enumerate() {
            let mut comp = TaxonSet::from_ids(universe, positions.iter().map(|&q| p.perm[inst.pi.value(q) - 1]));
            for s in sides {
                for cat in &p.side[s.index()] {
                    comp.insert(cat[2 * i]);
                    comp.insert(cat[2 * i + 1]);
                }
            }
            components.push(comp);
        }
    }
    Ok(RafPartition::new(components, ForestKind::Raf))
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct StructuralReport {
    pub violations: Vec<String>,
}

impl StructuralReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks each component for two necessary properties of forests of a
/// hardness instance: a component with three leaves of one side caterpillar
/// contains nothing else, and no component meets five of the eight class
/// sets.
pub fn check_structural_lemmas(pieces: &GadgetPieces, p: &RafPartition) -> StructuralReport {
    let universe = p.components.first().map_or(0, TaxonSet::universe_size);
    let classes = pieces.class_sets(universe);
    let mut violations = Vec::new();
    for (ci, comp) in p.components.iter().enumerate() {
        for s in Side::ALL {
            for (i, cat) in pieces.side[s.index()].iter().enumerate() {
                let inside = cat.iter().filter(|&&t| comp.contains(t)).count();
                if inside >= 3 && inside < comp.len() {
                    violations.push(format!(
                        "component {ci} has {inside} leaves of {}{} and {} other taxa",
                        s.prefix(),
                        i + 1,
                        comp.len() - inside
                    ));
                }
            }
        }
        let met: Vec<&str> =
            classes.iter().filter(|(_, set)| !set.is_disjoint(comp)).map(|(name, _)| name.as_str()).collect();
        if met.len() >= 5 {
            violations.push(format!("component {ci} meets {} class sets: {}", met.len(), met.join(", ")));
        }
    }
    StructuralReport { violations }
}

impl HardnessInstance {
    pub fn check(&self, p: &RafPartition) -> StructuralReport {
        check_structural_lemmas(&self.pieces, p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phylo::quartet_of;
    use crate::pims::{erdos_szekeres_partition, MonotoneClass};
    use crate::raf::validate_raf;

    fn id(inst: &HardnessInstance, label: &str) -> TaxonId {
        inst.t1.universe().id_of(label).unwrap()
    }

    #[test]
    fn leaf_count_and_shape() {
        let inst = hardness_instance(&Permutation::new(vec![2, 4, 1, 3]).unwrap(), 1, 1).unwrap();
        assert_eq!(inst.t1.n(), 4 + 8 * 4);
        assert_eq!(inst.t1.vertex_count(), 2 * inst.t1.n() - 2);
        assert_eq!(inst.t2.vertex_count(), 2 * inst.t2.n() - 2);
        assert_eq!(inst.vertices_before_contraction, 16 * 4 + 8 * 2 + 2 + 2 * 4);
        assert!(inst.pieces.side[0].iter().all(|c| c.len() == 2));
    }

    #[test]
    fn side_caterpillar_sizes() {
        let pi = Permutation::identity(9);
        let inst = hardness_instance(&pi, 2, 1).unwrap();
        assert!(inst.pieces.side[Side::L.index()].iter().all(|c| c.len() == 4));
        assert!(inst.pieces.side[Side::Lh.index()].iter().all(|c| c.len() == 2));
        assert_eq!(inst.t1.n(), 9 + 8 * 9);
    }

    #[test]
    fn left_caterpillars_are_reversed() {
        let inst = hardness_instance(&Permutation::identity(9), 2, 1).unwrap();
        let q = [id(&inst, "L1_1"), id(&inst, "L1_2"), id(&inst, "L1_3"), id(&inst, "v1")];
        let (a, b) = (quartet_of(&inst.t1, q).unwrap(), quartet_of(&inst.t2, q).unwrap());
        assert_ne!(a, b);
    }

    #[test]
    fn parameter_checks() {
        let pi = Permutation::identity(4);
        assert!(hardness_instance(&pi, 0, 2).is_err());
        assert!(hardness_instance(&pi, 3, 3).is_err());
    }

    #[test]
    fn forward_map_validates() {
        for v in [vec![1, 2, 3, 4], vec![2, 1], vec![3, 1, 4, 2]] {
            let pi = Permutation::new(v).unwrap();
            let inst = hardness_instance(&pi, 1, 1).unwrap();
            let m = match pi.len() {
                4 if pi.value(0) == 3 => MonotonePartition {
                    classes: vec![
                        MonotoneClass { direction: Direction::Increasing, positions: vec![1, 2] },
                        MonotoneClass { direction: Direction::Decreasing, positions: vec![0, 3] },
                    ],
                },
                _ => erdos_szekeres_partition(&pi),
            };
            let p = pims_solution_to_raf_gadget(&inst, &m).unwrap();
            assert_eq!(p.size(), 2);
            assert!(validate_raf(&inst.t1, &inst.t2, &p).unwrap(), "{pi:?}");
            assert!(inst.check(&p).is_clean());
            for c in &p.components {
                let side = c.iter().filter(|&t| t >= pi.len()).count();
                assert_eq!(side, 8 * inst.k());
            }
        }
    }

    #[test]
    fn lemma_violation_is_reported() {
        let inst = hardness_instance(&Permutation::identity(9), 2, 1).unwrap();
        let n = inst.t1.n();
        let l1 = &inst.pieces.side[0][0];
        let bad = TaxonSet::from_ids(n, [l1[0], l1[1], l1[2], 0]);
        let rest = TaxonSet::full(n).difference(&bad);
        let report = inst.check(&RafPartition::new(vec![bad, rest], ForestKind::Raf));
        assert!(report.violations.iter().any(|v| v.contains("3 leaves of L1")));
    }

    #[test]
    fn labels_round_trip() {
        let inst = hardness_instance(&Permutation::new(vec![3, 1, 2, 5, 4]).unwrap(), 1, 1).unwrap();
        assert_eq!(GadgetPieces::from_labels(inst.t1.universe()), Some(inst.pieces.clone()));
        assert_eq!(inst.pieces.alpha_beta(), (1, 1));
        assert!(GadgetPieces::from_labels(&Universe::numbered(5)).is_none());
    }
}

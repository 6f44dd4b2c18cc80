//! Translating between monotone partitions of a permutation and relaxed
//! agreement forests of the identity/permutation caterpillar pair.

use crate::error::{Error, Result};
use crate::phylo::{identity_caterpillar, permutation_caterpillar};
use crate::pims::permutation::{Direction, MonotoneClass, MonotonePartition, Permutation};
use crate::pims::solve::greedy_monotone_cover;
use crate::raf::{validate_raf, ForestKind, RafPartition};
use crate::taxa::TaxonSet;

/// Each class becomes the component of the taxa labelled by its values.
pub fn pims_to_mraf(pi: &Permutation, m: &MonotonePartition) -> Result<RafPartition> {
    m.validate(pi)?;
    let n = pi.len();
    let components = m
        .classes
        .iter()
        .filter(|c| !c.positions.is_empty())
        .map(|c| TaxonSet::from_ids(n, c.positions.iter().map(|&p| pi.value(p) - 1)))
        .collect();
    Ok(RafPartition::new(components, ForestKind::Raf))
}

fn direction_of(seq: &[usize]) -> Option<Direction> {
    if seq.windows(2).all(|w| w[0] < w[1]) {
        Some(Direction::Increasing)
    } else if seq.windows(2).all(|w| w[0] > w[1]) {
        Some(Direction::Decreasing)
    } else {
        None
    }
}

/// Turns a RAF of the caterpillar pair into a monotone partition with at
/// most `k + ⌈2√(2k)⌉` classes. Each component, read in value order, is
/// monotone in position once at most one leaf is cut from each end; the cut
/// leaves are regrouped greedily.
pub fn raf_to_pims(pi: &Permutation, p: &RafPartition) -> Result<MonotonePartition> {
    let n = pi.len();
    p.check_partition(n)?;
    if n >= 4 && !validate_raf(&identity_caterpillar(n)?, &permutation_caterpillar(pi)?, p)? {
        return Err(Error::InvalidRaf);
    }
    let inv = pi.inverse();
    let mut classes = Vec::with_capacity(p.size());
    let mut trimmed = Vec::new();
    for comp in &p.components {
        let seq: Vec<usize> = comp.iter().map(|t| inv[t]).collect();
        let m = seq.len();
        let cuts = [(0, m), (1, m), (0, m - 1), (1, m - 1)];
        let (lo, hi, dir) = cuts
            .iter()
            .find_map(|&(lo, hi)| direction_of(&seq[lo..hi.max(lo)]).map(|d| (lo, hi.max(lo), d)))
            .ok_or(Error::InvalidRaf)?;
        trimmed.extend(&seq[..lo]);
        trimmed.extend(&seq[hi..]);
        let mut positions = seq[lo..hi].to_vec();
        positions.sort_unstable();
        if !positions.is_empty() {
            classes.push(MonotoneClass { direction: dir, positions });
        }
    }
    trimmed.sort_unstable();
    classes.extend(greedy_monotone_cover(pi, trimmed).classes);
    let out = MonotonePartition { classes };
    out.validate(pi)?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pims::solve::erdos_szekeres_partition;

    #[test]
    fn identity_round_trip() {
        let pi = Permutation::identity(7);
        let m = erdos_szekeres_partition(&pi);
        let p = pims_to_mraf(&pi, &m).unwrap();
        assert_eq!(p.size(), 1);
        assert_eq!(raf_to_pims(&pi, &p).unwrap().size(), 1);
    }

    #[test]
    fn greedy_classes_give_valid_forests() {
        let pi = Permutation::new(vec![4, 8, 1, 6, 3, 9, 2, 7, 5]).unwrap();
        let p = pims_to_mraf(&pi, &erdos_szekeres_partition(&pi)).unwrap();
        let t1 = identity_caterpillar(9).unwrap();
        let t2 = permutation_caterpillar(&pi).unwrap();
        assert!(validate_raf(&t1, &t2, &p).unwrap());
    }

    #[test]
    fn end_cherries_are_trimmed() {
        // {1,2,3,4} agrees since 2,1 at the start is a cherry swap, but the
        // positions in value order (1,0,2,3) are not monotone.
        let pi = Permutation::new(vec![2, 1, 3, 4, 6, 5]).unwrap();
        let n = 6;
        let p = RafPartition::new(
            vec![TaxonSet::from_ids(n, [0, 1, 2, 3]), TaxonSet::from_ids(n, [4, 5])],
            ForestKind::Raf,
        );
        let m = raf_to_pims(&pi, &p).unwrap();
        assert!(m.size() <= 2 + 4);
        m.validate(&pi).unwrap();
    }

    #[test]
    fn invalid_forest_rejected() {
        let pi = Permutation::new(vec![2, 4, 1, 3, 5]).unwrap();
        let p = RafPartition::new(vec![TaxonSet::full(5)], ForestKind::Raf);
        assert_eq!(raf_to_pims(&pi, &p).unwrap_err(), Error::InvalidRaf);
    }
}

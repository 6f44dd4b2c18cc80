use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A permutation of `1..=n`; `values()[i]` is the image of position `i`
/// (positions are zero-based, values one-based).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    values: Vec<usize>,
}

impl Permutation {
    pub fn new(values: Vec<usize>) -> Result<Self> {
        let n = values.len();
        let mut seen = vec![false; n + 1];
        for &v in &values {
            if v == 0 || v > n {
                return Err(Error::InvalidPermutation(format!("value {v} outside 1..={n}")));
            }
            if std::mem::replace(&mut seen[v], true) {
                return Err(Error::InvalidPermutation(format!("value {v} repeated")));
            }
        }
        Ok(Permutation { values })
    }

    pub fn identity(n: usize) -> Self {
        Permutation { values: (1..=n).collect() }
    }

    pub fn reverse(n: usize) -> Self {
        Permutation { values: (1..=n).rev().collect() }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    pub fn value(&self, pos: usize) -> usize {
        self.values[pos]
    }

    /// `inverse()[v - 1]` is the position holding value `v`.
    pub fn inverse(&self) -> Vec<usize> {
        let mut inv = vec![0; self.len()];
        for (p, &v) in self.values.iter().enumerate() {
            inv[v - 1] = p;
        }
        inv
    }

    /// All permutations of `1..=n` in lexicographic order.
    pub fn all(n: usize) -> Vec<Permutation> {
        let mut out = Vec::new();
        let mut cur = Permutation::identity(n).values;
        loop {
            out.push(Permutation { values: cur.clone() });
            let Some(i) = (1..n).rev().find(|&i| cur[i - 1] < cur[i]) else { break };
            let j = (i..n).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
            cur.swap(i - 1, j);
            cur[i..].reverse();
        }
        out
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation{:?}", self.values)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.values.iter().map(|v| v.to_string()).collect();
        f.write_str(&parts.join(" "))
    }
}

/// Whitespace-separated one-based integers.
impl FromStr for Permutation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let values = s
            .split_whitespace()
            .map(|tok| tok.parse::<usize>().map_err(|_| Error::InvalidPermutation(format!("not an integer: {tok:?}"))))
            .collect::<Result<Vec<_>>>()?;
        if values.is_empty() {
            return Err(Error::InvalidPermutation("empty".into()));
        }
        Permutation::new(values)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Increasing,
    Decreasing,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonotoneClass {
    pub direction: Direction,
    /// Zero-based positions in increasing order.
    pub positions: Vec<usize>,
}

/// A partition of the positions of a permutation into monotone classes.
/// Empty classes are allowed (they arise when padding to a fixed count).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonotonePartition {
    pub classes: Vec<MonotoneClass>,
}

impl MonotonePartition {
    /// Number of nonempty classes.
    pub fn size(&self) -> usize {
        self.classes.iter().filter(|c| !c.positions.is_empty()).count()
    }

    /// `(increasing, decreasing)` counts over nonempty classes.
    pub fn direction_counts(&self) -> (usize, usize) {
        let inc = self
            .classes
            .iter()
            .filter(|c| !c.positions.is_empty() && c.direction == Direction::Increasing)
            .count();
        (inc, self.size() - inc)
    }

    /// Checks that the classes partition the positions of `pi` and that each
    /// class is strictly monotone in its stated direction.
    pub fn validate(&self, pi: &Permutation) -> Result<()> {
        let n = pi.len();
        let mut seen = vec![false; n];
        for (ci, class) in self.classes.iter().enumerate() {
            for w in class.positions.windows(2) {
                if w[0] >= w[1] {
                    return Err(Error::InvalidMonotonePartition(format!("class {ci} positions not increasing")));
                }
                let (a, b) = (pi.value(w[0]), pi.value(w[1]));
                let ok = match class.direction {
                    Direction::Increasing => a < b,
                    Direction::Decreasing => a > b,
                };
                if !ok {
                    return Err(Error::InvalidMonotonePartition(format!(
                        "class {ci} is not {:?} at positions {} and {}",
                        class.direction, w[0], w[1]
                    )));
                }
            }
            for &p in &class.positions {
                if p >= n {
                    return Err(Error::InvalidMonotonePartition(format!("position {p} out of range")));
                }
                if std::mem::replace(&mut seen[p], true) {
                    return Err(Error::InvalidMonotonePartition(format!("position {p} in two classes")));
                }
            }
        }
        if let Some(p) = seen.iter().position(|&s| !s) {
            return Err(Error::InvalidMonotonePartition(format!("position {p} not covered")));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_validate() {
        let p: Permutation = "2 4 1 3 5".parse().unwrap();
        assert_eq!(p.values(), &[2, 4, 1, 3, 5]);
        assert_eq!(p.inverse(), vec![2, 0, 3, 1, 4]);
        assert_eq!(p.to_string(), "2 4 1 3 5");
        assert!("1 2 2".parse::<Permutation>().is_err());
        assert!("0 1".parse::<Permutation>().is_err());
        assert!("".parse::<Permutation>().is_err());
        assert!("1 x".parse::<Permutation>().is_err());
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(Permutation::all(1).len(), 1);
        assert_eq!(Permutation::all(4).len(), 24);
        let five = Permutation::all(5);
        assert_eq!(five.len(), 120);
        assert_eq!(five.last().unwrap(), &Permutation::reverse(5));
    }

    #[test]
    fn monotone_checker() {
        let p = Permutation::new(vec![2, 4, 1, 3, 5]).unwrap();
        let good = MonotonePartition {
            classes: vec![
                MonotoneClass { direction: Direction::Increasing, positions: vec![0, 1, 4] },
                MonotoneClass { direction: Direction::Increasing, positions: vec![2, 3] },
            ],
        };
        good.validate(&p).unwrap();
        assert_eq!(good.direction_counts(), (2, 0));
        let mut bad = good.clone();
        bad.classes[1].direction = Direction::Decreasing;
        assert!(bad.validate(&p).is_err());
        let mut missing = good.clone();
        missing.classes[1].positions.pop();
        assert!(missing.validate(&p).is_err());
    }
}

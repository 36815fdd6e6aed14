use std::fmt;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Order-preserving injection `[m] -> [n]`, stored 0-based.
///
/// It encodes the coordinate-selection map `R^(n) -> R^(m)` keeping
/// coordinates `values[0] < values[1] < ...`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct OIInjection {
    codomain: usize,
    values: Vec<usize>,
}

impl OIInjection {
    pub fn new(codomain: usize, values: Vec<usize>) -> Result<Self> {
        if values.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidInjection(format!(
                "values {values:?} are not strictly increasing"
            )));
        }
        if values.last().is_some_and(|&v| v >= codomain) {
            return Err(Error::InvalidInjection(format!(
                "values {values:?} exceed codomain {codomain}"
            )));
        }
        Ok(OIInjection { codomain, values })
    }

    /// Builds from 1-based values.
    pub fn from_one_based(codomain: usize, values: &[usize]) -> Result<Self> {
        if values.contains(&0) {
            return Err(Error::InvalidInjection("1-based values must be positive".into()));
        }
        Self::new(codomain, values.iter().map(|v| v - 1).collect())
    }

    pub(crate) fn new_unchecked(codomain: usize, values: Vec<usize>) -> Self {
        debug_assert!(Self::new(codomain, values.clone()).is_ok());
        OIInjection { codomain, values }
    }

    pub fn identity(n: usize) -> Self {
        OIInjection { codomain: n, values: (0..n).collect() }
    }

    /// The injection whose selection map is `p_{n,i}`: omit coordinate `i` (1-based).
    pub fn omission(n: usize, i: usize) -> Result<Self> {
        if i == 0 || i > n {
            return Err(Error::InvalidInjection(format!("p_{{{n},{i}}} is undefined")));
        }
        Ok(OIInjection { codomain: n, values: (0..n).filter(|&k| k != i - 1).collect() })
    }

    pub fn domain(&self) -> usize {
        self.values.len()
    }

    pub fn codomain(&self) -> usize {
        self.codomain
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    pub fn apply(&self, k: usize) -> usize {
        self.values[k]
    }

    /// Coordinates of `[n]` outside the image, ascending.
    pub fn omitted(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.codomain - self.domain());
        let mut it = self.values.iter().peekable();
        for k in 0..self.codomain {
            if it.peek() == Some(&&k) {
                it.next();
            } else {
                out.push(k);
            }
        }
        out
    }

    /// `outer ∘ self` where `self: [m] -> [n]` and `outer: [n] -> [p]`.
    pub fn then(&self, outer: &OIInjection) -> Result<OIInjection> {
        if self.codomain != outer.domain() {
            return Err(Error::InvalidInjection(format!(
                "cannot compose [{}]->[{}] with [{}]->[{}]",
                self.domain(),
                self.codomain,
                outer.domain(),
                outer.codomain
            )));
        }
        Ok(OIInjection {
            codomain: outer.codomain,
            values: self.values.iter().map(|&v| outer.values[v]).collect(),
        })
    }

    pub fn is_identity(&self) -> bool {
        self.domain() == self.codomain
    }
}

impl fmt::Display for OIInjection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "<{}>:[{}]->[{}]",
            self.values.iter().map(|v| v + 1).join(","),
            self.domain(),
            self.codomain
        )
    }
}

/// All order-preserving injections `[m] -> [n]`, lexicographic in their values.
pub fn enumerate_injections(m: usize, n: usize) -> Vec<OIInjection> {
    if m > n {
        return Vec::new();
    }
    (0..n)
        .combinations(m)
        .map(|values| OIInjection { codomain: n, values })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn binomial(n: usize, k: usize) -> usize {
        if k > n {
            return 0;
        }
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn counts_are_binomial() {
        for n in 0..=7 {
            for m in 0..=n + 1 {
                assert_eq!(enumerate_injections(m, n).len(), binomial(n, m));
            }
        }
    }

    #[test]
    fn example_lists() {
        let one_two: Vec<_> = enumerate_injections(1, 2).iter().map(|j| j.values().to_vec()).collect();
        assert_eq!(one_two, vec![vec![0], vec![1]]);
        let two_three: Vec<_> = enumerate_injections(2, 3).iter().map(|j| j.values().to_vec()).collect();
        assert_eq!(two_three, vec![vec![0, 1], vec![0, 2], vec![1, 2]]);
        assert_eq!(enumerate_injections(0, 0).len(), 1);
        assert!(enumerate_injections(3, 2).is_empty());
    }

    #[test]
    fn rejects_bad_values() {
        assert!(OIInjection::new(3, vec![1, 1]).is_err());
        assert!(OIInjection::new(3, vec![2, 3]).is_err());
        assert!(OIInjection::omission(2, 3).is_err());
    }

    #[test]
    fn omission_and_composition() {
        let p = OIInjection::omission(3, 2).unwrap();
        assert_eq!(p.values(), &[0, 2]);
        assert_eq!(p.omitted(), vec![1]);
        let q = OIInjection::omission(2, 1).unwrap();
        let c = q.then(&p).unwrap();
        assert_eq!(c.values(), &[2]);
    }
}

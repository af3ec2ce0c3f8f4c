use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Index `(s_1, ..., s_l)` of a bracket. The empty composition stands for the
/// constant `1`.
///
/// Ordering is canonical: by weight, then length, then lexicographic on parts.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Composition(Vec<u32>);

impl Composition {
    pub fn new(parts: Vec<u32>) -> Result<Self> {
        if let Some(i) = parts.iter().position(|&p| p == 0) {
            return Err(Error::InvalidComposition(format!(
                "part {} of {:?} is zero",
                i + 1,
                parts
            )));
        }
        Ok(Composition(parts))
    }

    pub(crate) fn from_parts_unchecked(parts: Vec<u32>) -> Self {
        debug_assert!(parts.iter().all(|&p| p > 0));
        Composition(parts)
    }

    pub fn empty() -> Self {
        Composition(Vec::new())
    }

    /// `{1}^l`, i.e. `l` parts equal to one.
    pub fn ones(l: usize) -> Self {
        Composition(vec![1; l])
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn into_parts(self) -> Vec<u32> {
        self.0
    }

    pub fn weight(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn length(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// First part exceeds one. The empty composition counts as admissible.
    pub fn is_admissible(&self) -> bool {
        self.0.first().map_or(true, |&s| s > 1)
    }

    pub fn all_even(&self) -> bool {
        self.0.iter().all(|&s| s % 2 == 0)
    }

    pub fn all_above_one(&self) -> bool {
        self.0.iter().all(|&s| s > 1)
    }

    /// Number of leading parts equal to one.
    pub fn leading_ones(&self) -> usize {
        self.0.iter().take_while(|&&s| s == 1).count()
    }

    pub fn first(&self) -> Option<u32> {
        self.0.first().copied()
    }

    /// Everything after the first part.
    pub fn tail(&self) -> Composition {
        Composition(self.0.get(1..).map(<[u32]>::to_vec).unwrap_or_default())
    }

    pub fn prepend(&self, a: u32) -> Composition {
        let mut parts = Vec::with_capacity(self.0.len() + 1);
        parts.push(a);
        parts.extend_from_slice(&self.0);
        Composition(parts)
    }

    pub fn concat(&self, other: &Composition) -> Composition {
        let mut parts = self.0.clone();
        parts.extend_from_slice(&other.0);
        Composition(parts)
    }

    /// `(s_1 - 1)! ... (s_l - 1)!`
    pub fn factorial_denominator(&self) -> num_bigint::BigInt {
        self.0
            .iter()
            .map(|&s| crate::exactnum::factorial(s as usize - 1))
            .product()
    }

    /// Comma separated parts, e.g. `4,2`.
    pub fn to_arg(&self) -> String {
        self.0
            .iter()
            .map(u32::to_string)
            .collect::<Vec<_>>()
            .join(",")
    }
}

impl Ord for Composition {
    fn cmp(&self, other: &Self) -> Ordering {
        self.weight()
            .cmp(&other.weight())
            .then(self.length().cmp(&other.length()))
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Composition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Composition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "[]");
        }
        write!(f, "[")?;
        for (i, s) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{s}")?;
        }
        write!(f, "]")
    }
}

impl FromStr for Composition {
    type Err = Error;

    /// Parses `4,2` (optionally wrapped in brackets). An empty string or `[]`
    /// gives the empty composition.
    fn from_str(s: &str) -> Result<Self> {
        let inner = s.trim().trim_start_matches('[').trim_end_matches(']').trim();
        if inner.is_empty() {
            return Ok(Composition::empty());
        }
        let parts = inner
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::InvalidComposition(format!("cannot parse part {p:?} in {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Composition::new(parts)
    }
}

impl TryFrom<Vec<u32>> for Composition {
    type Error = Error;
    fn try_from(parts: Vec<u32>) -> Result<Self> {
        Composition::new(parts)
    }
}

impl TryFrom<&[u32]> for Composition {
    type Error = Error;
    fn try_from(parts: &[u32]) -> Result<Self> {
        Composition::new(parts.to_vec())
    }
}

/// Builds a composition from literal parts; panics on a zero part.
#[macro_export]
macro_rules! comp {
    () => { $crate::Composition::empty() };
    ($($s:expr),+ $(,)?) => {
        $crate::Composition::new(vec![$($s),+]).expect("positive parts")
    };
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display() {
        let c: Composition = "4,2".parse().unwrap();
        assert_eq!(c.parts(), &[4, 2]);
        assert_eq!(c.to_string(), "[4,2]");
        assert_eq!(c.to_arg(), "4,2");
        assert_eq!("[3, 1]".parse::<Composition>().unwrap(), comp![3, 1]);
        assert!("".parse::<Composition>().unwrap().is_empty());
        assert!("0".parse::<Composition>().is_err());
        assert!("2,x".parse::<Composition>().is_err());
    }

    #[test]
    fn canonical_order() {
        let mut v = vec![comp![1, 3], comp![4], comp![2], comp![2, 2], comp![3, 1], comp![2, 1, 1]];
        v.sort();
        assert_eq!(
            v,
            vec![comp![2], comp![4], comp![1, 3], comp![2, 2], comp![3, 1], comp![2, 1, 1]]
        );
        assert!(Composition::empty() < comp![1]);
    }

    #[test]
    fn flags() {
        let c = comp![2, 1];
        assert!(c.is_admissible());
        assert!(!c.all_above_one());
        assert!(!comp![1, 2].is_admissible());
        assert!(comp![2, 4].all_even());
        assert_eq!(comp![1, 1, 3].leading_ones(), 2);
        assert_eq!(comp![3, 1, 3, 1].weight(), 8);
    }
}

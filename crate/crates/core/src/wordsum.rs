use std::collections::btree_map::{self, BTreeMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::composition::Composition;
use crate::error::{Error, Result};
use crate::exactnum::{format_rational, parse_rational, Rational};

/// Finite rational linear combination of compositions, kept in canonical
/// order with no zero coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Default, Hash)]
pub struct WordSum {
    terms: BTreeMap<Composition, Rational>,
}

impl WordSum {
    pub fn zero() -> Self {
        Self::default()
    }

    /// The empty word, i.e. the constant `1`.
    pub fn one() -> Self {
        Self::word(Composition::empty())
    }

    pub fn word(c: Composition) -> Self {
        Self::term(Rational::one(), c)
    }

    pub fn term(coeff: Rational, c: Composition) -> Self {
        let mut w = Self::zero();
        w.add_term(c, coeff);
        w
    }

    pub fn from_terms<I: IntoIterator<Item = (Composition, Rational)>>(terms: I) -> Self {
        let mut w = Self::zero();
        for (c, r) in terms {
            w.add_term(c, r);
        }
        w
    }

    pub fn add_term(&mut self, c: Composition, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(c) {
            btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
            btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += coeff;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// `self += c * other`
    pub fn add_scaled(&mut self, c: &Rational, other: &WordSum) {
        if c.is_zero() {
            return;
        }
        for (w, r) in &other.terms {
            self.add_term(w.clone(), c * r);
        }
    }

    pub fn scale(&self, c: &Rational) -> WordSum {
        let mut out = WordSum::zero();
        out.add_scaled(c, self);
        out
    }

    pub fn coeff(&self, c: &Composition) -> Rational {
        self.terms.get(c).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn iter(&self) -> impl DoubleEndedIterator<Item = (&Composition, &Rational)> + ExactSizeIterator {
        self.terms.iter()
    }

    pub fn compositions(&self) -> impl Iterator<Item = &Composition> {
        self.terms.keys()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Maximal weight of a term (0 for the zero sum).
    pub fn weight(&self) -> u32 {
        self.terms.keys().map(Composition::weight).max().unwrap_or(0)
    }

    /// Maximal length of a term.
    pub fn max_length(&self) -> usize {
        self.terms.keys().map(Composition::length).max().unwrap_or(0)
    }

    /// Largest term under the canonical order with its coefficient.
    pub fn leading_term(&self) -> Option<(&Composition, &Rational)> {
        self.terms.iter().next_back()
    }

    /// Divides by the coefficient of the leading term so that it becomes 1.
    pub fn normalized(&self) -> WordSum {
        match self.leading_term() {
            Some((_, c)) => self.scale(&(Rational::one() / c)),
            None => WordSum::zero(),
        }
    }

    /// Keeps the terms accepted by `keep`.
    pub fn filter(&self, mut keep: impl FnMut(&Composition) -> bool) -> WordSum {
        WordSum {
            terms: self
                .terms
                .iter()
                .filter(|(c, _)| keep(c))
                .map(|(c, r)| (c.clone(), r.clone()))
                .collect(),
        }
    }

    /// `a w` for every word `w`.
    pub fn prepend(&self, a: u32) -> WordSum {
        WordSum {
            terms: self
                .terms
                .iter()
                .map(|(c, r)| (c.prepend(a), r.clone()))
                .collect(),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("word sums serialize")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        serde_json::from_value(v.clone()).map_err(|e| Error::Parse(e.to_string()))
    }

    /// Parses text such as `2[2,2] - 2[3,1] + [3] - 1/3[2]`.
    pub fn parse(s: &str) -> Result<WordSum> {
        let mut out = WordSum::zero();
        let mut rest = s.trim();
        if rest == "0" {
            return Ok(out);
        }
        let mut sign = Rational::one();
        while !rest.is_empty() {
            if let Some(r) = rest.strip_prefix('+') {
                rest = r.trim_start();
                continue;
            }
            if let Some(r) = rest.strip_prefix('-') {
                sign = -sign;
                rest = r.trim_start();
                continue;
            }
            let open = rest
                .find('[')
                .ok_or_else(|| Error::Parse(format!("expected a bracket in {rest:?}")))?;
            let close = rest[open..]
                .find(']')
                .map(|i| i + open)
                .ok_or_else(|| Error::Parse(format!("unclosed bracket in {rest:?}")))?;
            let coeff_text = rest[..open].trim().trim_end_matches('*').trim();
            let coeff = if coeff_text.is_empty() {
                Rational::one()
            } else {
                parse_rational(coeff_text)?
            };
            let comp: Composition = rest[open..=close].parse()?;
            out.add_term(comp, sign * coeff);
            sign = Rational::one();
            rest = rest[close + 1..].trim_start();
        }
        Ok(out)
    }
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    parts: Vec<u32>,
    coeff: String,
}

#[derive(Serialize, Deserialize)]
struct WordSumJson {
    terms: Vec<TermJson>,
}

impl Serialize for WordSum {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        WordSumJson {
            terms: self
                .terms
                .iter()
                .map(|(c, r)| TermJson {
                    parts: c.parts().to_vec(),
                    coeff: format_rational(r),
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for WordSum {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = WordSumJson::deserialize(d)?;
        let mut out = WordSum::zero();
        for t in raw.terms {
            let c = Composition::new(t.parts).map_err(D::Error::custom)?;
            let r = parse_rational(&t.coeff).map_err(D::Error::custom)?;
            out.add_term(c, r);
        }
        Ok(out)
    }
}

impl fmt::Display for WordSum {
    /// Terms from the largest down, e.g. `[4] - 2[2,2] + 1/3[2]`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (c, r)) in self.terms.iter().rev().enumerate() {
            let neg = r.is_negative();
            let abs = r.abs();
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if !abs.is_one() {
                write!(f, "{abs}")?;
            }
            if c.is_empty() && abs.is_one() {
                write!(f, "1")?;
            } else if !c.is_empty() {
                write!(f, "{c}")?;
            }
        }
        Ok(())
    }
}

impl Add for &WordSum {
    type Output = WordSum;
    fn add(self, rhs: &WordSum) -> WordSum {
        let mut out = self.clone();
        out.add_scaled(&Rational::one(), rhs);
        out
    }
}

impl Sub for &WordSum {
    type Output = WordSum;
    fn sub(self, rhs: &WordSum) -> WordSum {
        let mut out = self.clone();
        out.add_scaled(&-Rational::one(), rhs);
        out
    }
}

impl Neg for &WordSum {
    type Output = WordSum;
    fn neg(self) -> WordSum {
        self.scale(&-Rational::one())
    }
}

impl Mul<&WordSum> for &Rational {
    type Output = WordSum;
    fn mul(self, rhs: &WordSum) -> WordSum {
        rhs.scale(self)
    }
}

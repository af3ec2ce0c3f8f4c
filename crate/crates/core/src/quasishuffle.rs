//! Words over the letters `z_1, z_2, ...` with the quasi-shuffle product
//! built from the bracket diamond `z_a <> z_b`, its evaluation in `q`-series
//! and the decomposition of `MD` as polynomials in `[1]` over `MDA`.

use std::collections::HashMap;
use std::fmt;
use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::brackets::{bracket_series, bracket_series_batch};
use crate::composition::Composition;
use crate::error::{Error, Result};
use crate::exactnum::{lambda_coeff, Rational};
use crate::qseries::QSeries;
use crate::wordsum::WordSum;

/// Product of two letters, returned as a combination of single letters.
pub trait Diamond: Sync {
    fn diamond(&self, a: u32, b: u32) -> WordSum;
}

/// `z_a <> z_b = z_{a+b} + sum_{j<=a} lambda^j_{a,b} z_j + sum_{j<=b} lambda^j_{b,a} z_j`
#[derive(Debug, Clone, Copy, Default)]
pub struct BracketDiamond;

impl Diamond for BracketDiamond {
    fn diamond(&self, a: u32, b: u32) -> WordSum {
        let mut out = WordSum::word(Composition::from_parts_unchecked(vec![a + b]));
        for j in 1..=a {
            let c = lambda_coeff(a, b, j).expect("index in range");
            out.add_term(Composition::from_parts_unchecked(vec![j]), c);
        }
        for j in 1..=b {
            let c = lambda_coeff(b, a, j).expect("index in range");
            out.add_term(Composition::from_parts_unchecked(vec![j]), c);
        }
        out
    }
}

pub fn diamond(a: u32, b: u32) -> WordSum {
    BracketDiamond.diamond(a, b)
}

type Memo = RwLock<HashMap<(Composition, Composition), WordSum>>;

fn memo() -> &'static Memo {
    static MEMO: OnceLock<Memo> = OnceLock::new();
    MEMO.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Quasi-shuffle of two words, memoized on the (unordered) pair.
pub fn quasi_shuffle_words(w: &Composition, v: &Composition) -> WordSum {
    if w.is_empty() {
        return WordSum::word(v.clone());
    }
    if v.is_empty() {
        return WordSum::word(w.clone());
    }
    let key = if w <= v {
        (w.clone(), v.clone())
    } else {
        (v.clone(), w.clone())
    };
    if let Some(hit) = memo().read().unwrap().get(&key) {
        return hit.clone();
    }
    let result = quasi_shuffle_with(&BracketDiamond, &key.0, &key.1, &mut |x, y| {
        quasi_shuffle_words(x, y)
    });
    memo().write().unwrap().insert(key, result.clone());
    result
}

/// One step of `a w * b v = a(w * bv) + b(aw * v) + (a <> b)(w * v)` with the
/// shorter products supplied by `inner`.
pub fn quasi_shuffle_with<D: Diamond>(
    d: &D,
    w: &Composition,
    v: &Composition,
    inner: &mut dyn FnMut(&Composition, &Composition) -> WordSum,
) -> WordSum {
    if w.is_empty() {
        return WordSum::word(v.clone());
    }
    if v.is_empty() {
        return WordSum::word(w.clone());
    }
    let a = w.first().unwrap();
    let b = v.first().unwrap();
    let (wt, vt) = (w.tail(), v.tail());
    let mut out = inner(&wt, v).prepend(a);
    out.add_scaled(&Rational::one(), &inner(w, &vt).prepend(b));
    let both = inner(&wt, &vt);
    for (letter, c) in d.diamond(a, b).iter() {
        out.add_scaled(c, &both.prepend(letter.parts()[0]));
    }
    out
}

/// Bilinear extension of the quasi-shuffle to word sums.
pub fn quasi_shuffle(w: &WordSum, v: &WordSum) -> WordSum {
    let mut out = WordSum::zero();
    for (x, cx) in w.iter() {
        for (y, cy) in v.iter() {
            out.add_scaled(&(cx * cy), &quasi_shuffle_words(x, y));
        }
    }
    out
}

/// `sum c_w [w]` through `q^order`; the empty word is `1`.
pub fn evaluate(w: &WordSum, order: usize) -> QSeries {
    let comps: Vec<Composition> = w.compositions().cloned().collect();
    let series = bracket_series_batch(&comps, order);
    let mut out = QSeries::zero(order);
    for ((_, c), s) in w.iter().zip(series.iter()) {
        out.add_scaled(c, s);
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Subalgebra {
    /// Admissible brackets: first part above one.
    Mda,
    /// All parts even.
    Mde,
    /// All parts above one.
    MdSharp,
}

impl std::str::FromStr for Subalgebra {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "mda" => Ok(Subalgebra::Mda),
            "mde" => Ok(Subalgebra::Mde),
            "mdsharp" | "md#" | "mds" => Ok(Subalgebra::MdSharp),
            _ => Err(Error::Parse(format!("unknown subalgebra {s:?}"))),
        }
    }
}

pub fn subalgebra_membership(w: &WordSum, which: Subalgebra) -> bool {
    w.compositions().all(|c| match which {
        Subalgebra::Mda => c.is_admissible(),
        Subalgebra::Mde => c.all_even(),
        Subalgebra::MdSharp => c.all_above_one(),
    })
}

/// Polynomial in `T = [1]` whose coefficients are admissible word sums.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct OnePolynomial {
    powers: Vec<WordSum>,
}

impl OnePolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(w: WordSum) -> Self {
        let mut p = Self::zero();
        p.add_at(0, &Rational::one(), &w);
        p
    }

    pub fn from_powers(powers: Vec<WordSum>) -> Self {
        let mut p = OnePolynomial { powers };
        p.trim();
        p
    }

    fn trim(&mut self) {
        while self.powers.last().is_some_and(WordSum::is_zero) {
            self.powers.pop();
        }
    }

    /// Coefficient of `T^j`.
    pub fn coefficient(&self, j: usize) -> WordSum {
        self.powers.get(j).cloned().unwrap_or_default()
    }

    pub fn powers(&self) -> &[WordSum] {
        &self.powers
    }

    pub fn degree(&self) -> Option<usize> {
        self.powers.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.powers.is_empty()
    }

    fn add_at(&mut self, j: usize, c: &Rational, w: &WordSum) {
        if self.powers.len() <= j {
            self.powers.resize(j + 1, WordSum::zero());
        }
        self.powers[j].add_scaled(c, w);
        self.trim();
    }

    pub fn add_scaled(&mut self, c: &Rational, other: &OnePolynomial) {
        for (j, w) in other.powers.iter().enumerate() {
            self.add_at(j, c, w);
        }
    }

    /// Multiplication by `T`.
    pub fn shift(&self) -> OnePolynomial {
        if self.is_zero() {
            return self.clone();
        }
        let mut powers = Vec::with_capacity(self.powers.len() + 1);
        powers.push(WordSum::zero());
        powers.extend(self.powers.iter().cloned());
        OnePolynomial { powers }
    }

    /// Substitutes the series of `[1]` for `T`.
    pub fn evaluate(&self, order: usize) -> QSeries {
        let t = bracket_series(&Composition::ones(1), order);
        let mut out = QSeries::zero(order);
        let mut tp = QSeries::one(order);
        for (j, w) in self.powers.iter().enumerate() {
            if j > 0 {
                tp = tp.mul(&t);
            }
            if !w.is_zero() {
                out.add_scaled(&Rational::one(), &evaluate(w, order).mul(&tp));
            }
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("polynomials serialize")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        serde_json::from_value(v.clone()).map_err(|e| Error::Parse(e.to_string()))
    }
}

#[derive(Serialize, Deserialize)]
struct OnePolynomialJson {
    powers: Vec<WordSum>,
}

impl Serialize for OnePolynomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        OnePolynomialJson {
            powers: self.powers.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for OnePolynomial {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = OnePolynomialJson::deserialize(d)?;
        Ok(OnePolynomial::from_powers(raw.powers))
    }
}

impl fmt::Display for OnePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (j, w) in self.powers.iter().enumerate().rev() {
            if w.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match j {
                0 => write!(f, "({w})")?,
                1 => write!(f, "({w})*T")?,
                _ => write!(f, "({w})*T^{j}")?,
            }
        }
        Ok(())
    }
}

fn decomposition_memo() -> &'static RwLock<HashMap<Composition, OnePolynomial>> {
    static MEMO: OnceLock<RwLock<HashMap<Composition, OnePolynomial>>> = OnceLock::new();
    MEMO.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Decomposition of a single word `z_1^m u` (u admissible or empty).
///
/// `z_1 * (z_1^{m-1} u) = m z_1^m u + rest` where every word of `rest` has at
/// most `m - 1` leading ones, since `lambda^1_{1,s} + lambda^1_{s,1} = 0` for
/// `s > 1`. Solving for `z_1^m u` gives the recursion.
fn decompose_word(c: &Composition) -> OnePolynomial {
    let m = c.leading_ones();
    if m == 0 {
        return OnePolynomial::constant(WordSum::word(c.clone()));
    }
    if let Some(hit) = decomposition_memo().read().unwrap().get(c) {
        return hit.clone();
    }
    let shorter = Composition::from_parts_unchecked(c.parts()[1..].to_vec());
    let one = Composition::ones(1);
    let mut rest = quasi_shuffle_words(&one, &shorter);
    let mm = Rational::from_integer(BigInt::from(m));
    debug_assert_eq!(rest.coeff(c), mm);
    rest.add_term(c.clone(), -mm.clone());
    let mut out = decompose_word(&shorter).shift();
    for (w, coeff) in rest.iter() {
        debug_assert!(w.leading_ones() < m);
        out.add_scaled(&-coeff, &decompose_word(w));
    }
    let out = {
        let mut scaled = OnePolynomial::zero();
        scaled.add_scaled(&(Rational::one() / mm), &out);
        scaled
    };
    decomposition_memo()
        .write()
        .unwrap()
        .insert(c.clone(), out.clone());
    out
}

/// Writes `w` as `sum_j P_j T^j` with every `P_j` admissible.
pub fn decompose_in_one(w: &WordSum) -> OnePolynomial {
    let mut out = OnePolynomial::zero();
    for (c, coeff) in w.iter() {
        out.add_scaled(coeff, &decompose_word(c));
    }
    out
}

/// Weight bound check shared by the relation code: `true` if the product of
/// two words stays inside the filtration sums.
pub fn respects_filtration(w: &Composition, v: &Composition) -> bool {
    let p = quasi_shuffle_words(w, v);
    p.weight() <= w.weight() + v.weight() && p.max_length() <= w.length() + v.length()
}

/// `[1]^n` expressed through words.
pub fn one_power(n: usize) -> WordSum {
    let mut acc = WordSum::one();
    let one = WordSum::word(Composition::ones(1));
    for _ in 0..n {
        acc = quasi_shuffle(&acc, &one);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::comp;
    use crate::exactnum::rat;
    use num_traits::Zero;

    fn ws(s: &str) -> WordSum {
        WordSum::parse(s).unwrap()
    }

    #[test]
    fn diamond_examples() {
        assert_eq!(diamond(1, 1), ws("[2] - [1]"));
        assert_eq!(diamond(1, 2), ws("[3] - 1/2[2]"));
        for a in 2..8 {
            for b in 2..8 {
                assert!(diamond(a, b).coeff(&comp![1]).is_zero());
            }
        }
    }

    #[test]
    fn product_one_two_one() {
        let p = quasi_shuffle_words(&comp![1], &comp![2, 1]);
        assert_eq!(p, ws("[1,2,1] + 2[2,1,1] - 3/2[2,1] + [2,2] + [3,1]"));
    }

    #[test]
    fn unit_law() {
        let w = ws("[3,1] - 2[2]");
        assert_eq!(quasi_shuffle(&w, &WordSum::one()), w);
        assert_eq!(quasi_shuffle(&WordSum::one(), &w), w);
    }

    #[test]
    fn four_times_four() {
        let p = quasi_shuffle_words(&comp![4], &comp![4]);
        assert_eq!(p, ws("2[4,4] + [8] + 1/360[4] - 1/1512[2]"));
    }

    #[test]
    fn decompositions() {
        assert_eq!(decompose_in_one(&ws("[3,2]")), OnePolynomial::constant(ws("[3,2]")));
        let t = decompose_in_one(&ws("[1]"));
        assert_eq!(t.coefficient(1), WordSum::one());
        assert_eq!(t.degree(), Some(1));

        let d11 = decompose_in_one(&ws("[1,1]"));
        assert_eq!(d11.coefficient(2), WordSum::one().scale(&rat(1, 2)));
        assert_eq!(d11.coefficient(1), WordSum::one().scale(&rat(1, 2)));
        assert_eq!(d11.coefficient(0), ws("-1/2[2]"));

        let d12 = decompose_in_one(&ws("[1,2]"));
        assert_eq!(d12.coefficient(1), ws("[2]"));
        assert_eq!(d12.coefficient(0), ws("-[2,1] - [3] + 1/2[2]"));
    }

    #[test]
    fn decomposition_round_trip() {
        for w in ["[1,1,1]", "[1,2,1]", "[1,1,3]", "[2,1] + [1,1,2]"] {
            let w = ws(w);
            let p = decompose_in_one(&w);
            assert!(p.powers().iter().all(|c| subalgebra_membership(c, Subalgebra::Mda)));
            assert_eq!(p.evaluate(60), evaluate(&w, 60), "{w}");
        }
    }

    #[test]
    fn json_forms() {
        let p = decompose_in_one(&ws("[1,2]"));
        let v = p.to_json();
        assert_eq!(v["powers"].as_array().unwrap().len(), 2);
        assert_eq!(OnePolynomial::from_json(&v).unwrap(), p);
    }

    #[test]
    fn membership() {
        let w = ws("[2,1]");
        assert!(subalgebra_membership(&w, Subalgebra::Mda));
        assert!(!subalgebra_membership(&w, Subalgebra::MdSharp));
        assert!(subalgebra_membership(&quasi_shuffle(&ws("[2,4]"), &ws("[4]")), Subalgebra::Mde));
    }
}

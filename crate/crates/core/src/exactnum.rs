//! Exact rationals and the number families the rest of the crate is built on:
//! binomials, factorials, Bernoulli numbers, Eulerian polynomials and the
//! coefficients `lambda^j_{a,b}` of the product of two normalized
//! polylogarithms at negative integers.
//!
//! Bernoulli numbers use the generating function `X/(e^X - 1)`, so
//! `B_1 = -1/2`. Every `lambda` coefficient depends on that sign.

use std::collections::HashMap;
use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::composition::Composition;
use crate::error::{Error, Result};

/// Exact rational number, always reduced with a positive denominator.
pub type Rational = BigRational;

/// Shorthand for the rational `num/den`.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Binomial coefficient `C(n, k)`; zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// Binomial coefficient with signed arguments, zero outside `0 <= k <= n`.
pub fn binomial_i(n: i64, k: i64) -> BigInt {
    if n < 0 || k < 0 || k > n {
        BigInt::zero()
    } else {
        binomial(n as u64, k as u64)
    }
}

fn factorial_table() -> &'static RwLock<Vec<BigInt>> {
    static TABLE: OnceLock<RwLock<Vec<BigInt>>> = OnceLock::new();
    TABLE.get_or_init(|| RwLock::new(vec![BigInt::one()]))
}

pub fn factorial(n: usize) -> BigInt {
    if let Some(v) = factorial_table().read().unwrap().get(n) {
        return v.clone();
    }
    let mut table = factorial_table().write().unwrap();
    while table.len() <= n {
        let next = table.last().unwrap() * BigInt::from(table.len());
        table.push(next);
    }
    table[n].clone()
}

fn bernoulli_table() -> &'static RwLock<Vec<Rational>> {
    static TABLE: OnceLock<RwLock<Vec<Rational>>> = OnceLock::new();
    TABLE.get_or_init(|| RwLock::new(vec![Rational::one()]))
}

/// Bernoulli number `B_n` with `B_1 = -1/2`.
///
/// Computed from `sum_{k=0}^{n} C(n+1, k) B_k = 0` and memoized.
pub fn bernoulli(n: usize) -> Rational {
    if let Some(v) = bernoulli_table().read().unwrap().get(n) {
        return v.clone();
    }
    let mut table = bernoulli_table().write().unwrap();
    while table.len() <= n {
        let m = table.len();
        if m > 1 && m % 2 == 1 {
            table.push(Rational::zero());
            continue;
        }
        let mut sum = Rational::zero();
        for (k, b) in table.iter().enumerate() {
            if !b.is_zero() {
                sum += Rational::from_integer(binomial(m as u64 + 1, k as u64)) * b;
            }
        }
        let value = -sum / Rational::from_integer(BigInt::from(m + 1));
        table.push(value);
    }
    table[n].clone()
}

/// The Eulerian polynomial `P_s(t) = sum_n A_{s,n} t^n` with
/// `sum_{n>0} n^s z^n = z P_s(z) / (1-z)^{s+1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EulerianPolynomial {
    s: u32,
    coefficients: Vec<BigInt>,
}

impl EulerianPolynomial {
    pub fn index(&self) -> u32 {
        self.s
    }

    /// Coefficients `A_{s,0}, ..., A_{s,s-1}` (just `[1]` for `s = 0`).
    pub fn coefficients(&self) -> &[BigInt] {
        &self.coefficients
    }

    pub fn degree(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn eval(&self, t: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coefficients.iter().rev() {
            acc = acc * t + Rational::from_integer(c.clone());
        }
        acc
    }

    pub fn eval_f64(&self, t: f64) -> f64 {
        let mut acc = 0.0;
        for c in self.coefficients.iter().rev() {
            acc = acc * t + bigint_to_f64(c);
        }
        acc
    }
}

/// `P_s` from the closed form `A_{s,n} = sum_{i=0}^n (-1)^i C(s+1,i) (n+1-i)^s`.
pub fn eulerian_polynomial(s: u32) -> EulerianPolynomial {
    if s == 0 {
        return EulerianPolynomial {
            s,
            coefficients: vec![BigInt::one()],
        };
    }
    let coefficients = (0..s)
        .map(|n| {
            (0..=n).fold(BigInt::zero(), |acc, i| {
                let term = binomial(u64::from(s) + 1, u64::from(i))
                    * num_traits::pow(BigInt::from(n + 1 - i), s as usize);
                if i % 2 == 0 {
                    acc + term
                } else {
                    acc - term
                }
            })
        })
        .collect();
    EulerianPolynomial { s, coefficients }
}

/// Memo table for `lambda^j_{a,b}`.
#[derive(Default)]
pub struct LambdaTable {
    cache: RwLock<HashMap<(u32, u32, u32), Rational>>,
}

impl LambdaTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// `lambda^j_{a,b} = (-1)^{b-1} C(a+b-j-1, a-j) B_{a+b-j} / (a+b-j)!`
    pub fn get(&self, a: u32, b: u32, j: u32) -> Result<Rational> {
        if a == 0 || b == 0 || j == 0 || j > a {
            return Err(Error::LambdaIndex { a, j });
        }
        if let Some(v) = self.cache.read().unwrap().get(&(a, b, j)) {
            return Ok(v.clone());
        }
        let m = (a + b - j) as usize;
        let mut value = Rational::from_integer(binomial(m as u64 - 1, u64::from(a - j)))
            * bernoulli(m)
            / Rational::from_integer(factorial(m));
        if b % 2 == 0 {
            value = -value;
        }
        self.cache
            .write()
            .unwrap()
            .insert((a, b, j), value.clone());
        Ok(value)
    }
}

fn global_lambda() -> &'static LambdaTable {
    static TABLE: OnceLock<LambdaTable> = OnceLock::new();
    TABLE.get_or_init(LambdaTable::new)
}

/// `lambda^j_{a,b}` through the process-wide memo table.
pub fn lambda_coeff(a: u32, b: u32, j: u32) -> Result<Rational> {
    global_lambda().get(a, b, j)
}

/// Number of compositions of weight `k` and length `l`: `b(k,l) = C(k-1,l-1)`,
/// or the admissible ones `a(k,l) = C(k-2,l-1)`. The empty composition counts
/// once at `(0, 0)`.
pub fn count_generators(k: u32, l: u32, admissible: bool) -> u64 {
    if k == 0 || l == 0 {
        return u64::from(k == 0 && l == 0);
    }
    let n = if admissible {
        binomial_i(i64::from(k) - 2, i64::from(l) - 1)
    } else {
        binomial_i(i64::from(k) - 1, i64::from(l) - 1)
    };
    u64::try_from(n).expect("generator count fits in u64")
}

/// All compositions of weight `k` and length `l` in lexicographic order.
pub fn compositions(k: u32, l: u32, admissible: bool) -> Vec<Composition> {
    fn rec(k: u32, l: u32, min_first: u32, prefix: &mut Vec<u32>, out: &mut Vec<Composition>) {
        if l == 0 {
            if k == 0 {
                out.push(Composition::from_parts_unchecked(prefix.clone()));
            }
            return;
        }
        if k < l {
            return;
        }
        for first in min_first..=(k - (l - 1)) {
            prefix.push(first);
            rec(k - first, l - 1, 1, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if k == 0 || l == 0 {
        if k == 0 && l == 0 {
            out.push(Composition::empty());
        }
        return out;
    }
    rec(k, l, if admissible { 2 } else { 1 }, &mut Vec::new(), &mut out);
    out
}

/// Generators of `Fil^{W,L}_{k,l}` (without the constant) in canonical order.
pub fn filtration_generators(max_weight: u32, max_length: u32, admissible: bool) -> Vec<Composition> {
    let mut out = Vec::new();
    for k in 1..=max_weight {
        for l in 1..=max_length.min(k) {
            out.extend(compositions(k, l, admissible));
        }
    }
    out
}

pub fn bigint_to_f64(n: &BigInt) -> f64 {
    use num_traits::ToPrimitive;
    n.to_f64().unwrap_or_else(|| {
        if n.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

pub fn rational_to_f64(r: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    if let Some(v) = r.to_f64() {
        if v.is_finite() {
            return v;
        }
    }
    // Scale down huge numerators and denominators before converting.
    let nb = r.numer().bits() as i64;
    let db = r.denom().bits() as i64;
    let shift_n = (nb - 900).max(0) as usize;
    let shift_d = (db - 900).max(0) as usize;
    let n = bigint_to_f64(&(r.numer() >> shift_n));
    let d = bigint_to_f64(&(r.denom() >> shift_d));
    n / d * 2f64.powi((shift_n as i64 - shift_d as i64) as i32)
}

/// Parses `"a/b"` or `"a"` into an exact rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let parse_int = |t: &str| -> Result<BigInt> {
        t.trim()
            .parse::<BigInt>()
            .map_err(|_| Error::Parse(format!("not a rational: {s:?}")))
    };
    match s.split_once('/') {
        Some((n, d)) => {
            let d = parse_int(d)?;
            if d.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            Ok(Rational::new(parse_int(n)?, d))
        }
        None => Ok(Rational::from_integer(parse_int(s)?)),
    }
}

/// Canonical `"num/den"` text form used by every JSON format.
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bernoulli_small_values() {
        assert_eq!(bernoulli(0), int(1));
        assert_eq!(bernoulli(1), rat(-1, 2));
        assert_eq!(bernoulli(2), rat(1, 6));
        assert_eq!(bernoulli(7), int(0));
        assert_eq!(bernoulli(12), rat(-691, 2730));
    }

    #[test]
    fn bernoulli_recurrence_residual_vanishes() {
        for n in 1..=40usize {
            let residual = (0..=n).fold(Rational::zero(), |acc, k| {
                acc + Rational::from_integer(binomial(n as u64 + 1, k as u64)) * bernoulli(k)
            });
            assert!(residual.is_zero(), "n = {n}");
        }
    }

    /// `P_{k+1}(t) = P_k(t)(1 + k t) + t(1 - t) P_k'(t)` on coefficient vectors.
    fn eulerian_by_recurrence(s: u32) -> Vec<BigInt> {
        let mut p = vec![BigInt::one()];
        for k in 0..s {
            let kk = BigInt::from(k);
            let mut next = vec![BigInt::zero(); p.len() + 1];
            for (i, c) in p.iter().enumerate() {
                next[i] += c;
                next[i + 1] += c * &kk;
                let d = c * BigInt::from(i);
                // t (1 - t) * i c t^{i-1} = i c t^i - i c t^{i+1}
                next[i] += &d;
                next[i + 1] -= &d;
            }
            while next.len() > 1 && next.last().unwrap().is_zero() {
                next.pop();
            }
            p = next;
        }
        p
    }

    #[test]
    fn eulerian_examples() {
        assert_eq!(eulerian_polynomial(0).coefficients(), &[BigInt::one()]);
        assert_eq!(eulerian_polynomial(1).coefficients(), &[BigInt::one()]);
        let p3: Vec<BigInt> = [1, 4, 1].iter().map(|&c| BigInt::from(c)).collect();
        assert_eq!(eulerian_polynomial(3).coefficients(), p3.as_slice());
    }

    #[test]
    fn eulerian_closed_form_matches_recurrence_and_sums_to_factorial() {
        for s in 0..=12u32 {
            let p = eulerian_polynomial(s);
            assert_eq!(p.coefficients(), eulerian_by_recurrence(s).as_slice(), "s = {s}");
            assert_eq!(p.eval(&int(1)), Rational::from_integer(factorial(s as usize)));
            if s >= 1 {
                assert!(p.coefficients().iter().all(|c| c.is_positive()));
            }
        }
    }

    #[test]
    fn lambda_examples() {
        assert_eq!(lambda_coeff(1, 1, 1).unwrap(), rat(-1, 2));
        assert_eq!(lambda_coeff(4, 4, 4).unwrap(), rat(1, 720));
        assert_eq!(lambda_coeff(4, 4, 1).unwrap(), int(0));
        assert!(matches!(lambda_coeff(3, 2, 4), Err(Error::LambdaIndex { .. })));
        assert!(lambda_coeff(3, 2, 0).is_err());
    }

    #[test]
    fn lambda_first_coefficients_cancel_for_parts_above_one() {
        for a in 2..=10 {
            for b in 2..=10 {
                let s = lambda_coeff(a, b, 1).unwrap() + lambda_coeff(b, a, 1).unwrap();
                assert!(s.is_zero(), "a = {a}, b = {b}");
            }
        }
    }

    #[test]
    fn generator_counts() {
        assert_eq!(count_generators(4, 2, false), 3);
        assert_eq!(count_generators(4, 2, true), 2);
        for k in 2..20 {
            assert_eq!(count_generators(k, 1, true), 1);
        }
        assert_eq!(count_generators(0, 0, true), 1);
        assert_eq!(count_generators(3, 0, false), 0);
        assert_eq!(count_generators(1, 1, true), 0);
    }

    #[test]
    fn generator_counts_match_enumeration() {
        fn brute(k: u32, l: u32, admissible: bool) -> u64 {
            // every subset of the k-1 gaps of 1+1+...+1 with l-1 cuts
            if k == 0 {
                return u64::from(l == 0);
            }
            let mut count = 0;
            for mask in 0u32..(1 << (k - 1)) {
                if mask.count_ones() + 1 != l {
                    continue;
                }
                // the first part is one exactly when the first gap is cut
                if admissible && (k == 1 || mask & 1 == 1) {
                    continue;
                }
                count += 1;
            }
            count
        }
        for k in 0..=15 {
            for l in 0..=k {
                for adm in [false, true] {
                    assert_eq!(count_generators(k, l, adm), brute(k, l, adm), "({k},{l},{adm})");
                    assert_eq!(compositions(k, l, adm).len() as u64, brute(k, l, adm));
                }
            }
        }
        let listed: Vec<Vec<u32>> = compositions(4, 2, false)
            .iter()
            .map(|c| c.parts().to_vec())
            .collect();
        assert_eq!(listed, vec![vec![1, 3], vec![2, 2], vec![3, 1]]);
    }

    #[test]
    fn rational_text_round_trip() {
        let r = rat(-6, 4);
        assert_eq!(format_rational(&r), "-3/2");
        assert_eq!(parse_rational("-3/2").unwrap(), r);
        assert_eq!(parse_rational("7").unwrap(), int(7));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }
}

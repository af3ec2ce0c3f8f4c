//! Multiple zeta values, the maps `Z_k` and `Z_k^alg`, and numerical looks at
//! the limit `q -> 1`.
//!
//! `zeta(s_1, ..., s_l)` is computed from its iterated integral over `[0, 1]`
//! split at `1/2`: both halves are multiple polylogarithms at `1/2`, whose
//! series converge like `2^-n`. The partial sums are exact rationals, so the
//! only error is the truncation, which is bounded explicitly.

use std::collections::HashMap;
use std::fmt;
use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::composition::Composition;
use crate::error::{Error, Result};
use crate::exactnum::{binomial, rational_to_f64, Rational};
use crate::qseries::QSeries;
use crate::quasishuffle::decompose_in_one;
use crate::wordsum::WordSum;

/// Letters of the iterated integral word: `x0 = dt/t`, `x1 = dt/(1-t)`.
type Word = Vec<bool>;

/// `x0^{s_1-1} x1 ... x0^{s_l-1} x1`, with `true` for `x1`.
fn word_of(c: &Composition) -> Word {
    let mut w = Vec::with_capacity(c.weight() as usize);
    for &s in c.parts() {
        w.extend(std::iter::repeat_n(false, s as usize - 1));
        w.push(true);
    }
    w
}

/// Inverse of `word_of` for words ending in `x1`.
fn index_of(w: &[bool]) -> Vec<u32> {
    let mut out = Vec::new();
    let mut s = 1;
    for &x in w {
        if x {
            out.push(s);
            s = 1;
        } else {
            s += 1;
        }
    }
    out
}

/// `Li_{s_1..s_k}(1/2) = sum_{n_1 > ... > n_k > 0} 2^{-n_1} / (n_1^{s_1} ... n_k^{s_k})`
/// with `n_1 <= m`.
fn polylog_half(s: &[u32], m: usize) -> Rational {
    // inner[n] = sum over n > n_{i+1} > ... of the inner factors
    let mut inner: Vec<Rational> = vec![Rational::one(); m + 1];
    for (level, &si) in s.iter().enumerate().rev() {
        let mut next = vec![Rational::zero(); m + 1];
        let mut acc = Rational::zero();
        for n in 1..=m {
            // next[n] = sum_{j < n} j^{-si} inner[j]  (for the next level up)
            next[n] = acc.clone();
            let p = num_traits::pow(BigInt::from(n), si as usize);
            let term = &inner[n] / Rational::from_integer(p);
            acc += term;
        }
        if level == 0 {
            // Outermost level: weight by 2^{-n}.
            let mut total = Rational::zero();
            for n in 1..=m {
                let p = num_traits::pow(BigInt::from(n), si as usize) << n;
                total += &inner[n] / Rational::from_integer(p);
            }
            return total;
        }
        inner = next;
    }
    Rational::one()
}

/// Upper bound for the part of a depth-`k` polylogarithm at `1/2` beyond
/// `n_1 = m`: `sum_{n > m} 2^{-n} (1 + ln n)^{k-1}`.
fn polylog_tail_bound(k: usize, m: usize) -> f64 {
    let t = |n: f64| 0.5f64.powf(n) * (1.0 + n.ln()).powi(k as i32 - 1);
    let n = (m + 1) as f64;
    let r = 0.5 * ((1.0 + (n + 1.0).ln()) / (1.0 + n.ln())).powi(k as i32 - 1);
    if r >= 1.0 {
        return f64::INFINITY;
    }
    2.0 * t(n) / (1.0 - r)
}

/// The pieces of the split: for `j = 0..=n`, the reversed and swapped prefix
/// and the suffix of the word.
fn split_terms(w: &[bool]) -> Vec<(Vec<u32>, Vec<u32>)> {
    (0..=w.len())
        .map(|j| {
            let left: Word = w[..j].iter().rev().map(|&x| !x).collect();
            (index_of(&left), index_of(&w[j..]))
        })
        .collect()
}

fn split_error_bound(pieces: &[(Vec<u32>, Vec<u32>)], m: usize) -> f64 {
    pieces
        .iter()
        .map(|(l, r)| {
            let el = if l.is_empty() { 0.0 } else { polylog_tail_bound(l.len(), m) };
            let er = if r.is_empty() { 0.0 } else { polylog_tail_bound(r.len(), m) };
            el + er + el * er
        })
        .sum()
}

/// Rational approximation of a real number with an error bound.
#[derive(Debug, Clone, PartialEq)]
pub struct MzvValue {
    pub index: Composition,
    pub value: Rational,
    pub error_bound: f64,
}

impl MzvValue {
    pub fn to_f64(&self) -> f64 {
        rational_to_f64(&self.value)
    }

    /// Decimal digits matching the error bound, plus two guard digits.
    pub fn decimal(&self) -> String {
        decimal_string(&self.value, digits_for(self.error_bound))
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "index": self.index.parts(),
            "value": self.decimal(),
            "error_bound": format!("{:e}", self.error_bound),
        })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<MzvValue> {
        let raw: MzvJson = serde_json::from_value(v.clone()).map_err(|e| Error::Parse(e.to_string()))?;
        let index = Composition::new(raw.index)?;
        let value = parse_decimal(&raw.value)?;
        let error_bound = raw
            .error_bound
            .parse::<f64>()
            .map_err(|e| Error::Parse(format!("error bound {:?}: {e}", raw.error_bound)))?;
        Ok(MzvValue {
            index,
            value,
            error_bound,
        })
    }
}

#[derive(Serialize, Deserialize)]
struct MzvJson {
    index: Vec<u32>,
    value: String,
    error_bound: String,
}

impl fmt::Display for MzvValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "zeta({}) = {} +- {:e}", self.index.to_arg(), self.decimal(), self.error_bound)
    }
}

fn digits_for(err: f64) -> usize {
    if err <= 0.0 || !err.is_finite() {
        return 20;
    }
    ((-err.log10()).ceil().max(0.0) as usize + 2).max(12)
}

/// `r` rounded to `digits` places after the decimal point.
pub fn decimal_string(r: &Rational, digits: usize) -> String {
    let scale = num_traits::pow(BigInt::from(10), digits);
    let scaled = r * Rational::from_integer(scale.clone());
    let n = scaled.round().to_integer();
    let neg = n.is_negative();
    let (int_part, frac) = n.abs().div_rem(&scale);
    let frac = frac.to_string();
    let pad = "0".repeat(digits.saturating_sub(frac.len()));
    format!("{}{}.{}{}", if neg { "-" } else { "" }, int_part, pad, frac)
}

/// Exact value of a decimal string such as `-1.2345` or `3e-5`.
pub fn parse_decimal(s: &str) -> Result<Rational> {
    let s = s.trim();
    let (mantissa, exp) = match s.split_once(['e', 'E']) {
        Some((m, e)) => (m, e.parse::<i32>().map_err(|e| Error::Parse(e.to_string()))?),
        None => (s, 0),
    };
    let (neg, mantissa) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa),
    };
    let (ip, fp) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    let digits = format!("{ip}{fp}");
    if digits.is_empty() || !digits.chars().all(|c| c.is_ascii_digit()) {
        return Err(Error::Parse(format!("not a decimal number: {s:?}")));
    }
    let n: BigInt = digits.parse().map_err(|_| Error::Parse(format!("not a decimal number: {s:?}")))?;
    let e = exp - fp.len() as i32;
    let ten = BigInt::from(10);
    let mut v = if e >= 0 {
        Rational::from_integer(n * num_traits::pow(ten, e as usize))
    } else {
        Rational::new(n, num_traits::pow(ten, (-e) as usize))
    };
    if neg {
        v = -v;
    }
    Ok(v)
}

fn polylog_memo() -> &'static RwLock<HashMap<(Vec<u32>, usize), Rational>> {
    static MEMO: OnceLock<RwLock<HashMap<(Vec<u32>, usize), Rational>>> = OnceLock::new();
    MEMO.get_or_init(|| RwLock::new(HashMap::new()))
}

/// `zeta(s_1, ..., s_l)` with `|value - zeta| <= error_bound <= target_error`.
pub fn mzv(c: &Composition, target_error: f64) -> Result<MzvValue> {
    if c.is_empty() {
        return Ok(MzvValue {
            index: c.clone(),
            value: Rational::one(),
            error_bound: 0.0,
        });
    }
    if !c.is_admissible() {
        return Err(Error::NotAdmissible(c.to_string()));
    }
    if !(target_error > 0.0) {
        return Err(Error::Unsupported(format!("target error {target_error} must be positive")));
    }
    let pieces = split_terms(&word_of(c));
    let mut m = 16;
    while split_error_bound(&pieces, m) > target_error {
        m += 8;
        if m > 4000 {
            return Err(Error::Unsupported(format!("target error {target_error} is out of reach")));
        }
    }
    let li = |s: &Vec<u32>| -> Rational {
        if s.is_empty() {
            return Rational::one();
        }
        let key = (s.clone(), m);
        if let Some(v) = polylog_memo().read().unwrap().get(&key) {
            return v.clone();
        }
        let v = polylog_half(s, m);
        polylog_memo().write().unwrap().insert(key, v.clone());
        v
    };
    let mut value = Rational::zero();
    for (l, r) in &pieces {
        value += li(l) * li(r);
    }
    Ok(MzvValue {
        index: c.clone(),
        value,
        error_bound: split_error_bound(&pieces, m),
    })
}

/// Plain nested summation with `n_1 <= n_max` in floating point, no tail
/// correction. A slow reference for the split evaluation.
pub fn mzv_truncated_sum(c: &Composition, n_max: usize) -> f64 {
    let mut inner = vec![1.0f64; n_max + 1];
    for &s in c.parts().iter().rev() {
        let mut next = vec![0.0f64; n_max + 1];
        let mut acc = 0.0;
        for n in 1..=n_max {
            next[n] = acc;
            acc += inner[n] / (n as f64).powi(s as i32);
        }
        next.push(acc);
        inner = next;
    }
    inner[n_max + 1]
}

/// A linear combination of zeta values and its value.
#[derive(Debug, Clone, PartialEq)]
pub struct ZetaCombination {
    pub terms: Vec<(Composition, Rational)>,
    pub value: Rational,
    pub error_bound: f64,
}

impl ZetaCombination {
    pub fn to_f64(&self) -> f64 {
        rational_to_f64(&self.value)
    }

    pub fn is_zero_symbolically(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "terms": self.terms.iter().map(|(c, x)| serde_json::json!({
                "index": c.parts(),
                "coeff": x.to_string(),
            })).collect::<Vec<_>>(),
            "value": decimal_string(&self.value, digits_for(self.error_bound)),
            "error_bound": format!("{:e}", self.error_bound),
        })
    }
}

impl fmt::Display for ZetaCombination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (c, x)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{x}*zeta({})", c.to_arg())?;
        }
        write!(f, " = {} +- {:e}", decimal_string(&self.value, digits_for(self.error_bound)), self.error_bound)
    }
}

/// Sum of `coeff * zeta(c)` over the terms; the empty composition stands for 1.
fn zeta_combination(terms: Vec<(Composition, Rational)>, target_error: f64) -> Result<ZetaCombination> {
    let total_coeff: f64 = terms.iter().map(|(_, x)| rational_to_f64(x).abs()).sum();
    let per = if total_coeff > 0.0 { target_error / total_coeff } else { target_error };
    let mut value = Rational::zero();
    let mut err = 0.0;
    for (c, x) in &terms {
        let z = mzv(c, per)?;
        value += x * &z.value;
        err += rational_to_f64(x).abs() * z.error_bound;
    }
    Ok(ZetaCombination {
        terms,
        value,
        error_bound: err,
    })
}

/// `Z_k(w)`: terms of weight `k` go to `zeta` of their index, lower weights to
/// 0. Every term has to be admissible and of weight at most `k`.
pub fn z_k_symbolic(w: &WordSum, k: u32, target_error: f64) -> Result<ZetaCombination> {
    let mut terms = Vec::new();
    for (c, x) in w.iter() {
        if c.is_empty() {
            if k == 0 {
                terms.push((c.clone(), x.clone()));
            }
            continue;
        }
        if !c.is_admissible() {
            return Err(Error::NotAdmissible(c.to_string()));
        }
        if c.weight() > k {
            return Err(Error::WeightTooLarge {
                found: c.weight(),
                limit: k,
            });
        }
        if c.weight() == k {
            terms.push((c.clone(), x.clone()));
        }
    }
    zeta_combination(terms, target_error)
}

/// Polynomial in `T` with zeta-combination coefficients; entry `j` is the
/// coefficient of `T^j`.
#[derive(Debug, Clone, PartialEq)]
pub struct ZPolynomial {
    pub coefficients: Vec<ZetaCombination>,
}

impl ZPolynomial {
    pub fn degree(&self) -> Option<usize> {
        self.coefficients.iter().rposition(|c| !c.is_zero_symbolically())
    }

    /// Largest `|value| + error_bound` over the coefficients.
    pub fn max_abs(&self) -> f64 {
        self.coefficients
            .iter()
            .map(|c| c.to_f64().abs() + c.error_bound)
            .fold(0.0, f64::max)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "coefficients": self.coefficients.iter().map(ZetaCombination::to_json).collect::<Vec<_>>(),
        })
    }
}

impl fmt::Display for ZPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (j, c) in self.coefficients.iter().enumerate() {
            writeln!(f, "T^{j}: {c}")?;
        }
        Ok(())
    }
}

/// `Z_k^alg(sum_j P_j [1]^j) = sum_j Z_{k-j}(P_j) T^j`.
pub fn z_k_alg(w: &WordSum, k: u32, target_error: f64) -> Result<ZPolynomial> {
    if w.weight() > k {
        return Err(Error::WeightTooLarge {
            found: w.weight(),
            limit: k,
        });
    }
    let poly = decompose_in_one(w);
    let mut coefficients = Vec::new();
    for (j, p) in poly.powers().iter().enumerate() {
        let kj = k.checked_sub(j as u32).ok_or(Error::WeightTooLarge {
            found: j as u32,
            limit: k,
        })?;
        coefficients.push(z_k_symbolic(p, kj, target_error)?);
    }
    Ok(ZPolynomial { coefficients })
}

/// Estimate of `lim_{q -> 1} (1 - q)^k s(q)` from the truncated series.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LimitDiagnostic {
    pub value: f64,
    /// Difference between the last two extrapolated estimates.
    pub spread: f64,
    /// `(q, (1 - q)^k s(q))` at the sample points.
    pub samples: Vec<(f64, f64)>,
}

/// Samples `(1 - q)^k s(q)` at `q = 1 - 2^-m` for `m = 2..=8` and extrapolates
/// to `q = 1` by Neville's scheme in `h = 1 - q`. Sample points at which the
/// truncation visibly matters (`q^order` above `1e-12`) are skipped. Only a
/// diagnostic; the spread is not an error bound.
pub fn limit_diagnostic(s: &QSeries, k: u32) -> LimitDiagnostic {
    let coeffs: Vec<f64> = s.coefficients().iter().map(rational_to_f64).collect();
    let n = s.order();
    let mut samples = Vec::new();
    for m in 2..=8 {
        let h = 0.5f64.powi(m);
        let q = 1.0 - h;
        if (n as f64) * q.ln() > (1e-12f64).ln() {
            break;
        }
        let v = coeffs.iter().rev().fold(0.0, |acc, c| acc * q + c);
        samples.push((q, h.powi(k as i32) * v));
    }
    let (value, spread) = neville_at_zero(&samples.iter().map(|&(q, v)| (1.0 - q, v)).collect::<Vec<_>>());
    LimitDiagnostic { value, spread, samples }
}

/// Polynomial extrapolation to `x = 0`; returns the final estimate and its
/// distance from the estimate without the last point.
fn neville_at_zero(points: &[(f64, f64)]) -> (f64, f64) {
    match points.len() {
        0 => (f64::NAN, f64::INFINITY),
        1 => (points[0].1, f64::INFINITY),
        n => {
            let mut p: Vec<f64> = points.iter().map(|x| x.1).collect();
            let mut last_two = (p[n - 2], p[n - 1]);
            for level in 1..n {
                for i in 0..n - level {
                    let (xi, xj) = (points[i].0, points[i + level].0);
                    p[i] = (xj * p[i] - xi * p[i + 1]) / (xj - xi);
                }
                if n - level >= 2 {
                    last_two = (p[n - level - 2], p[n - level - 1]);
                } else {
                    last_two = (last_two.1, p[0]);
                }
            }
            (p[0], (last_two.1 - last_two.0).abs())
        }
    }
}

/// `sum_{n_1 > ... > n_l > 0} prod_j q^{n_j (s_j - 1)} / (1 - q^{n_j})^{s_j}`
/// through `q^order`.
pub fn modified_qzeta(c: &Composition, order: usize) -> Result<QSeries> {
    if !c.is_admissible() {
        return Err(Error::NotAdmissible(c.to_string()));
    }
    let parts = c.parts();
    // q^{n(s-1)} / (1 - q^n)^s = sum_{m >= 0} C(m+s-1, s-1) q^{n(m+s-1)}
    let factor = |s: u32, n: usize| -> Vec<(usize, BigInt)> {
        let mut out = Vec::new();
        let mut m = 0usize;
        loop {
            let e = n * (m + s as usize - 1);
            if e > order {
                break;
            }
            out.push((e, binomial((m + s as usize - 1) as u64, u64::from(s - 1))));
            m += 1;
        }
        out
    };
    let mul = |dense: &[BigInt], sparse: &[(usize, BigInt)]| -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); order + 1];
        for (e, x) in sparse {
            for (i, d) in dense.iter().enumerate() {
                if i + e > order {
                    break;
                }
                if !d.is_zero() {
                    out[i + e] += x * d;
                }
            }
        }
        out
    };
    // below[n] = sum over n > n_{j+1} > ... of the inner factors, as series.
    let mut one = vec![BigInt::zero(); order + 1];
    one[0] = BigInt::one();
    let n_max = order.max(1);
    let mut below: Vec<Vec<BigInt>> = vec![one; n_max + 2];
    for &s in parts.iter().rev() {
        let mut next = Vec::with_capacity(n_max + 2);
        let mut acc = vec![BigInt::zero(); order + 1];
        next.push(acc.clone());
        for n in 1..=n_max + 1 {
            next.push(acc.clone());
            if n <= n_max {
                let t = mul(&below[n], &factor(s, n));
                for (a, b) in acc.iter_mut().zip(t) {
                    *a += b;
                }
            }
        }
        // next[n] holds the sum over indices < n; the total sits at n_max + 1.
        below = next;
    }
    let total = below.pop().expect("nonempty");
    Ok(QSeries::from_coefficients(total.into_iter().map(Rational::from_integer).collect()))
}

/// `(1 - q)^k` times a series.
pub fn times_one_minus_q_pow(s: &QSeries, k: u32) -> QSeries {
    let order = s.order();
    let mut c: Vec<Rational> = s.coefficients().to_vec();
    for _ in 0..k {
        for i in (1..=order).rev() {
            let prev = c[i - 1].clone();
            c[i] -= prev;
        }
    }
    QSeries::from_coefficients(c)
}

/// `zeta(2n) = (-1)^{n+1} B_{2n} (2 pi)^{2n} / (2 (2n)!)` in floating point.
pub fn even_zeta_f64(k: u32) -> f64 {
    assert!(k >= 2 && k % 2 == 0, "even weight expected");
    let b = rational_to_f64(&crate::exactnum::bernoulli(k as usize));
    let f = crate::exactnum::factorial(k as usize).to_f64().unwrap_or(f64::INFINITY);
    let sign = if (k / 2) % 2 == 1 { 1.0 } else { -1.0 };
    sign * b * (2.0 * std::f64::consts::PI).powi(k as i32) / (2.0 * f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::comp;
    use crate::exactnum::rat;

    #[test]
    fn zeta_two() {
        let z = mzv(&comp![2], 1e-12).unwrap();
        assert!(z.error_bound <= 1e-12);
        assert!((z.to_f64() - std::f64::consts::PI.powi(2) / 6.0).abs() < 1e-12);
        assert!(mzv(&comp![1, 2], 1e-8).is_err());
    }

    #[test]
    fn euler_and_small_relations() {
        let a = mzv(&comp![2, 1], 1e-14).unwrap().to_f64();
        let b = mzv(&comp![3], 1e-14).unwrap().to_f64();
        assert!((a - b).abs() < 1e-12);
        assert!((b - 1.202_056_903_159_594_2).abs() < 1e-13);
    }

    #[test]
    fn agrees_with_plain_summation() {
        // Tail of the plain sum for zeta(3,2) is about 1.2 * 2 / n^2.
        let plain = mzv_truncated_sum(&comp![3, 2], 20_000);
        let split = mzv(&comp![3, 2], 1e-12).unwrap().to_f64();
        assert!((plain - split).abs() < 1e-7, "{plain} {split}");
        assert!(plain < split);
    }

    #[test]
    fn json_round_trip() {
        let z = mzv(&comp![3, 1], 1e-20).unwrap();
        let v = z.to_json();
        assert_eq!(v["index"], serde_json::json!([3, 1]));
        let back = MzvValue::from_json(&v).unwrap();
        assert!((back.to_f64() - z.to_f64()).abs() < 1e-15);
        assert_eq!(back.to_json(), v);
    }

    #[test]
    fn decimals() {
        assert_eq!(decimal_string(&rat(-1, 3), 4), "-0.3333");
        assert_eq!(decimal_string(&rat(2, 3), 3), "0.667");
        assert_eq!(parse_decimal("-0.3333").unwrap(), rat(-3333, 10000));
        assert_eq!(parse_decimal("3e-2").unwrap(), rat(3, 100));
    }

    #[test]
    fn lower_weight_maps_to_zero() {
        let w = WordSum::parse("[3] + 2[2]").unwrap();
        let z = z_k_symbolic(&w, 4, 1e-10).unwrap();
        assert!(z.is_zero_symbolically());
        assert!(z.value.is_zero());
        assert!(z_k_symbolic(&WordSum::parse("[1,2]").unwrap(), 3, 1e-10).is_err());
    }

    #[test]
    fn modified_qzeta_examples() {
        use crate::quasishuffle::evaluate;
        let m4 = modified_qzeta(&comp![4], 30).unwrap();
        assert_eq!(m4, evaluate(&WordSum::parse("[4] - [3] + 1/3[2]").unwrap(), 30));
        let m22 = modified_qzeta(&comp![2, 2], 30).unwrap();
        assert_eq!(m22, evaluate(&WordSum::parse("[2,2]").unwrap(), 30));
    }

    #[test]
    fn even_zeta() {
        assert!((even_zeta_f64(2) - std::f64::consts::PI.powi(2) / 6.0).abs() < 1e-15);
        let z4 = mzv(&comp![4], 1e-14).unwrap().to_f64();
        assert!((even_zeta_f64(4) - z4).abs() < 1e-13);
    }
}

//! Truncated power series in `q` with exact rational coefficients.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::{format_rational, parse_rational, Rational};

/// Coefficients of `q^0, ..., q^N` for a recorded order `N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QSeries {
    coeffs: Vec<Rational>,
}

impl QSeries {
    pub fn zero(order: usize) -> Self {
        QSeries {
            coeffs: vec![Rational::zero(); order + 1],
        }
    }

    pub fn one(order: usize) -> Self {
        Self::constant_series(Rational::one(), order)
    }

    pub fn constant_series(c: Rational, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = c;
        s
    }

    /// `q^n` (zero if `n` exceeds the order).
    pub fn monomial(n: usize, order: usize) -> Self {
        let mut s = Self::zero(order);
        if n <= order {
            s.coeffs[n] = Rational::one();
        }
        s
    }

    /// From the full list `c_0, ..., c_N`; the order is `len - 1`.
    pub fn from_coefficients(coeffs: Vec<Rational>) -> Self {
        assert!(!coeffs.is_empty(), "a series needs at least the constant term");
        QSeries { coeffs }
    }

    pub fn from_parts(constant: Rational, tail: Vec<Rational>) -> Self {
        let mut coeffs = Vec::with_capacity(tail.len() + 1);
        coeffs.push(constant);
        coeffs.extend(tail);
        QSeries { coeffs }
    }

    /// Integer coefficients `c_0..c_N` divided by a common denominator.
    pub fn from_integers(numerators: &[BigInt], denominator: &BigInt) -> Self {
        let coeffs = numerators
            .iter()
            .map(|n| Rational::new(n.clone(), denominator.clone()))
            .collect();
        QSeries { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn constant(&self) -> &Rational {
        &self.coeffs[0]
    }

    /// Coefficients of `q^1..q^N`.
    pub fn tail(&self) -> &[Rational] {
        &self.coeffs[1..]
    }

    /// Coefficients of `q^0..q^N`.
    pub fn coefficients(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize) -> Result<&Rational> {
        self.coeffs.get(n).ok_or(Error::OrderExceeded {
            requested: n,
            available: self.order(),
        })
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Index of the first nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn truncate(&self, order: usize) -> Self {
        let n = order.min(self.order());
        QSeries {
            coeffs: self.coeffs[..=n].to_vec(),
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.order());
        }
        QSeries {
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    /// In-place `self += c * other`, truncating to the smaller order.
    pub fn add_scaled(&mut self, c: &Rational, other: &QSeries) {
        if other.order() < self.order() {
            self.coeffs.truncate(other.order() + 1);
        }
        if c.is_zero() {
            return;
        }
        for (x, y) in self.coeffs.iter_mut().zip(other.coeffs.iter()) {
            if !y.is_zero() {
                *x += c * y;
            }
        }
    }

    /// Common denominator and integer numerators of all coefficients.
    fn to_integers(&self) -> (BigInt, Vec<BigInt>) {
        let den = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let nums = self
            .coeffs
            .iter()
            .map(|c| c.numer() * (&den / c.denom()))
            .collect();
        (den, nums)
    }

    /// Truncated Cauchy product. Works on integer numerators over a common
    /// denominator so the inner loop never normalizes fractions.
    pub fn mul(&self, other: &QSeries) -> QSeries {
        let order = self.order().min(other.order());
        let (da, a) = self.to_integers();
        let (db, b) = other.to_integers();
        let den = da * db;
        let mut out = Vec::with_capacity(order + 1);
        for n in 0..=order {
            let mut acc = BigInt::zero();
            for i in 0..=n {
                if a[i].is_zero() || b[n - i].is_zero() {
                    continue;
                }
                acc += &a[i] * &b[n - i];
            }
            out.push(Rational::new(acc, den.clone()));
        }
        QSeries { coeffs: out }
    }

    pub fn pow(&self, e: u32) -> QSeries {
        let mut acc = QSeries::one(self.order());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// `q d/dq`: the coefficient of `q^n` is multiplied by `n`.
    pub fn q_d_dq(&self) -> QSeries {
        QSeries {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(n, c)| c * Rational::from_integer(BigInt::from(n)))
                .collect(),
        }
    }

    /// True iff the coefficients of `q^0..q^n` coincide. Asking beyond either
    /// recorded order is an error.
    pub fn agree_to_order(&self, other: &QSeries, n: usize) -> Result<bool> {
        let available = self.order().min(other.order());
        if n > available {
            return Err(Error::OrderExceeded {
                requested: n,
                available,
            });
        }
        Ok(self.coeffs[..=n] == other.coeffs[..=n])
    }

    /// First index where the two series differ, within the shared order.
    pub fn first_difference(&self, other: &QSeries) -> Option<usize> {
        self.coeffs
            .iter()
            .zip(other.coeffs.iter())
            .position(|(a, b)| a != b)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(QSeriesJson::from(self)).expect("series serializes")
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        let raw: QSeriesJson =
            serde_json::from_value(value.clone()).map_err(|e| Error::Parse(e.to_string()))?;
        QSeries::try_from(raw)
    }
}

/// Wire form: `{"order": N, "constant": "a/b", "coeffs": [...]}` where
/// `coeffs[i]` is the coefficient of `q^{i+1}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct QSeriesJson {
    pub order: usize,
    pub constant: String,
    pub coeffs: Vec<String>,
}

impl From<&QSeries> for QSeriesJson {
    fn from(s: &QSeries) -> Self {
        QSeriesJson {
            order: s.order(),
            constant: format_rational(s.constant()),
            coeffs: s.tail().iter().map(format_rational).collect(),
        }
    }
}

impl TryFrom<QSeriesJson> for QSeries {
    type Error = Error;
    fn try_from(raw: QSeriesJson) -> Result<Self> {
        if raw.coeffs.len() != raw.order {
            return Err(Error::Parse(format!(
                "series of order {} lists {} coefficients",
                raw.order,
                raw.coeffs.len()
            )));
        }
        let constant = parse_rational(&raw.constant)?;
        let tail = raw
            .coeffs
            .iter()
            .map(|c| parse_rational(c))
            .collect::<Result<Vec<_>>>()?;
        Ok(QSeries::from_parts(constant, tail))
    }
}

impl Serialize for QSeries {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        QSeriesJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for QSeries {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = QSeriesJson::deserialize(d)?;
        QSeries::try_from(raw).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (n, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let sign = if c < &Rational::zero() { "-" } else { "+" };
            let abs = if c < &Rational::zero() { -c.clone() } else { c.clone() };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let coeff = if abs.is_one() && n > 0 {
                String::new()
            } else if n > 0 {
                format!("{abs}*")
            } else {
                format!("{abs}")
            };
            match n {
                0 => write!(f, "{coeff}")?,
                1 => write!(f, "{coeff}q")?,
                _ => write!(f, "{coeff}q^{n}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(q^{})", self.order() + 1)
    }
}

impl Add for &QSeries {
    type Output = QSeries;
    fn add(self, rhs: &QSeries) -> QSeries {
        let mut out = self.clone();
        out.add_scaled(&Rational::one(), rhs);
        out
    }
}

impl Sub for &QSeries {
    type Output = QSeries;
    fn sub(self, rhs: &QSeries) -> QSeries {
        let mut out = self.clone();
        out.add_scaled(&-Rational::one(), rhs);
        out
    }
}

impl Neg for &QSeries {
    type Output = QSeries;
    fn neg(self) -> QSeries {
        self.scale(&-Rational::one())
    }
}

impl Mul for &QSeries {
    type Output = QSeries;
    fn mul(self, rhs: &QSeries) -> QSeries {
        QSeries::mul(self, rhs)
    }
}

/// `Delta = q prod_{n>=1} (1 - q^n)^24` through `q^order`, by repeated
/// multiplication with `1 - q^n` in integers.
pub fn eta24(order: usize) -> QSeries {
    // prod (1 - q^n)^24 is needed through q^{order-1}
    let m = order.saturating_sub(1);
    let mut p = vec![BigInt::zero(); m + 1];
    p[0] = BigInt::one();
    for n in 1..=m {
        for _ in 0..24 {
            for i in (n..=m).rev() {
                let t = p[i - n].clone();
                p[i] -= t;
            }
        }
    }
    let mut coeffs = vec![Rational::zero(); order + 1];
    for (i, c) in p.into_iter().enumerate() {
        if i + 1 <= order {
            coeffs[i + 1] = Rational::from_integer(c);
        }
    }
    QSeries { coeffs }
}

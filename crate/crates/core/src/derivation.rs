//! The derivation `d = q d/dq` on brackets, at the level of word sums.
//!
//! Every constructed expression is checked against `q d/dq` of the bracket
//! series before it is returned.

use std::collections::HashMap;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::brackets::bracket_series;
use crate::composition::Composition;
use crate::error::{Error, Result};
use crate::exactnum::{binomial_i, Rational};
use crate::quasishuffle::{evaluate, quasi_shuffle, quasi_shuffle_words};
use crate::relation::{Provenance, Relation};
use crate::wordsum::WordSum;

static VERIFICATION_ORDER: AtomicUsize = AtomicUsize::new(120);

/// Order through which derivative expressions are checked on construction.
pub fn verification_order() -> usize {
    VERIFICATION_ORDER.load(Ordering::Relaxed)
}

pub fn set_verification_order(order: usize) {
    VERIFICATION_ORDER.store(order.max(1), Ordering::Relaxed);
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Route {
    /// From the product `[s_1] [s_2]`.
    Len1Split { s1: u32, s2: u32 },
    Len2ClosedForm,
    GeneralExtraction,
}

/// An expression for `d[source]` in terms of brackets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivativeExpression {
    pub source: Composition,
    pub expression: WordSum,
    pub route: Route,
}

impl DerivativeExpression {
    fn verified(source: Composition, expression: WordSum, route: Route) -> Result<Self> {
        let e = DerivativeExpression {
            source,
            expression,
            route,
        };
        e.verify(verification_order())?;
        Ok(e)
    }

    /// Compares with `q d/dq [source]` through `q^order`.
    pub fn verify(&self, order: usize) -> Result<()> {
        let lhs = bracket_series(&self.source, order).q_d_dq();
        let rhs = evaluate(&self.expression, order);
        match lhs.first_difference(&rhs) {
            None => Ok(()),
            Some(n) => Err(Error::Verification(format!(
                "expression for d{} differs at q^{n}",
                self.source
            ))),
        }
    }
}

fn r(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

fn word(parts: Vec<u32>) -> Composition {
    Composition::from_parts_unchecked(parts)
}

/// `d[s]` with `s = s1 + s2 - 2` from the product `[s1] [s2]`:
/// `C(s, s1-1) d[s] / s = [s1][s2] + C(s, s1-1) [s+1]
///   - sum_{a+b=s+2} (C(a-1, s1-1) + C(a-1, s2-1)) [a,b]`.
pub fn d_len1(s1: u32, s2: u32) -> Result<DerivativeExpression> {
    if s1 == 0 || s2 == 0 || s1 + s2 <= 2 {
        return Err(Error::Unsupported(format!(
            "d_len1 needs positive parts with s1 + s2 > 2, got ({s1}, {s2})"
        )));
    }
    let s = s1 + s2 - 2;
    let c = Rational::from_integer(binomial_i(i64::from(s), i64::from(s1) - 1));
    let mut e = quasi_shuffle_words(&word(vec![s1]), &word(vec![s2]));
    e.add_term(word(vec![s + 1]), c.clone());
    for a in 1..=s + 1 {
        let b = s + 2 - a;
        let k = binomial_i(i64::from(a) - 1, i64::from(s1) - 1)
            + binomial_i(i64::from(a) - 1, i64::from(s2) - 1);
        e.add_term(word(vec![a, b]), -Rational::from_integer(k));
    }
    let e = e.scale(&(r(i64::from(s)) / c));
    DerivativeExpression::verified(word(vec![s]), e, Route::Len1Split { s1, s2 })
}

/// The closed form for `d[s1, s2]`.
pub fn d_len2(s1: u32, s2: u32) -> Result<DerivativeExpression> {
    if s1 == 0 || s2 == 0 {
        return Err(Error::InvalidComposition(format!("[{s1},{s2}]")));
    }
    let (r1, r2) = (r(i64::from(s1)), r(i64::from(s2)));
    let mut e = quasi_shuffle_words(&word(vec![2]), &word(vec![s1, s2]));
    e.add_term(word(vec![s1 + 1, s2, 1]), -r1.clone());
    e.add_term(word(vec![s1, s2 + 1, 1]), -r2.clone());
    e.add_term(word(vec![s1, s2, 2]), -Rational::one());
    for a in 1..=s1 + 1 {
        e.add_term(word(vec![a, s1 + 2 - a, s2]), -r(i64::from(a) - 1));
    }
    for a in 1..=s2 {
        e.add_term(word(vec![s1 + 1, a, s2 + 1 - a]), -r1.clone());
    }
    for a in 1..=s2 + 1 {
        e.add_term(word(vec![s1, a, s2 + 2 - a]), -r(i64::from(a) - 1));
    }
    e.add_term(word(vec![s1 + 1, s2]), r1 * r(2));
    e.add_term(word(vec![s1, s2 + 1]), r2);
    DerivativeExpression::verified(word(vec![s1, s2]), e, Route::Len2ClosedForm)
}

/// `d[s]` for any length, extracted from the product `T(X) T(Y_1..Y_l)` of
/// generating series by differentiating in `X` at `X = 0`:
///
/// `d[s] = [2]*[s] - D T(X+Y_1,..,X+Y_l,X)
///        - sum_j D T(X+Y_1,..,X+Y_j,Y_j,..,Y_l)
///        + sum_j D T(X+Y_1,..,X+Y_j,Y_{j+1},..,Y_l)`.
///
/// Each `D T(...)` is computed by letting `d/dX` hit one of the slots that
/// carry `X`, which raises that part by one with multiplicity (old part).
pub fn d_general_expression(c: &Composition) -> WordSum {
    let s = c.parts();
    let l = s.len();
    if l == 0 {
        return WordSum::zero();
    }
    let with_bump = |i: usize| -> Vec<u32> {
        let mut v = s.to_vec();
        v[i] += 1;
        v
    };
    let mut e = quasi_shuffle(&WordSum::word(word(vec![2])), &WordSum::word(c.clone()));

    // T(X+Y_1, ..., X+Y_l, X)
    for i in 0..l {
        let mut v = with_bump(i);
        v.push(1);
        e.add_term(word(v), -r(i64::from(s[i])));
    }
    let mut v = s.to_vec();
    v.push(2);
    e.add_term(word(v), -Rational::one());

    for j in 0..l {
        // T(X+Y_1, ..., X+Y_j, Y_j, ..., Y_l): the slots j and j+1 share Y_j
        for i in 0..j {
            let bumped = with_bump(i);
            for a in 1..=s[j] {
                let mut v = bumped[..j].to_vec();
                v.push(a);
                v.push(s[j] + 1 - a);
                v.extend_from_slice(&s[j + 1..]);
                e.add_term(word(v), -r(i64::from(s[i])));
            }
        }
        for a in 2..=s[j] + 1 {
            let mut v = s[..j].to_vec();
            v.push(a);
            v.push(s[j] + 2 - a);
            v.extend_from_slice(&s[j + 1..]);
            e.add_term(word(v), -r(i64::from(a) - 1));
        }
        // T(X+Y_1, ..., X+Y_j, Y_{j+1}, ..., Y_l)
        for i in 0..=j {
            e.add_term(word(with_bump(i)), r(i64::from(s[i])));
        }
    }
    e
}

fn general_memo() -> &'static RwLock<HashMap<Composition, DerivativeExpression>> {
    static MEMO: OnceLock<RwLock<HashMap<Composition, DerivativeExpression>>> = OnceLock::new();
    MEMO.get_or_init(|| RwLock::new(HashMap::new()))
}

/// `d[c]` by general extraction, verified and memoized.
pub fn d_general(c: &Composition) -> Result<DerivativeExpression> {
    if let Some(hit) = general_memo().read().unwrap().get(c) {
        return Ok(hit.clone());
    }
    let e = DerivativeExpression::verified(c.clone(), d_general_expression(c), Route::GeneralExtraction)?;
    general_memo().write().unwrap().insert(c.clone(), e.clone());
    Ok(e)
}

/// `d` applied termwise to a word sum, through the general extraction.
pub fn derive(w: &WordSum) -> Result<WordSum> {
    let mut out = WordSum::zero();
    for (c, coeff) in w.iter() {
        if c.is_empty() {
            continue;
        }
        out.add_scaled(coeff, &d_general(c)?.expression);
    }
    Ok(out)
}

/// `floor(k/2) - 1` relations of weight `k` from the different expressions
/// `d_len1(s1, k - s1)` of `d[k-2]`, `1 <= s1 <= k/2`.
pub fn split_relations(k: u32) -> Result<Vec<Relation>> {
    if k < 4 {
        return Ok(Vec::new());
    }
    let exprs = (1..=k / 2)
        .map(|s1| d_len1(s1, k - s1))
        .collect::<Result<Vec<_>>>()?;
    let order = verification_order();
    exprs[1..]
        .iter()
        .map(|e| {
            let body = &exprs[0].expression - &e.expression;
            Relation::proven(&body, Provenance::DerivationSplit, order)
        })
        .collect()
}

/// The relation `d(w) v + w d(v) - d(w v) = 0`, every derivative taken by
/// general extraction.
pub fn leibniz_relations(w: &Composition, v: &Composition) -> Result<Relation> {
    let body = leibniz_body(&WordSum::word(w.clone()), &WordSum::word(v.clone()))?;
    Relation::proven(&body, Provenance::Leibniz, verification_order())
}

/// `d(w) * v + w * d(v) - d(w * v)` for word sums.
pub fn leibniz_body(w: &WordSum, v: &WordSum) -> Result<WordSum> {
    let mut body = quasi_shuffle(&derive(w)?, v);
    body.add_scaled(&Rational::one(), &quasi_shuffle(w, &derive(v)?));
    body.add_scaled(&-Rational::one(), &derive(&quasi_shuffle(w, v))?);
    Ok(body)
}

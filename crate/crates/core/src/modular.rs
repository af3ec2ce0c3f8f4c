//! Eisenstein series, the discriminant `Delta` and their bracket expressions.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::brackets::{bracket_series, divisor_power_sums, multiple_divisor_sum};
use crate::composition::Composition;
use crate::error::{Error, Result};
use crate::exactnum::{bernoulli, factorial, int, rat, Rational};
use crate::linrel::matrix::ExactMatrix;
use crate::qseries::{eta24, QSeries};
use crate::quasishuffle::{evaluate, quasi_shuffle};
use crate::relation::{Provenance, Relation};
use crate::wordsum::WordSum;

/// `G_k = -B_k / (2 k!) + [k]` for even `k >= 2`.
#[derive(Debug, Clone, PartialEq)]
pub struct EisensteinSeries {
    pub weight: u32,
    pub series: QSeries,
}

impl EisensteinSeries {
    /// The constant term `-B_k / (2 k!)`.
    pub fn constant(k: u32) -> Rational {
        -bernoulli(k as usize) / Rational::from_integer(2 * factorial(k as usize))
    }

    /// `G_k` as a word sum: the constant on the empty word plus `[k]`.
    pub fn word_sum(k: u32) -> Result<WordSum> {
        check_even(k)?;
        Ok(WordSum::from_terms([
            (Composition::empty(), Self::constant(k)),
            (Composition::new(vec![k])?, Rational::one()),
        ]))
    }
}

fn check_even(k: u32) -> Result<()> {
    if k < 2 || k % 2 == 1 {
        return Err(Error::InvalidWeight(k));
    }
    Ok(())
}

/// `G_k` through `q^order`, with tail `sigma_{k-1}(n) / (k-1)!` computed from
/// divisor sums directly.
pub fn eisenstein(k: u32, order: usize) -> Result<EisensteinSeries> {
    check_even(k)?;
    let sigma = divisor_power_sums(k, order);
    let den = factorial(k as usize - 1);
    let tail = sigma[1..]
        .iter()
        .map(|s| Rational::new(s.clone(), den.clone()))
        .collect();
    Ok(EisensteinSeries {
        weight: k,
        series: QSeries::from_parts(EisensteinSeries::constant(k), tail),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityCheck {
    pub identity: String,
    pub order: usize,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_failing_coefficient: Option<usize>,
}

impl IdentityCheck {
    fn compare(identity: &str, lhs: &QSeries, rhs: &QSeries) -> Self {
        let diff = lhs - rhs;
        let first = diff.valuation();
        IdentityCheck {
            identity: identity.to_string(),
            order: lhs.order().min(rhs.order()),
            pass: first.is_none(),
            first_failing_coefficient: first,
        }
    }
}

/// Report JSON: a list of `{identity, order, pass, first_failing_coefficient?}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ModularReport {
    pub checks: Vec<IdentityCheck>,
}

impl ModularReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("reports serialize")
    }

    fn into_result(self) -> Result<Self> {
        match self.checks.iter().find(|c| !c.pass) {
            None => Ok(self),
            Some(c) => Err(Error::Verification(format!(
                "{} fails at q^{}",
                c.identity,
                c.first_failing_coefficient.unwrap_or_default()
            ))),
        }
    }
}

/// All checks without failing on a mismatch.
pub fn quasi_modular_identity_checks(order: usize) -> Result<ModularReport> {
    if order < 20 {
        return Err(Error::OrderExceeded {
            requested: 20,
            available: order,
        });
    }
    let g = |k| eisenstein(k, order).map(|e| e.series);
    let (g2, g4, g6, g8) = (g(2)?, g(4)?, g(6)?, g(8)?);
    let lin = |terms: &[(Rational, &QSeries)]| {
        let mut out = QSeries::zero(order);
        for (c, s) in terms {
            out.add_scaled(c, s);
        }
        out
    };
    let g2g2 = g2.mul(&g2);
    let g2g4 = g2.mul(&g4);
    let g2g6 = g2.mul(&g6);
    let g4g4 = g4.mul(&g4);
    let mut checks = vec![
        IdentityCheck::compare(
            "dG2 = 5 G4 - 2 G2^2",
            &g2.q_d_dq(),
            &lin(&[(int(5), &g4), (int(-2), &g2g2)]),
        ),
        IdentityCheck::compare(
            "dG4 = 14 G6 - 8 G2 G4",
            &g4.q_d_dq(),
            &lin(&[(int(14), &g6), (int(-8), &g2g4)]),
        ),
        IdentityCheck::compare(
            "dG6 = 20 G8 - 12 G2 G6",
            &g6.q_d_dq(),
            &lin(&[(int(20), &g8), (int(-12), &g2g6)]),
        ),
        IdentityCheck::compare(
            "dG6 = 120/7 G4^2 - 12 G2 G6",
            &g6.q_d_dq(),
            &lin(&[(rat(120, 7), &g4g4), (int(-12), &g2g6)]),
        ),
        IdentityCheck::compare("G4^2 = 7/6 G8", &g4g4, &g8.scale(&rat(7, 6))),
    ];
    let r8 = relwt8_body();
    checks.push(IdentityCheck::compare(
        "[8] = 1/40 [4] - 1/252 [2] + 12 [4,4]",
        &evaluate(&r8, order),
        &QSeries::zero(order),
    ));
    let (lhs, rhs) = deltal2_sides(order);
    checks.push(IdentityCheck::compare(
        "-Delta / (2^6 5 691) = 168 [5,7] + 150 [7,5] + 28 [9,3] + ...",
        &lhs,
        &rhs,
    ));
    Ok(ModularReport { checks })
}

/// The derivative identities, `G_4^2 = 7/6 G_8` and the bracket relations in
/// weights 8 and 12, checked exactly through `q^order`. Any failure is an
/// error.
pub fn verify_quasi_modular_identities(order: usize) -> Result<ModularReport> {
    quasi_modular_identity_checks(order)?.into_result()
}

/// `G_4 * G_4 - 7/6 G_8` expanded with the quasi-shuffle product, constant
/// dropped (it cancels).
pub fn relwt8_from_product() -> Result<WordSum> {
    let g4 = EisensteinSeries::word_sum(4)?;
    let g8 = EisensteinSeries::word_sum(8)?;
    let mut body = quasi_shuffle(&g4, &g4);
    body.add_scaled(&rat(-7, 6), &g8);
    debug_assert!(body.coeff(&Composition::empty()).is_zero());
    Ok(body.filter(|c| !c.is_empty()))
}

/// `[8] - 1/40 [4] + 1/252 [2] - 12 [4,4]`.
pub fn relwt8_body() -> WordSum {
    WordSum::parse("[8] - 1/40[4] + 1/252[2] - 12[4,4]").expect("valid word sum")
}

/// The weight-8 relation, derived from `G_4^2 = 7/6 G_8`.
pub fn relwt8(order: usize) -> Result<Relation> {
    Relation::proven(&relwt8_from_product()?, Provenance::Modular, order)
}

/// `2^6 * 5 * 691`.
pub fn deltal2_scale() -> BigInt {
    BigInt::from(64 * 5 * 691)
}

/// `168 [5,7] + 150 [7,5] + 28 [9,3] + ... - 5197/691 [12]`, which equals
/// `-Delta / (2^6 5 691)`.
pub fn deltal2_body() -> WordSum {
    WordSum::parse(
        "168[5,7] + 150[7,5] + 28[9,3] + 1/1408[2] - 83/14400[4] + 187/6048[6] - 7/120[8] - 5197/691[12]",
    )
    .expect("valid word sum")
}

fn deltal2_sides(order: usize) -> (QSeries, QSeries) {
    let lhs = eta24(order).scale(&Rational::new(-BigInt::one(), deltal2_scale()));
    (lhs, evaluate(&deltal2_body(), order))
}

/// The pairs `(a, b)` for which `Delta` has a representation through `[a]`,
/// `[b]` and the brackets `[m, n]` with `m + n = 12`.
pub const DELTA_PAIRS: [(u32, u32); 6] = [(2, 4), (4, 6), (6, 8), (8, 10), (10, 11), (11, 12)];

#[derive(Debug, Clone, PartialEq)]
pub struct DeltaRepresentation {
    pub a: u32,
    pub b: u32,
    pub coeff_a: Rational,
    pub coeff_b: Rational,
    /// `Delta` as a word sum.
    pub body: WordSum,
    pub order: usize,
}

impl DeltaRepresentation {
    /// `d_{m,n}` for `m + n = 12`.
    pub fn length_two(&self) -> Vec<(Composition, Rational)> {
        self.body
            .iter()
            .filter(|(c, _)| c.length() == 2)
            .map(|(c, x)| (c.clone(), x.clone()))
            .collect()
    }
}

/// `(2^b + 50) / (2^b - 2^a)`: the coefficient of `sum sigma_{a-1}(n) q^n`,
/// which is `(a-1)! [a]`.
pub fn delta_length_one_coefficient(a: u32, b: u32) -> Rational {
    let pa = BigInt::one() << a;
    let pb = BigInt::one() << b;
    Rational::new(&pb + 50, pb - pa)
}

/// Solves `M x = y` exactly. Fails when the system is inconsistent or has
/// more than one solution.
pub fn solve_unique(columns: &[Vec<Rational>], target: &[Rational]) -> Result<Vec<Rational>> {
    let n = columns.len();
    let rows: Vec<Vec<Rational>> = (0..target.len())
        .map(|i| {
            let mut r: Vec<Rational> = columns.iter().map(|c| c[i].clone()).collect();
            r.push(target[i].clone());
            r
        })
        .collect();
    let (r, pivots) = ExactMatrix::from_rows(rows).rref();
    if pivots.contains(&n) {
        return Err(Error::LinearSystem("is inconsistent".into()));
    }
    if pivots.len() < n {
        return Err(Error::LinearSystem(format!(
            "has {} free parameters",
            n - pivots.len()
        )));
    }
    Ok((0..n).map(|i| r.get(i, n).clone()).collect())
}

/// Writes `Delta` through `[a]`, `[b]` and `[m, n]` with `m + n = 12` by an
/// exact linear solve on the first `order` coefficients, then checks the
/// length-one coefficients against `(2^b + 50)/(2^b - 2^a)` and
/// `(2^a + 50)/(2^a - 2^b)`. Those two numbers are the coefficients of the
/// divisor sum series `sum sigma_{a-1}(n) q^n = (a-1)! [a]`, so `coeff_a`
/// is `(a-1)!` times the first.
pub fn delta_representation(a: u32, b: u32, order: usize) -> Result<DeltaRepresentation> {
    if !DELTA_PAIRS.contains(&(a, b)) {
        return Err(Error::Unsupported(format!("no Delta representation for ({a}, {b})")));
    }
    if order < 60 {
        return Err(Error::OrderExceeded {
            requested: 60,
            available: order,
        });
    }
    let mut cols: Vec<Composition> = vec![Composition::new(vec![a])?, Composition::new(vec![b])?];
    for m in 1..12 {
        cols.push(Composition::new(vec![m, 12 - m])?);
    }
    let series: Vec<Vec<Rational>> = cols
        .iter()
        .map(|c| bracket_series(c, order).tail().to_vec())
        .collect();
    let delta = eta24(order);
    let x = solve_unique(&series, delta.tail())?;
    let body = WordSum::from_terms(cols.into_iter().zip(x.iter().cloned()));
    let sigma_a = &x[0] / Rational::from_integer(factorial(a as usize - 1));
    let sigma_b = &x[1] / Rational::from_integer(factorial(b as usize - 1));
    let rep = DeltaRepresentation {
        a,
        b,
        coeff_a: x[0].clone(),
        coeff_b: x[1].clone(),
        body,
        order,
    };
    if sigma_a != delta_length_one_coefficient(a, b) || sigma_b != delta_length_one_coefficient(b, a) {
        return Err(Error::Verification(format!(
            "length-one coefficients of the ({a}, {b}) representation are {sigma_a} and {sigma_b} on divisor sums"
        )));
    }
    if !(&evaluate(&rep.body, order) - &delta).is_zero() {
        return Err(Error::Verification(format!("({a}, {b}) representation has a residual")));
    }
    Ok(rep)
}

/// The weights `lambda_i` (summing to 1) with
/// `sum_i lambda_i rep_i = -2^6 5 691 * deltal2_body()`.
pub fn deltal2_combination(reps: &[DeltaRepresentation]) -> Result<Vec<Rational>> {
    let target = deltal2_body().scale(&Rational::from_integer(-deltal2_scale()));
    let mut terms: Vec<Composition> = target.compositions().cloned().collect();
    for r in reps {
        terms.extend(r.body.compositions().cloned());
    }
    terms.sort();
    terms.dedup();
    let mut columns: Vec<Vec<Rational>> = reps
        .iter()
        .map(|r| terms.iter().map(|c| r.body.coeff(c)).collect())
        .collect();
    let mut rhs: Vec<Rational> = terms.iter().map(|c| target.coeff(c)).collect();
    for col in &mut columns {
        col.push(Rational::one());
    }
    rhs.push(Rational::one());
    solve_unique(&columns, &rhs)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CongruenceCheck {
    pub n: usize,
    pub tau: String,
    pub sigma11: String,
    pub pass: bool,
}

/// `tau(n) = sigma_11(n) mod 691` for `1 <= n <= order`, with `tau` from the
/// eta product and `sigma_11` by enumeration.
pub fn tau_congruence(order: usize) -> Vec<CongruenceCheck> {
    let delta = eta24(order);
    let p = BigInt::from(691);
    (1..=order)
        .map(|n| {
            let tau = delta.coefficients()[n].to_integer();
            let sigma = multiple_divisor_sum(&[11], n as u64);
            let pass = (&tau - &sigma).mod_floor(&p).is_zero();
            CongruenceCheck {
                n,
                tau: tau.to_string(),
                sigma11: sigma.to_string(),
                pass,
            }
        })
        .collect()
}

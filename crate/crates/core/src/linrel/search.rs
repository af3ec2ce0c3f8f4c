//! Relations among brackets: numerical candidates from kernels of coefficient
//! matrices, and proven relations built from derivatives and products.

use std::collections::{BTreeMap, BTreeSet};

use log::{debug, warn};
use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;

use crate::composition::Composition;
use crate::derivation::{derive, leibniz_body, split_relations, verification_order};
use crate::error::Result;
use crate::exactnum::{compositions, filtration_generators, Rational};
use crate::brackets::bracket_series_batch;
use crate::linrel::dims::Space;
use crate::linrel::matrix::{integer_row, EchelonBasis, ExactMatrix};
use crate::quasishuffle::{decompose_in_one, quasi_shuffle};
use crate::relation::{Provenance, Relation};
use crate::wordsum::WordSum;

/// Kernel of the coefficient matrix whose columns are `comps` (through
/// `q^order`), one word sum per basis vector.
fn kernel_relations(comps: &[Composition], order: usize) -> Result<Vec<Relation>> {
    if comps.is_empty() {
        return Ok(Vec::new());
    }
    // Columns largest first, so the leading entry of each reduced kernel
    // vector sits on its largest term.
    let mut cols = comps.to_vec();
    cols.sort();
    cols.reverse();
    let series = bracket_series_batch(&cols, order);
    let mut m = ExactMatrix::zeros(order, cols.len());
    for (j, s) in series.iter().enumerate() {
        for (i, x) in s.tail().iter().enumerate() {
            if !num_traits::Zero::is_zero(x) {
                m.set(i, j, x.clone());
            }
        }
    }
    m.kernel_basis()
        .into_iter()
        .map(|v| {
            let body = WordSum::from_terms(cols.iter().cloned().zip(v));
            Relation::candidate(&body, order)
        })
        .collect()
}

/// Basis of the numerically observed relations among the generators of
/// `Fil_{k,l}`, each normalized at its largest term.
pub fn relation_search(space: Space, k: u32, l: u32, order: usize) -> Result<Vec<Relation>> {
    let gens = filtration_generators(k, l, space.admissible_only());
    if order < 2 * gens.len() {
        warn!("order {order} is below twice the {} generators; expect spurious candidates", gens.len());
    }
    kernel_relations(&gens, order)
}

/// Relations among the brackets of weight exactly `k` and length exactly `l`.
pub fn homogeneous_relation_search(k: u32, l: u32, admissible: bool, order: usize) -> Result<Vec<Relation>> {
    kernel_relations(&compositions(k, l, admissible), order)
}

/// Coefficients of `(1 - x^2 + x^4) / (1 - 2x^2 - 2x^3)` through `x^max_k`.
pub fn conjectured_dprime_series(max_k: usize) -> Vec<BigInt> {
    let num = |n: usize| -> i64 {
        match n {
            0 | 4 => 1,
            2 => -1,
            _ => 0,
        }
    };
    let mut c: Vec<BigInt> = Vec::with_capacity(max_k + 1);
    for n in 0..=max_k {
        let mut v = BigInt::from(num(n));
        if n >= 2 {
            v += 2 * &c[n - 2];
        }
        if n >= 3 {
            v += 2 * &c[n - 3];
        }
        c.push(v);
    }
    c
}

#[derive(Debug, Clone, Serialize)]
pub struct SeriesCheck {
    pub k: usize,
    pub expected: String,
    pub computed: Option<u64>,
    pub agrees: Option<bool>,
}

/// Compares computed `d'_k` with the conjectured series, term by term.
pub fn conjecture_series_check(computed: &[Option<u64>]) -> Vec<SeriesCheck> {
    let expected = conjectured_dprime_series(computed.len().saturating_sub(1));
    computed
        .iter()
        .zip(expected)
        .enumerate()
        .map(|(k, (c, e))| SeriesCheck {
            k,
            expected: e.to_string(),
            computed: *c,
            agrees: c.map(|v| BigInt::from(v) == e),
        })
        .collect()
}

/// Independent proven relations among admissible brackets, grouped by weight.
#[derive(Debug, Clone, Default)]
pub struct RelationPool {
    by_weight: BTreeMap<u32, Vec<Relation>>,
    max_length: u32,
}

impl RelationPool {
    pub fn relations(&self, k: u32) -> &[Relation] {
        self.by_weight.get(&k).map_or(&[], Vec::as_slice)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Relation> {
        self.by_weight.values().flatten()
    }

    pub fn len(&self) -> usize {
        self.by_weight.values().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Number of independent images in `gr_{k,l}(MDA)` of relations of weight
    /// `k` and length at most `l`: the `(k,l)`-parts of their bodies.
    pub fn graded_count(&self, k: u32, l: u32) -> usize {
        let mut basis = EchelonBasis::new();
        let cols = compositions(k, l, true);
        if cols.is_empty() {
            return 0;
        }
        for r in self.relations(k) {
            if r.max_length() as u32 > l {
                continue;
            }
            let row: Vec<Rational> = cols.iter().map(|c| r.body().coeff(c)).collect();
            if row.iter().all(num_traits::Zero::is_zero) {
                continue;
            }
            basis.insert(integer_row(&row));
        }
        basis.rank()
    }

    /// `R(k,l)` for `l <= min(k, max_length)`.
    pub fn graded_counts(&self, max_k: u32) -> BTreeMap<(u32, u32), usize> {
        let mut out = BTreeMap::new();
        for k in 1..=max_k {
            for l in 1..=k.min(self.max_length) {
                out.insert((k, l), self.graded_count(k, l));
            }
        }
        out
    }
}

/// Adds relations of one weight while keeping them linearly independent.
struct WeightAccumulator {
    index: BTreeMap<Composition, usize>,
    basis: EchelonBasis,
    kept: Vec<Relation>,
}

impl WeightAccumulator {
    fn new(k: u32, max_l: u32) -> Self {
        let mut terms: Vec<Composition> = Vec::new();
        for w in 1..=k {
            for l in 1..=max_l.min(w) {
                terms.extend(compositions(w, l, true));
            }
        }
        // Largest terms first, so that pivots prefer the top graded part.
        terms.sort();
        terms.reverse();
        WeightAccumulator {
            index: terms.into_iter().enumerate().map(|(i, c)| (c, i)).collect(),
            basis: EchelonBasis::new(),
            kept: Vec::new(),
        }
    }

    fn offer(&mut self, body: &WordSum, provenance: Provenance, order: usize) {
        if body.is_zero() {
            return;
        }
        let mut row = vec![Rational::from_integer(0.into()); self.index.len()];
        for (c, x) in body.iter() {
            match self.index.get(c) {
                Some(&i) => row[i] = x.clone(),
                None => return,
            }
        }
        let mut trial = self.basis.clone();
        if !trial.insert(integer_row(&row)) {
            return;
        }
        match Relation::proven(body, provenance, order) {
            Ok(r) => {
                self.basis = trial;
                self.kept.push(r);
            }
            Err(e) => warn!("dropping {provenance} candidate: {e}"),
        }
    }
}

fn admissible_only(w: &WordSum) -> bool {
    w.compositions().all(Composition::is_admissible)
}

/// Proven relations among admissible brackets of weight `<= max_k` whose
/// terms have length `<= max_l`, gathered from:
///
/// * the different length-one expressions of one derivative,
/// * the Leibniz rule for products of two brackets,
/// * products of known relations with brackets,
/// * derivatives of known relations,
/// * the coefficients of powers of `[1]` in the decomposition of a relation
///   that involves `[1, ...]` terms.
///
/// Every relation is checked through `q^order` before it is kept.
pub fn proven_relation_pool(max_k: u32, max_l: u32, order: usize) -> Result<RelationPool> {
    let mut pool = RelationPool {
        by_weight: BTreeMap::new(),
        max_length: max_l,
    };
    for k in 4..=max_k {
        let mut acc = WeightAccumulator::new(k, max_l);
        let mut candidates: Vec<(WordSum, Provenance)> = Vec::new();
        let fits = |w: &WordSum| w.max_length() as u32 <= max_l;

        for r in split_relations(k)? {
            candidates.push((r.body().clone(), Provenance::DerivationSplit));
        }

        let mut leibniz = Vec::new();
        for kw in 1..=(k - 2) / 2 {
            let kv = k - 2 - kw;
            for lw in 1..=kw {
                for lv in 1..=kv {
                    if lw + lv + 1 > max_l {
                        continue;
                    }
                    for w in compositions(kw, lw, false) {
                        for v in compositions(kv, lv, false) {
                            if kw == kv && w > v {
                                continue;
                            }
                            leibniz.push((w.clone(), v));
                        }
                    }
                }
            }
        }
        let leibniz: Vec<WordSum> = leibniz
            .par_iter()
            .map(|(w, v)| leibniz_body(&WordSum::word(w.clone()), &WordSum::word(v.clone())))
            .collect::<Result<Vec<_>>>()?;
        candidates.extend(leibniz.into_iter().map(|b| (b, Provenance::Leibniz)));

        let lower: Vec<&Relation> = (4..k).flat_map(|j| pool.relations(j)).collect();
        let products: Vec<WordSum> = lower
            .par_iter()
            .flat_map_iter(|r| {
                let kg = k - r.weight();
                let room = max_l.saturating_sub(r.max_length() as u32);
                (1..=room.min(kg))
                    .flat_map(move |lg| compositions(kg, lg, true))
                    .map(move |g| quasi_shuffle(r.body(), &WordSum::word(g)))
                    .collect::<Vec<_>>()
            })
            .collect();
        candidates.extend(products.into_iter().map(|b| (b, Provenance::RelationProduct)));

        for r in pool.relations(k - 2) {
            if r.max_length() as u32 + 1 <= max_l {
                candidates.push((derive(r.body())?, Provenance::RelationDerivative));
            }
        }

        for (body, prov) in candidates {
            if !fits(&body) {
                continue;
            }
            if admissible_only(&body) {
                acc.offer(&body, prov, order);
                continue;
            }
            // [1] is algebraically independent over MDA, so every coefficient
            // of the decomposition in powers of [1] vanishes on its own.
            let poly = decompose_in_one(&body);
            for coeff in poly.powers() {
                if !coeff.is_zero() && coeff.weight() == k && fits(coeff) && admissible_only(coeff) {
                    acc.offer(coeff, prov, order);
                }
            }
        }
        debug!("weight {k}: {} independent proven relations", acc.kept.len());
        pool.by_weight.insert(k, acc.kept);
    }
    Ok(pool)
}

/// Default verification order for proven relations.
pub fn default_pool_order() -> usize {
    verification_order()
}

/// The weight-`k` compositions that occur as the largest term of some
/// relation in the pool.
pub fn leading_terms(pool: &RelationPool, k: u32) -> BTreeSet<Composition> {
    pool.relations(k)
        .iter()
        .filter_map(|r| r.body().leading_term().map(|(c, _)| c.clone()))
        .collect()
}

/// The integer vector of a word sum over a fixed list of compositions.
pub fn coordinates(w: &WordSum, cols: &[Composition]) -> Vec<Rational> {
    cols.iter().map(|c| w.coeff(c)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn series_start() {
        let s: Vec<i64> = conjectured_dprime_series(11)
            .iter()
            .map(|x| i64::try_from(x).unwrap())
            .collect();
        assert_eq!(s, vec![1, 0, 1, 2, 3, 6, 10, 18, 32, 56, 100, 176]);
        assert_eq!(conjectured_dprime_series(16)[16], BigInt::from(3056));
    }

    #[test]
    fn weight_four_kernel_is_rel4() {
        let rels = relation_search(Space::Mda, 4, 2, 60).unwrap();
        assert_eq!(rels.len(), 1);
        let rel4 = WordSum::parse("[4] - 2[2,2] + 2[3,1] - [3] + 1/3[2]").unwrap();
        assert!(rels[0].equivalent_to(&rel4));
    }

    #[test]
    fn small_pool_counts() {
        let pool = proven_relation_pool(5, 3, 40).unwrap();
        assert_eq!(pool.graded_count(4, 2), 1);
        assert_eq!(pool.graded_count(5, 2), 1);
        assert_eq!(pool.graded_count(5, 3), 1);
        assert_eq!(pool.graded_count(4, 3), 0);
    }
}

//! Multiple divisor sums and bracket series.
//!
//! `[s_1,...,s_l] = sum_n sigma_{s_1-1,...,s_l-1}(n) q^n / prod (s_j-1)!`.
//! Two independent algorithms are provided; [`bracket_series`] is the one the
//! rest of the crate uses and [`bracket_series_oracle`] exists to check it.

use std::collections::HashMap;
use std::sync::{OnceLock, RwLock};

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::composition::Composition;
use crate::exactnum::{binomial_i, eulerian_polynomial, factorial, Rational};
use crate::qseries::QSeries;

/// `sigma_{r_1..r_l}(n)`: sum of `v_1^{r_1}...v_l^{r_l}` over
/// `u_1 v_1 + ... + u_l v_l = n` with `u_1 > ... > u_l > 0`.
///
/// Plain enumeration, meant for small `n` and as a reference value.
pub fn multiple_divisor_sum(r: &[u32], n: u64) -> BigInt {
    fn rec(r: &[u32], remaining: u64, u_max: u64) -> BigInt {
        let Some((&r0, rest)) = r.split_first() else {
            return if remaining == 0 { BigInt::one() } else { BigInt::zero() };
        };
        let l = r.len() as u64;
        let mut total = BigInt::zero();
        // u_1 > u_2 > ... > u_l >= 1 needs u_1 >= l
        for u in l..=u_max.min(remaining) {
            // the remaining parts use at least (l-1) l / 2
            let min_rest = (l - 1) * l / 2;
            let mut v = 1;
            while u * v + min_rest <= remaining {
                let sub = rec(rest, remaining - u * v, u - 1);
                if !sub.is_zero() {
                    total += num_traits::pow(BigInt::from(v), r0 as usize) * sub;
                }
                v += 1;
            }
        }
        total
    }
    if n == 0 {
        return BigInt::from(u8::from(r.is_empty()));
    }
    rec(r, n, n)
}

/// `z P_{s-1}(z) / (1-z)^s`, which equals `sum_{m>0} m^{s-1} z^m`. Dividing by
/// `(s-1)!` gives the normalized polylogarithm at `1-s`.
#[derive(Debug, Clone)]
pub struct EulerianKernel {
    s: u32,
    eulerian: Vec<BigInt>,
}

impl EulerianKernel {
    pub fn new(s: u32) -> Self {
        assert!(s >= 1, "kernel index must be positive");
        EulerianKernel {
            s,
            eulerian: eulerian_polynomial(s - 1).coefficients().to_vec(),
        }
    }

    pub fn index(&self) -> u32 {
        self.s
    }

    /// Coefficient of `z^m` in `z P_{s-1}(z)/(1-z)^s`, expanded from the
    /// Eulerian numbers and the binomial series of `(1-z)^{-s}`.
    pub fn numerator_coefficient(&self, m: u64) -> BigInt {
        if m == 0 {
            return BigInt::zero();
        }
        let s = i64::from(self.s);
        let m = m as i64;
        self.eulerian
            .iter()
            .enumerate()
            .fold(BigInt::zero(), |acc, (i, a)| {
                let e = m - 1 - i as i64;
                if e < 0 {
                    acc
                } else {
                    acc + a * binomial_i(e + s - 1, s - 1)
                }
            })
    }

    /// Coefficients of `z^0..z^m_max` divided by `(s-1)!`.
    pub fn expansion(&self, m_max: u64) -> Vec<Rational> {
        let den = factorial(self.s as usize - 1);
        (0..=m_max)
            .map(|m| Rational::new(self.numerator_coefficient(m), den.clone()))
            .collect()
    }
}

trait Cell: Clone + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn power(base: u64, exp: u32) -> Option<Self>;
    fn is_zero(&self) -> bool;
    fn mul_add(&mut self, a: &Self, b: &Self) -> bool;
    fn add(&mut self, a: &Self) -> bool;
    fn into_bigint(self) -> BigInt;
}

impl Cell for u128 {
    fn zero() -> Self {
        0
    }
    fn one() -> Self {
        1
    }
    fn power(base: u64, exp: u32) -> Option<Self> {
        u128::from(base).checked_pow(exp)
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn mul_add(&mut self, a: &Self, b: &Self) -> bool {
        match a.checked_mul(*b).and_then(|p| self.checked_add(p)) {
            Some(v) => {
                *self = v;
                true
            }
            None => false,
        }
    }
    fn add(&mut self, a: &Self) -> bool {
        match self.checked_add(*a) {
            Some(v) => {
                *self = v;
                true
            }
            None => false,
        }
    }
    fn into_bigint(self) -> BigInt {
        BigInt::from(self)
    }
}

impl Cell for BigUint {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn power(base: u64, exp: u32) -> Option<Self> {
        Some(num_traits::pow(BigUint::from(base), exp as usize))
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn mul_add(&mut self, a: &Self, b: &Self) -> bool {
        *self += a * b;
        true
    }
    fn add(&mut self, a: &Self) -> bool {
        *self += a;
        true
    }
    fn into_bigint(self) -> BigInt {
        BigInt::from(self)
    }
}

/// Suffix trie of a set of compositions: node `i` is `(first part, child)`
/// where the child is another node or the empty composition (`None`).
struct SuffixTrie {
    nodes: Vec<(u32, Option<usize>)>,
    index: HashMap<Composition, usize>,
}

impl SuffixTrie {
    fn build(comps: &[Composition]) -> Self {
        let mut trie = SuffixTrie {
            nodes: Vec::new(),
            index: HashMap::new(),
        };
        for c in comps {
            trie.insert(c);
        }
        trie
    }

    fn insert(&mut self, c: &Composition) -> Option<usize> {
        if c.is_empty() {
            return None;
        }
        if let Some(&i) = self.index.get(c) {
            return Some(i);
        }
        let child = self.insert(&c.tail());
        let i = self.nodes.len();
        self.nodes.push((c.first().unwrap(), child));
        self.index.insert(c.clone(), i);
        Some(i)
    }
}

/// Sweep over `u = 1..N`. After step `u`, `acc[node]` holds the sum over chains
/// `u_1 > ... > u_l` with `u_1 <= u` of `prod v_j^{s_j-1} q^{sum u_j v_j}`.
/// Returns `None` if the cell type overflowed.
fn sweep<T: Cell>(trie: &SuffixTrie, order: usize) -> Option<Vec<Vec<T>>> {
    let n_nodes = trie.nodes.len();
    let mut acc: Vec<Vec<T>> = vec![vec![T::zero(); order + 1]; n_nodes];
    let mut empty = vec![T::zero(); order + 1];
    empty[0] = T::one();
    let max_exp = trie.nodes.iter().map(|n| n.0 - 1).max().unwrap_or(0);
    let mut powers: Vec<Vec<T>> = Vec::with_capacity(max_exp as usize + 1);
    for e in 0..=max_exp {
        let row = (0..=order as u64)
            .map(|v| T::power(v, e))
            .collect::<Option<Vec<T>>>()?;
        powers.push(row);
    }
    for u in 1..=order {
        let contributions: Option<Vec<Option<Vec<T>>>> = trie
            .nodes
            .par_iter()
            .map(|&(t, child)| {
                let base = match child {
                    Some(c) => &acc[c],
                    None => &empty,
                };
                let Some(lowest) = base.iter().position(|x| !x.is_zero()) else {
                    return Some(None);
                };
                if lowest + u > order {
                    return Some(None);
                }
                let pw = &powers[(t - 1) as usize];
                let mut contrib = vec![T::zero(); order + 1];
                let mut v = 1;
                while lowest + u * v <= order {
                    let shift = u * v;
                    for m in lowest..=order - shift {
                        if base[m].is_zero() {
                            continue;
                        }
                        if !contrib[m + shift].mul_add(&pw[v], &base[m]) {
                            return None;
                        }
                    }
                    v += 1;
                }
                Some(Some(contrib))
            })
            .collect();
        let contributions = contributions?;
        for (node, contrib) in contributions.into_iter().enumerate() {
            if let Some(contrib) = contrib {
                for (a, c) in acc[node].iter_mut().zip(contrib.iter()) {
                    if !c.is_zero() && !a.add(c) {
                        return None;
                    }
                }
            }
        }
    }
    Some(acc)
}

/// Integer numerators `sigma_{s-1}(n)` for every composition of the batch.
fn numerators(comps: &[Composition], order: usize) -> Vec<Vec<BigInt>> {
    let trie = SuffixTrie::build(comps);
    let rows: Vec<Vec<BigInt>> = match sweep::<u128>(&trie, order) {
        Some(acc) => acc
            .into_iter()
            .map(|r| r.into_iter().map(Cell::into_bigint).collect())
            .collect(),
        None => sweep::<BigUint>(&trie, order)
            .expect("big integers do not overflow")
            .into_iter()
            .map(|r| r.into_iter().map(Cell::into_bigint).collect())
            .collect(),
    };
    comps
        .iter()
        .map(|c| match trie.index.get(c) {
            Some(&i) => rows[i].clone(),
            None => {
                let mut one = vec![BigInt::zero(); order + 1];
                one[0] = BigInt::one();
                one
            }
        })
        .collect()
}

fn series_cache() -> &'static RwLock<HashMap<Composition, QSeries>> {
    static CACHE: OnceLock<RwLock<HashMap<Composition, QSeries>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// `[c]` through `q^order`. Results are cached per composition at the largest
/// order requested so far.
pub fn bracket_series(c: &Composition, order: usize) -> QSeries {
    bracket_series_batch(std::slice::from_ref(c), order)
        .pop()
        .expect("one series per composition")
}

/// Several brackets at once, sharing work between common suffixes.
pub fn bracket_series_batch(comps: &[Composition], order: usize) -> Vec<QSeries> {
    let mut missing: Vec<Composition> = {
        let cache = series_cache().read().unwrap();
        comps
            .iter()
            .filter(|c| cache.get(*c).map_or(true, |s| s.order() < order))
            .cloned()
            .collect()
    };
    missing.sort();
    missing.dedup();
    if !missing.is_empty() {
        let nums = numerators(&missing, order);
        let computed: Vec<(Composition, QSeries)> = missing
            .into_par_iter()
            .zip(nums.into_par_iter())
            .map(|(c, num)| {
                let den = c.factorial_denominator();
                let s = QSeries::from_integers(&num, &den);
                (c, s)
            })
            .collect();
        let mut cache = series_cache().write().unwrap();
        for (c, s) in computed {
            let keep = cache.get(&c).map_or(true, |old| old.order() < s.order());
            if keep {
                cache.insert(c, s);
            }
        }
    }
    let cache = series_cache().read().unwrap();
    comps
        .iter()
        .map(|c| cache[c].truncate(order))
        .collect()
}

/// Independent second route: descending sweep over `n = N..1` building the
/// prefix sums `sum_{n_1 > ... > n_j} prod K_{s_i}(q^{n_i})` with the kernels
/// expanded from Eulerian numbers.
pub fn bracket_series_oracle(c: &Composition, order: usize) -> QSeries {
    let l = c.length();
    let mut prefix: Vec<Vec<BigInt>> = vec![vec![BigInt::zero(); order + 1]; l + 1];
    prefix[0][0] = BigInt::one();
    let kernels: Vec<Vec<BigInt>> = c
        .parts()
        .iter()
        .map(|&s| {
            let k = EulerianKernel::new(s);
            (0..=order as u64).map(|m| k.numerator_coefficient(m)).collect()
        })
        .collect();
    for n in (1..=order).rev() {
        for j in (1..=l).rev() {
            let kernel = &kernels[j - 1];
            let mut add = vec![BigInt::zero(); order + 1];
            for (i, p) in prefix[j - 1].iter().enumerate() {
                if p.is_zero() {
                    continue;
                }
                let mut m = 1;
                while i + m * n <= order {
                    add[i + m * n] += p * &kernel[m];
                    m += 1;
                }
            }
            for (a, b) in prefix[j].iter_mut().zip(add) {
                *a += b;
            }
        }
    }
    let den = c.factorial_denominator();
    QSeries::from_integers(&prefix[l], &den)
}

/// Partition numbers `p(0..=n)` from Euler's pentagonal number recurrence.
pub fn partition_numbers(n: usize) -> Vec<BigInt> {
    let mut p = vec![BigInt::zero(); n + 1];
    p[0] = BigInt::one();
    for m in 1..=n {
        let mut total = BigInt::zero();
        for k in 1.. {
            let g1 = k * (3 * k - 1) / 2;
            if g1 > m {
                break;
            }
            let sign_pos = k % 2 == 1;
            let mut term = p[m - g1].clone();
            let g2 = k * (3 * k + 1) / 2;
            if g2 <= m {
                term += &p[m - g2];
            }
            if sign_pos {
                total += term;
            } else {
                total -= term;
            }
        }
        p[m] = total;
    }
    p
}

/// `sum_{l >= 1} [{1}^l]` through `q^order`.
pub fn ones_bracket_sum(order: usize) -> QSeries {
    let mut total = QSeries::zero(order);
    let mut l = 1;
    while l * (l + 1) / 2 <= order {
        total.add_scaled(&Rational::one(), &bracket_series(&Composition::ones(l), order));
        l += 1;
    }
    total
}

/// Checks that `sum_l [{1}^l]` has coefficient `p(n)` at every `q^n`,
/// `1 <= n <= order`.
pub fn partition_identity_check(order: usize) -> bool {
    let s = ones_bracket_sum(order);
    let p = partition_numbers(order);
    (1..=order).all(|n| s.coefficients()[n] == Rational::from_integer(p[n].clone()))
}

/// The first nonzero coefficient of `[c]` sits at `q^{l(l+1)/2}`.
pub fn leading_exponent(c: &Composition) -> usize {
    let l = c.length();
    l * (l + 1) / 2
}

/// `sigma_{k-1}(n)` for `n = 1..=order` as machine-independent integers.
pub fn divisor_power_sums(k: u32, order: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); order + 1];
    for d in 1..=order {
        let p = num_traits::pow(BigInt::from(d), (k - 1) as usize);
        let mut m = d;
        while m <= order {
            out[m] += &p;
            m += d;
        }
    }
    out
}

/// Approximate growth exponent of the coefficients, `log(a_n)/log(n)` over the
/// upper half of the series. Only a heuristic.
pub fn growth_exponent(s: &QSeries) -> Option<f64> {
    let n = s.order();
    let lo = n / 2;
    let pts: Vec<(f64, f64)> = (lo.max(2)..=n)
        .filter_map(|i| {
            let c = crate::exactnum::rational_to_f64(&s.coefficients()[i]).abs();
            (c > 0.0).then(|| ((i as f64).ln(), c.ln()))
        })
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let m = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / m;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    Some(sxy / sxx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::comp;
    use crate::exactnum::{int, rat};

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn sigma_examples() {
        assert_eq!(multiple_divisor_sum(&[0, 0], 5), BigInt::from(5));
        assert_eq!(multiple_divisor_sum(&[2, 1], 5), BigInt::from(11));
        assert_eq!(multiple_divisor_sum(&[1], 4), BigInt::from(7));
        assert_eq!(multiple_divisor_sum(&[0, 0, 0], 5), BigInt::zero());
    }

    #[test]
    fn bracket_two() {
        let s = bracket_series(&comp![2], 8);
        assert_eq!(s.tail(), ints(&[1, 3, 4, 7, 6, 12, 8, 15]).as_slice());
        assert!(s.constant().is_zero());
    }

    #[test]
    fn bracket_one_is_divisor_count() {
        let s = bracket_series_oracle(&comp![1], 6);
        assert_eq!(s.tail(), ints(&[1, 2, 2, 3, 2, 4]).as_slice());
    }

    #[test]
    fn empty_bracket_is_one() {
        assert_eq!(bracket_series(&Composition::empty(), 5), QSeries::one(5));
        assert_eq!(bracket_series_oracle(&Composition::empty(), 5), QSeries::one(5));
    }

    #[test]
    fn bracket_against_sigma() {
        for c in [comp![2, 1], comp![1, 1], comp![3, 2], comp![1, 2, 1]] {
            let s = bracket_series(&c, 25);
            let r: Vec<u32> = c.parts().iter().map(|&x| x - 1).collect();
            let den = c.factorial_denominator();
            for n in 1..=25 {
                assert_eq!(
                    s.coefficients()[n],
                    Rational::new(multiple_divisor_sum(&r, n as u64), den.clone()),
                    "{c} at q^{n}"
                );
            }
        }
    }

    #[test]
    fn kernel_coefficients_are_powers() {
        for s in 1..=8u32 {
            let k = EulerianKernel::new(s);
            for m in 1..=20u64 {
                assert_eq!(k.numerator_coefficient(m), num_traits::pow(BigInt::from(m), s as usize - 1));
            }
        }
    }

    #[test]
    fn overflow_falls_back_to_big_integers() {
        // 15^40 does not fit in u128, so this exercises the fallback.
        let c = comp![41];
        let s = bracket_series(&c, 15);
        let den = factorial(40);
        assert_eq!(
            s.coefficients()[15],
            Rational::new(divisor_power_sums(41, 15)[15].clone(), den)
        );
        assert_eq!(s, bracket_series_oracle(&c, 15));
    }

    #[test]
    fn leading_coefficient() {
        let s = bracket_series(&comp![3, 1, 3, 1], 12);
        assert_eq!(s.valuation(), Some(10));
        assert_eq!(s.coefficients()[10], rat(1, 4));
    }

    #[test]
    fn partitions() {
        let p = partition_numbers(10);
        assert_eq!(p[5], BigInt::from(7));
        assert_eq!(p[10], BigInt::from(42));
        assert!(partition_identity_check(1));
        assert!(partition_identity_check(30));
    }
}

//! Dimension tables for the weight/length filtrations of `MD` and `MDA`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use log::warn;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::brackets::bracket_series_batch;
use crate::composition::Composition;
use crate::error::{Error, Result};
use crate::exactnum::{count_generators, filtration_generators};
use crate::linrel::matrix::{integer_row, EchelonBasis};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Space {
    #[serde(rename = "MD")]
    Md,
    #[serde(rename = "MDA")]
    Mda,
}

impl Space {
    pub fn admissible_only(self) -> bool {
        self == Space::Mda
    }
}

impl fmt::Display for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Space::Md => "MD",
            Space::Mda => "MDA",
        })
    }
}

impl FromStr for Space {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "md" => Ok(Space::Md),
            "mda" => Ok(Space::Mda),
            _ => Err(Error::Parse(format!("unknown space {s:?} (expected md or mda)"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Kind {
    Fil,
    Gr,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::Fil => "fil",
            Kind::Gr => "gr",
        })
    }
}

/// How much a table value is worth. Ordered from strongest to weakest.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Certainty {
    /// Lower bound from a rank equals an upper bound from proven relations.
    Exact,
    /// Rank of a truncated coefficient matrix.
    LowerBound,
    /// Derived from lower bounds by differences; neither bound is implied.
    Conjectural,
    Unknown,
}

impl fmt::Display for Certainty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Certainty::Exact => "exact",
            Certainty::LowerBound => "lower_bound",
            Certainty::Conjectural => "conjectural",
            Certainty::Unknown => "unknown",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimCell {
    pub value: Option<u64>,
    pub certainty: Certainty,
}

impl DimCell {
    pub fn new(value: u64, certainty: Certainty) -> Self {
        DimCell {
            value: Some(value),
            certainty,
        }
    }

    pub fn unknown() -> Self {
        DimCell {
            value: None,
            certainty: Certainty::Unknown,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DimensionTable {
    pub space: Space,
    pub kind: Kind,
    pub cells: BTreeMap<(u32, u32), DimCell>,
}

impl DimensionTable {
    pub fn new(space: Space, kind: Kind) -> Self {
        DimensionTable {
            space,
            kind,
            cells: BTreeMap::new(),
        }
    }

    /// The cell at `(k, l)`; anything not computed is reported as unknown.
    pub fn get(&self, k: u32, l: u32) -> DimCell {
        self.cells.get(&(k, l)).copied().unwrap_or_else(DimCell::unknown)
    }

    pub fn value(&self, k: u32, l: u32) -> Option<u64> {
        self.get(k, l).value
    }

    pub const CSV_HEADER: &'static str = "space,kind,k,l,value,certainty";

    /// Rows `space,kind,k,l,value,certainty` without the header.
    pub fn csv_rows(&self) -> Vec<String> {
        self.cells
            .iter()
            .map(|(&(k, l), c)| {
                let v = c.value.map_or_else(|| "unknown".to_string(), |v| v.to_string());
                format!("{},{},{k},{l},{v},{}", self.space, self.kind, c.certainty)
            })
            .collect()
    }

    /// Plain text grid with weights down and lengths across.
    pub fn grid(&self) -> String {
        let max_k = self.cells.keys().map(|k| k.0).max().unwrap_or(0);
        let max_l = self.cells.keys().map(|k| k.1).max().unwrap_or(0);
        let mut out = format!("{} {}  k\\l", self.kind, self.space);
        for l in 0..=max_l {
            out.push_str(&format!("{l:>6}"));
        }
        out.push('\n');
        for k in 0..=max_k {
            out.push_str(&format!("{:>12}", k));
            for l in 0..=max_l {
                let cell = match self.cells.get(&(k, l)) {
                    None => String::new(),
                    Some(c) => match (c.value, c.certainty) {
                        (None, _) => "?".into(),
                        (Some(v), Certainty::Exact) => v.to_string(),
                        (Some(v), _) => format!("{v}*"),
                    },
                };
                out.push_str(&format!("{cell:>6}"));
            }
            out.push('\n');
        }
        out
    }
}

/// Number of generators (without the constant) of `Fil_{k,l}`.
pub fn generator_count(space: Space, k: u32, l: u32) -> u64 {
    let mut n = 0;
    for j in 1..=k {
        for i in 1..=l.min(j) {
            n += count_generators(j, i, space.admissible_only());
        }
    }
    n
}

/// Default number of coefficients: `max(120, 2 * generators)`.
pub fn recommended_order(space: Space, k: u32, l: u32) -> usize {
    (2 * generator_count(space, k, l) as usize).max(120)
}

/// Primitive integer rows of the coefficients of `q^1..q^order`.
pub fn coefficient_rows(comps: &[Composition], order: usize) -> Vec<Vec<num_bigint::BigInt>> {
    let series = bracket_series_batch(comps, order);
    series.par_iter().map(|s| integer_row(s.tail())).collect()
}

/// `1 + rank` of the coefficient matrix of the generators of `Fil_{k,l}`,
/// a lower bound for its dimension.
pub fn dim_lower_bound(space: Space, k: u32, l: u32, order: usize) -> u64 {
    let gens = filtration_generators(k, l, space.admissible_only());
    if order < 2 * gens.len() {
        warn!(
            "order {order} is below twice the {} generators of Fil_{{{k},{l}}}({space}); the bound may be weak",
            gens.len()
        );
    }
    let mut basis = EchelonBasis::new();
    for row in coefficient_rows(&gens, order) {
        basis.insert(row);
    }
    1 + basis.rank() as u64
}

/// Lower bounds for every `Fil_{k,l}` with `k <= max_k`, `l <= min(k, max_l)`,
/// from one incremental elimination per length bound.
pub fn fil_lower_bounds(space: Space, max_k: u32, max_l: u32, order: usize) -> BTreeMap<(u32, u32), u64> {
    let gens = filtration_generators(max_k, max_l, space.admissible_only());
    if order < 2 * gens.len() {
        warn!(
            "order {order} is below twice the {} generators of Fil_{{{max_k},{max_l}}}({space})",
            gens.len()
        );
    }
    let rows = coefficient_rows(&gens, order);
    let passes: Vec<BTreeMap<(u32, u32), u64>> = (1..=max_l)
        .into_par_iter()
        .map(|l| {
            let mut out = BTreeMap::new();
            let mut basis = EchelonBasis::new();
            let mut current = 0;
            for (c, row) in gens.iter().zip(rows.iter()) {
                if c.length() as u32 > l {
                    continue;
                }
                while current < c.weight() {
                    if current >= l {
                        out.insert((current, l), 1 + basis.rank() as u64);
                    }
                    current += 1;
                }
                basis.insert(row.clone());
            }
            while current <= max_k {
                if current >= l {
                    out.insert((current, l), 1 + basis.rank() as u64);
                }
                current += 1;
            }
            out
        })
        .collect();
    let mut out = BTreeMap::new();
    for k in 0..=max_k {
        out.insert((k, 0), 1);
    }
    for p in passes {
        out.extend(p);
    }
    out
}

/// Value of a Fil table at `(k, l)`, reading `l > k` as `l = k` and negative
/// indices as 0.
fn fil_at(f: &BTreeMap<(u32, u32), u64>, k: i64, l: i64) -> Option<u64> {
    if k < 0 || l < 0 {
        return Some(0);
    }
    let l = l.min(k);
    f.get(&(k as u32, l as u32)).copied()
}

/// `gr_{k,l}` from `Fil` by inclusion-exclusion.
pub fn gr_from_fil(f: &BTreeMap<(u32, u32), u64>, k: u32, l: u32) -> Option<i64> {
    let (k, l) = (i64::from(k), i64::from(l));
    let v = |a, b| fil_at(f, a, b).map(|x| x as i64);
    Some(v(k, l)? - v(k - 1, l)? - v(k, l - 1)? + v(k - 1, l - 1)?)
}

/// Which tables to produce from `d'(k,l)`.
#[derive(Debug, Clone, Copy)]
pub struct DimTargets {
    pub space: Space,
    pub kind: Kind,
    pub max_k: u32,
    pub max_l: u32,
}

fn weakest(a: Certainty, b: Certainty) -> Certainty {
    a.max(b)
}

/// Tables for `MD`/`MDA` from `d'(k,l) = dim gr_{k,l}(MDA)`:
///
/// * `Fil_{k,l}(MDA) = sum_{j<=k, i<=l} d'(j,i)`
/// * `gr_{k,l}(MD) = sum_j d'(k-j, l-j)`
/// * `Fil_{k,l}(MD) = sum_{j<=k, i<=l} sum_r d'(j-r, i-r)`
///
/// A cell is unknown as soon as one needed `d'` is missing; its certainty is
/// the weakest among the inputs.
pub fn dims_from_dprime(dprime: &BTreeMap<(u32, u32), DimCell>, t: DimTargets) -> DimensionTable {
    let dp = |k: i64, l: i64| -> Option<(u64, Certainty)> {
        if k < 0 || l < 0 || l > k {
            return Some((0, Certainty::Exact));
        }
        let c = dprime.get(&(k as u32, l as u32))?;
        Some((c.value?, c.certainty))
    };
    let gr_md = |k: i64, l: i64| -> Option<(u64, Certainty)> {
        let mut total = 0;
        let mut cert = Certainty::Exact;
        for j in 0..=k.min(l) {
            let (v, c) = dp(k - j, l - j)?;
            total += v;
            cert = weakest(cert, c);
        }
        Some((total, cert))
    };
    let mut table = DimensionTable::new(t.space, t.kind);
    for k in 0..=t.max_k {
        for l in 0..=t.max_l.min(k) {
            let (k_, l_) = (i64::from(k), i64::from(l));
            let cell = match (t.space, t.kind) {
                (Space::Mda, Kind::Gr) => dp(k_, l_),
                (Space::Md, Kind::Gr) => gr_md(k_, l_),
                (space, Kind::Fil) => {
                    let mut acc = Some((0u64, Certainty::Exact));
                    'outer: for j in 0..=k_ {
                        for i in 0..=l_ {
                            let part = match space {
                                Space::Mda => dp(j, i),
                                Space::Md => gr_md(j, i),
                            };
                            match (part, acc) {
                                (Some((v, c)), Some((a, ac))) => acc = Some((a + v, weakest(ac, c))),
                                _ => {
                                    acc = None;
                                    break 'outer;
                                }
                            }
                        }
                    }
                    acc
                }
            };
            table.cells.insert(
                (k, l),
                match cell {
                    Some((v, c)) => DimCell::new(v, c),
                    None => DimCell::unknown(),
                },
            );
        }
    }
    table
}

/// Upper bounds `d'(k,l) <= a(k,l) - R(k,l)` from counts of independent
/// proven relations in `gr_{k,l}(MDA)`; missing counts are taken as 0.
pub fn dprime_upper_bounds(
    relation_counts: &BTreeMap<(u32, u32), usize>,
    max_k: u32,
) -> BTreeMap<(u32, u32), u64> {
    let mut out = BTreeMap::new();
    for k in 0..=max_k {
        for l in 0..=k {
            let a = count_generators(k, l, true);
            let r = relation_counts.get(&(k, l)).copied().unwrap_or(0) as u64;
            out.insert((k, l), a.saturating_sub(r));
        }
    }
    out
}

/// Everything needed for the dimension tables of one computation.
#[derive(Debug, Clone)]
pub struct DimensionReport {
    pub fil_mda: DimensionTable,
    pub fil_md: DimensionTable,
    pub gr_mda: DimensionTable,
    pub gr_md: DimensionTable,
}

impl DimensionReport {
    pub fn tables(&self) -> [&DimensionTable; 4] {
        [&self.fil_md, &self.gr_md, &self.fil_mda, &self.gr_mda]
    }

    pub fn csv(&self, spaces: &[Space]) -> String {
        let mut out = String::from(DimensionTable::CSV_HEADER);
        out.push('\n');
        for t in self.tables() {
            if spaces.contains(&t.space) {
                for row in t.csv_rows() {
                    out.push_str(&row);
                    out.push('\n');
                }
            }
        }
        out
    }

    /// `d'_k = sum_l d'(k,l)` for `k <= max_k`, `None` where a cell is unknown.
    pub fn dprime_row_sums(&self, max_k: u32) -> Vec<Option<u64>> {
        (0..=max_k)
            .map(|k| {
                (0..=k)
                    .map(|l| self.gr_mda.value(k, l))
                    .sum::<Option<u64>>()
            })
            .collect()
    }
}

/// Lower bounds from ranks, upper bounds from relation counts, and the gr
/// tables derived from both. `MD` tables are computed for `k <= md_max_k`.
pub fn dimension_report(
    max_k: u32,
    max_l: u32,
    md_max_k: u32,
    order: usize,
    relation_counts: &BTreeMap<(u32, u32), usize>,
) -> DimensionReport {
    let lower_mda = fil_lower_bounds(Space::Mda, max_k, max_l, order);
    let md_max_k = md_max_k.min(max_k);
    let lower_md = fil_lower_bounds(Space::Md, md_max_k, max_l.min(md_max_k), order);

    let upper_dp = dprime_upper_bounds(relation_counts, max_k);
    let upper_cells: BTreeMap<(u32, u32), DimCell> = upper_dp
        .iter()
        .map(|(&key, &v)| (key, DimCell::new(v, Certainty::Exact)))
        .collect();
    let upper_mda = dims_from_dprime(
        &upper_cells,
        DimTargets { space: Space::Mda, kind: Kind::Fil, max_k, max_l },
    );
    let upper_md = dims_from_dprime(
        &upper_cells,
        DimTargets { space: Space::Md, kind: Kind::Fil, max_k: md_max_k, max_l },
    );

    let fil_table = |space: Space, lower: &BTreeMap<(u32, u32), u64>, upper: &DimensionTable| {
        let mut t = DimensionTable::new(space, Kind::Fil);
        for (&(k, l), &v) in lower {
            let cert = if upper.value(k, l) == Some(v) {
                Certainty::Exact
            } else {
                Certainty::LowerBound
            };
            t.cells.insert((k, l), DimCell::new(v, cert));
        }
        t
    };
    let fil_mda = fil_table(Space::Mda, &lower_mda, &upper_mda);
    let fil_md = fil_table(Space::Md, &lower_md, &upper_md);

    let gr_table = |fil: &DimensionTable| {
        let values: BTreeMap<(u32, u32), u64> =
            fil.cells.iter().filter_map(|(&k, c)| c.value.map(|v| (k, v))).collect();
        let mut t = DimensionTable::new(fil.space, Kind::Gr);
        for &(k, l) in fil.cells.keys() {
            let cell = match gr_from_fil(&values, k, l) {
                Some(v) if v >= 0 => {
                    let exact = [(k, l), (k.wrapping_sub(1), l), (k, l.wrapping_sub(1)), (k.wrapping_sub(1), l.wrapping_sub(1))]
                        .iter()
                        .all(|&(a, b)| {
                            a == u32::MAX || b == u32::MAX || fil.get(a, b.min(a)).certainty == Certainty::Exact
                        });
                    DimCell::new(v as u64, if exact { Certainty::Exact } else { Certainty::Conjectural })
                }
                _ => DimCell::unknown(),
            };
            t.cells.insert((k, l), cell);
        }
        t
    };
    let gr_mda = gr_table(&fil_mda);
    let gr_md = gr_table(&fil_md);
    DimensionReport {
        fil_mda,
        fil_md,
        gr_mda,
        gr_md,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_lower_bounds() {
        assert_eq!(dim_lower_bound(Space::Mda, 4, 3, 60), 7);
        assert_eq!(dim_lower_bound(Space::Md, 2, 2, 60), 4);
        let f = fil_lower_bounds(Space::Mda, 5, 5, 120);
        let expect = [
            ((2, 1), 2),
            ((3, 3), 4),
            ((4, 2), 6),
            ((4, 4), 7),
            ((5, 2), 9),
            ((5, 3), 12),
            ((5, 5), 13),
        ];
        for (key, v) in expect {
            assert_eq!(f[&key], v, "{key:?}");
        }
    }

    #[test]
    fn zero_dprime_gives_constant_only() {
        let mut dp = BTreeMap::new();
        for k in 0..=5 {
            for l in 0..=k {
                dp.insert((k, l), DimCell::new(u64::from(k == 0 && l == 0), Certainty::Exact));
            }
        }
        let t = dims_from_dprime(&dp, DimTargets { space: Space::Mda, kind: Kind::Fil, max_k: 5, max_l: 5 });
        assert!(t.cells.values().all(|c| c.value == Some(1)));
        // Only the powers of [1] are left in MD.
        let t = dims_from_dprime(&dp, DimTargets { space: Space::Md, kind: Kind::Fil, max_k: 5, max_l: 5 });
        for (&(k, l), c) in &t.cells {
            assert_eq!(c.value, Some(1 + u64::from(k.min(l))));
        }
    }

    #[test]
    fn missing_dprime_is_unknown() {
        let mut dp = BTreeMap::new();
        dp.insert((0, 0), DimCell::new(1, Certainty::Exact));
        let t = dims_from_dprime(&dp, DimTargets { space: Space::Mda, kind: Kind::Fil, max_k: 3, max_l: 3 });
        assert_eq!(t.get(0, 0).value, Some(1));
        assert_eq!(t.get(2, 1).certainty, Certainty::Unknown);
        assert!(t.csv_rows().iter().any(|r| r.ends_with("unknown,unknown")));
    }
}

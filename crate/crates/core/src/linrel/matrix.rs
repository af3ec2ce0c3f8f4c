//! Dense exact matrices over `Q`: rank by fraction-free elimination, reduced
//! row echelon form and kernels.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::exactnum::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl ExactMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ExactMatrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    /// Builds a matrix from rows of equal length.
    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        let n = rows.len();
        ExactMatrix {
            rows: n,
            cols,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> ExactMatrix {
        let mut t = ExactMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    /// Each row scaled by the lcm of its denominators.
    pub fn integer_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| integer_row(self.row(i))).collect()
    }

    /// Rank by Bareiss elimination on the integer rows.
    pub fn rank(&self) -> usize {
        bareiss_rank(self.integer_rows(), self.cols)
    }

    /// Reduced row echelon form and the pivot columns. Pivots are taken at the
    /// leftmost available column.
    pub fn rref(&self) -> (ExactMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = Rational::one() / m.get(r, c);
            for j in c..m.cols {
                let v = m.get(r, j) * &inv;
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r || m.get(i, c).is_zero() {
                    continue;
                }
                let f = m.get(i, c).clone();
                for j in c..m.cols {
                    if m.get(r, j).is_zero() {
                        continue;
                    }
                    let v = m.get(i, j) - &f * m.get(r, j);
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    /// Basis of `{x : M x = 0}`, itself in reduced row echelon form: the first
    /// nonzero entry of every basis vector is 1 and no other basis vector is
    /// nonzero there.
    pub fn kernel_basis(&self) -> Vec<Vec<Rational>> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let raw: Vec<Vec<Rational>> = free
            .iter()
            .map(|&f| {
                let mut v = vec![Rational::zero(); self.cols];
                v[f] = Rational::one();
                for (row, &p) in pivots.iter().enumerate() {
                    v[p] = -r.get(row, f).clone();
                }
                v
            })
            .collect();
        if raw.is_empty() {
            return raw;
        }
        let (k, kp) = ExactMatrix::from_rows(raw).rref();
        (0..kp.len()).map(|i| k.row(i).to_vec()).collect()
    }

    pub fn mul_vec(&self, x: &[Rational]) -> Vec<Rational> {
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(x)
                    .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

/// Scales a rational row to a primitive integer row.
pub fn integer_row(row: &[Rational]) -> Vec<BigInt> {
    let den = row
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let mut out: Vec<BigInt> = row.iter().map(|c| c.numer() * (&den / c.denom())).collect();
    make_primitive(&mut out);
    out
}

/// Divides by the gcd of the entries.
pub fn make_primitive(row: &mut [BigInt]) {
    let mut g = BigInt::zero();
    for x in row.iter() {
        if !x.is_zero() {
            g = g.gcd(x);
            if g.is_one() {
                return;
            }
        }
    }
    if g.is_zero() || g.is_one() {
        return;
    }
    for x in row.iter_mut() {
        *x /= &g;
    }
}

/// Fraction-free Gaussian elimination. Every division is exact.
pub fn bareiss_rank(mut a: Vec<Vec<BigInt>>, cols: usize) -> usize {
    let rows = a.len();
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let (top, rest) = a.split_at_mut(r + 1);
        let pivot_row = &top[r];
        let pv = pivot_row[c].clone();
        for row in rest.iter_mut() {
            let f = row[c].clone();
            for j in c..cols {
                let v = &pv * &row[j] - &f * &pivot_row[j];
                row[j] = v / &prev;
            }
        }
        prev = pv;
        r += 1;
    }
    r
}

/// Incremental echelon basis of primitive integer rows. Rows can be added one
/// at a time and the rank read off after each addition.
#[derive(Debug, Clone, Default)]
pub struct EchelonBasis {
    rows: Vec<(usize, Vec<BigInt>)>,
}

impl EchelonBasis {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `row` against the basis; if something is left it is added.
    /// Returns whether the rank went up.
    pub fn insert(&mut self, mut row: Vec<BigInt>) -> bool {
        make_primitive(&mut row);
        for (p, b) in &self.rows {
            if row[*p].is_zero() {
                continue;
            }
            let g = row[*p].gcd(&b[*p]);
            let fb = &b[*p] / &g;
            let fr = &row[*p] / &g;
            for (x, y) in row.iter_mut().zip(b.iter()) {
                if y.is_zero() {
                    if !x.is_zero() {
                        *x *= &fb;
                    }
                } else {
                    *x = &*x * &fb - &fr * y;
                }
            }
            make_primitive(&mut row);
        }
        match row.iter().position(|x| !x.is_zero()) {
            None => false,
            Some(p) => {
                if row[p].is_negative() {
                    for x in row.iter_mut() {
                        *x = -&*x;
                    }
                }
                let at = self.rows.partition_point(|(q, _)| *q < p);
                self.rows.insert(at, (p, row));
                true
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{int, rat};

    fn m(rows: &[&[i64]]) -> ExactMatrix {
        ExactMatrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect())
    }

    #[test]
    fn identity_and_zero() {
        assert_eq!(ExactMatrix::identity(5).rank(), 5);
        let z = ExactMatrix::zeros(3, 4);
        assert_eq!(z.rank(), 0);
        let k = z.kernel_basis();
        assert_eq!(k.len(), 4);
        for (i, v) in k.iter().enumerate() {
            for (j, x) in v.iter().enumerate() {
                assert_eq!(*x, int(i64::from(i == j)));
            }
        }
    }

    #[test]
    fn small_kernel() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(a.rank(), 2);
        let k = a.kernel_basis();
        assert_eq!(k.len(), 1);
        assert_eq!(k[0], vec![int(1), int(1), int(-1)]);
        assert!(a.mul_vec(&k[0]).iter().all(Zero::is_zero));
    }

    #[test]
    fn rational_entries() {
        let a = ExactMatrix::from_rows(vec![
            vec![rat(1, 2), rat(1, 3)],
            vec![rat(3, 2), int(1)],
        ]);
        assert_eq!(a.rank(), 1);
    }

    #[test]
    fn echelon_basis_matches_bareiss() {
        let a = m(&[&[2, 4, 1, 0], &[1, 2, 0, 1], &[3, 6, 1, 1], &[0, 0, 5, -5], &[1, 1, 1, 1]]);
        let mut e = EchelonBasis::new();
        let mut ranks = vec![];
        for r in a.integer_rows() {
            e.insert(r);
            ranks.push(e.rank());
        }
        assert_eq!(ranks, vec![1, 2, 2, 3, 4]);
        assert_eq!(a.rank(), 4);
    }
}

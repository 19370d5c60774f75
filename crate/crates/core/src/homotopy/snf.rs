//! Smith normal form of sparse integer matrices.
//!
//! Elimination runs in checked `i64` arithmetic and restarts with arbitrary
//! precision on overflow. The pivot is always an entry of least magnitude.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::{CheckedMul, CheckedSub, Num, Signed};

/// A sparse integer matrix stored by columns.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SparseMatrix {
    pub rows: usize,
    pub cols: usize,
    /// `columns[c]` lists `(row, value)` with distinct rows and nonzero values.
    pub columns: Vec<Vec<(usize, i64)>>,
}

impl SparseMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        SparseMatrix { rows, cols, columns: vec![Vec::new(); cols] }
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }

    pub fn get(&self, r: usize, c: usize) -> i64 {
        self.columns[c].iter().find(|e| e.0 == r).map_or(0, |e| e.1)
    }

    /// `self · other`, or `None` on overflow.
    pub fn mul(&self, other: &SparseMatrix) -> Option<SparseMatrix> {
        assert_eq!(self.cols, other.rows);
        let mut columns = Vec::with_capacity(other.cols);
        for col in &other.columns {
            let mut acc: BTreeMap<usize, i64> = BTreeMap::new();
            for &(k, b) in col {
                for &(r, a) in &self.columns[k] {
                    let e = acc.entry(r).or_insert(0);
                    *e = e.checked_add(a.checked_mul(b)?)?;
                }
            }
            columns.push(acc.into_iter().filter(|e| e.1 != 0).collect());
        }
        Some(SparseMatrix { rows: self.rows, cols: other.cols, columns })
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(Vec::is_empty)
    }
}

trait Coef: Clone + Num + Signed + Ord + CheckedMul + CheckedSub {}
impl<T: Clone + Num + Signed + Ord + CheckedMul + CheckedSub> Coef for T {}

struct Work<T> {
    rows: Vec<BTreeMap<usize, T>>,
    col_rows: Vec<BTreeSet<usize>>,
}

impl<T: Coef> Work<T> {
    fn new(m: &SparseMatrix, conv: impl Fn(i64) -> T) -> Self {
        let mut rows: Vec<BTreeMap<usize, T>> = vec![BTreeMap::new(); m.rows];
        let mut col_rows = vec![BTreeSet::new(); m.cols];
        for (c, col) in m.columns.iter().enumerate() {
            for &(r, v) in col {
                rows[r].insert(c, conv(v));
                col_rows[c].insert(r);
            }
        }
        Work { rows, col_rows }
    }

    fn pivot(&self) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize, T)> = None;
        for (r, row) in self.rows.iter().enumerate() {
            for (&c, v) in row {
                let a = v.abs();
                if a.is_one() {
                    return Some((r, c));
                }
                if best.as_ref().is_none_or(|b| a < b.2) {
                    best = Some((r, c, a));
                }
            }
        }
        best.map(|(r, c, _)| (r, c))
    }

    /// `row_t -= q · row_s`.
    fn row_sub(&mut self, t: usize, s: usize, q: &T) -> Option<()> {
        let src: Vec<(usize, T)> = self.rows[s].iter().map(|(&c, v)| (c, v.clone())).collect();
        for (c, v) in src {
            let cur = self.rows[t].get(&c).cloned().unwrap_or_else(T::zero);
            let new = cur.checked_sub(&q.checked_mul(&v)?)?;
            if new.is_zero() {
                self.rows[t].remove(&c);
                self.col_rows[c].remove(&t);
            } else {
                self.rows[t].insert(c, new);
                self.col_rows[c].insert(t);
            }
        }
        Some(())
    }

    /// `col_t -= q · col_s` where column `s` is zero outside row `r`.
    fn col_sub_single(&mut self, r: usize, t: usize, s: usize, q: &T) -> Option<()> {
        let v = self.rows[r][&s].clone();
        let cur = self.rows[r].get(&t).cloned().unwrap_or_else(T::zero);
        let new = cur.checked_sub(&q.checked_mul(&v)?)?;
        if new.is_zero() {
            self.rows[r].remove(&t);
            self.col_rows[t].remove(&r);
        } else {
            self.rows[r].insert(t, new);
            self.col_rows[t].insert(r);
        }
        Some(())
    }

    fn remove(&mut self, r: usize, c: usize) {
        for &cc in self.rows[r].keys() {
            self.col_rows[cc].remove(&r);
        }
        self.rows[r].clear();
        self.col_rows[c].clear();
    }

    /// Diagonal entries of a diagonal form, in elimination order.
    fn diagonalize(&mut self) -> Option<Vec<T>> {
        let mut diag = Vec::new();
        'outer: while let Some((mut r, mut c)) = self.pivot() {
            loop {
                let p = self.rows[r][&c].clone();
                let others: Vec<usize> = self.col_rows[c].iter().copied().filter(|&x| x != r).collect();
                for t in &others {
                    let q = self.rows[*t][&c].clone() / p.clone();
                    if !q.is_zero() {
                        self.row_sub(*t, r, &q)?;
                    }
                }
                let row_cols: Vec<usize> = self.rows[r].keys().copied().filter(|&x| x != c).collect();
                let col_clean = self.col_rows[c].len() == 1;
                if col_clean {
                    for t in &row_cols {
                        let q = self.rows[r][t].clone() / p.clone();
                        if !q.is_zero() {
                            self.col_sub_single(r, *t, c, &q)?;
                        }
                    }
                }
                if col_clean && self.rows[r].len() == 1 {
                    diag.push(p.abs());
                    self.remove(r, c);
                    continue 'outer;
                }
                // a nonzero remainder is now smaller than the pivot
                let mut best: Option<(usize, usize, T)> = None;
                for &t in &self.col_rows[c] {
                    let a = self.rows[t][&c].abs();
                    if best.as_ref().is_none_or(|b| a < b.2) {
                        best = Some((t, c, a));
                    }
                }
                for (&cc, v) in &self.rows[r] {
                    let a = v.abs();
                    if best.as_ref().is_none_or(|b| a < b.2) {
                        best = Some((r, cc, a));
                    }
                }
                let (nr, nc, _) = best.expect("pivot row or column is nonempty");
                r = nr;
                c = nc;
            }
        }
        Some(diag)
    }
}

fn gcd<T: Coef>(mut a: T, mut b: T) -> T {
    while !b.is_zero() {
        let r = a.clone() % b.clone();
        a = b;
        b = r;
    }
    a.abs()
}

/// Turns a diagonal into invariant factors `d_1 | d_2 | …`.
fn normalize<T: Coef>(diag: Vec<T>) -> Vec<T> {
    let (mut units, mut rest): (Vec<T>, Vec<T>) = diag.into_iter().partition(|d| d.is_one());
    for i in 0..rest.len() {
        for j in i + 1..rest.len() {
            let (a, b) = (rest[i].clone(), rest[j].clone());
            let g = gcd(a.clone(), b.clone());
            rest[i] = g.clone();
            rest[j] = a / g * b;
        }
    }
    rest.sort();
    let (ones, mut big): (Vec<T>, Vec<T>) = rest.into_iter().partition(|d| d.is_one());
    units.extend(ones);
    units.append(&mut big);
    units
}

/// The nonzero invariant factors of `m` in divisibility order. Their number is
/// the rank.
pub fn invariant_factors(m: &SparseMatrix) -> Vec<BigInt> {
    if let Some(d) = Work::<i64>::new(m, |v| v).diagonalize() {
        return normalize(d.into_iter().map(BigInt::from).collect());
    }
    let d = Work::<BigInt>::new(m, BigInt::from).diagonalize().expect("arbitrary precision cannot overflow");
    normalize(d)
}

/// Same as [`invariant_factors`] but always in arbitrary precision.
pub fn invariant_factors_bigint(m: &SparseMatrix) -> Vec<BigInt> {
    normalize(Work::<BigInt>::new(m, BigInt::from).diagonalize().expect("arbitrary precision cannot overflow"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dense(rows: &[&[i64]]) -> SparseMatrix {
        let (r, c) = (rows.len(), rows.first().map_or(0, |x| x.len()));
        let mut m = SparseMatrix::zero(r, c);
        for (i, row) in rows.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                if v != 0 {
                    m.columns[j].push((i, v));
                }
            }
        }
        m
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn small_matrices() {
        assert_eq!(invariant_factors(&dense(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]])), ints(&[2, 6, 12]));
        assert_eq!(invariant_factors(&dense(&[&[2, 0], &[0, 3]])), ints(&[1, 6]));
        assert_eq!(invariant_factors(&dense(&[&[0, 0], &[0, 0]])), ints(&[]));
        assert_eq!(invariant_factors(&dense(&[&[1, 1], &[1, 1]])), ints(&[1]));
    }

    #[test]
    fn overflow_falls_back() {
        let big = i64::MAX / 2 + 1;
        let m = dense(&[&[big, 1], &[1, big]]);
        let f = invariant_factors(&m);
        assert_eq!(f, invariant_factors_bigint(&m));
        let det = BigInt::from(big) * BigInt::from(big) - 1;
        assert_eq!(f, vec![BigInt::from(1), det]);
    }
}

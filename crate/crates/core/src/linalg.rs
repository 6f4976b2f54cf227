//! Exact linear algebra over the scalar fields.
//!
//! Two independent kernels: a sparse row-echelon eliminator used for solving
//! and nullspaces, and a dense fraction-free (Bareiss) rank used for the
//! deformed complexes over ℚ(ħ). Each serves as the other's test oracle.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::scalars::Scalar;

pub type SparseRow = BTreeMap<usize, Scalar>;

fn check_field(s: &Scalar) -> Result<()> {
    if s.field().is_field() {
        Ok(())
    } else {
        Err(Error::NotAField(s.to_string()))
    }
}

/// Row-major sparse matrix.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SparseMatrix {
    pub cols: usize,
    pub rows: Vec<SparseRow>,
}

impl SparseMatrix {
    pub fn new(cols: usize) -> Self {
        SparseMatrix { cols, rows: Vec::new() }
    }

    pub fn from_dense(rows: &[Vec<Scalar>], cols: usize) -> Self {
        let mut m = SparseMatrix::new(cols);
        for r in rows {
            m.push_row(r.iter().enumerate().filter(|(_, v)| !v.is_zero()).map(|(i, v)| (i, v.clone())).collect());
        }
        m
    }

    pub fn push_row(&mut self, row: SparseRow) {
        debug_assert!(row.keys().all(|&c| c < self.cols));
        self.rows.push(row);
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn to_dense(&self) -> Vec<Vec<Scalar>> {
        self.rows
            .iter()
            .map(|r| {
                let mut d = vec![Scalar::zero(); self.cols];
                for (&c, v) in r {
                    d[c] = v.clone();
                }
                d
            })
            .collect()
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        self.rows
            .iter()
            .map(|r| r.iter().filter(|(c, _)| !v[**c].is_zero()).map(|(&c, a)| a * &v[c]).sum())
            .collect()
    }

    pub fn rank(&self) -> Result<usize> {
        Ok(Echelon::build(self)?.pivots.len())
    }

    /// Basis of {v : Mv = 0}, one vector per free column in increasing order.
    pub fn nullspace(&self) -> Result<Vec<Vec<Scalar>>> {
        let mut e = Echelon::build(self)?;
        e.back_substitute();
        let mut out = Vec::new();
        for free in 0..self.cols {
            if e.pivots.contains_key(&free) {
                continue;
            }
            let mut v = vec![Scalar::zero(); self.cols];
            v[free] = Scalar::one();
            for (&pc, row) in &e.pivots {
                if let Some(a) = row.get(&free) {
                    v[pc] = -a;
                }
            }
            out.push(v);
        }
        Ok(out)
    }

    /// Some x with Mx = b, or `None` when the system is inconsistent.
    /// Free variables are set to zero.
    pub fn solve(&self, b: &[Scalar]) -> Result<Option<Vec<Scalar>>> {
        assert_eq!(b.len(), self.rows.len());
        let n = self.cols;
        let mut aug = SparseMatrix::new(n + 1);
        for (r, rhs) in self.rows.iter().zip(b) {
            let mut row = r.clone();
            if !rhs.is_zero() {
                row.insert(n, rhs.clone());
            }
            aug.push_row(row);
        }
        let mut e = Echelon::build(&aug)?;
        if e.pivots.contains_key(&n) {
            return Ok(None);
        }
        e.back_substitute();
        let mut x = vec![Scalar::zero(); n];
        for (&pc, row) in &e.pivots {
            if let Some(v) = row.get(&n) {
                x[pc] = v.clone();
            }
        }
        Ok(Some(x))
    }
}

/// Row echelon form keyed by pivot column; pivot entries are normalized to 1.
struct Echelon {
    pivots: BTreeMap<usize, SparseRow>,
}

fn axpy(row: &mut SparseRow, a: &Scalar, other: &SparseRow) {
    for (&c, v) in other {
        let t = a * v;
        match row.get_mut(&c) {
            Some(x) => {
                *x = &*x + &t;
                if x.is_zero() {
                    row.remove(&c);
                }
            }
            None => {
                row.insert(c, t);
            }
        }
    }
}

impl Echelon {
    fn build(m: &SparseMatrix) -> Result<Echelon> {
        let mut pivots: BTreeMap<usize, SparseRow> = BTreeMap::new();
        // Sparse rows first keeps fill-in down.
        let mut order: Vec<usize> = (0..m.rows.len()).collect();
        order.sort_by_key(|&i| (m.rows[i].len(), i));
        for i in order {
            let mut row = m.rows[i].clone();
            for v in row.values() {
                check_field(v)?;
            }
            let mut cursor = 0;
            loop {
                let Some((&c, a)) = row.range(cursor..).find(|(c, _)| pivots.contains_key(c)) else { break };
                let a = -a;
                axpy(&mut row, &a, &pivots[&c]);
                cursor = c + 1;
            }
            if let Some((&lead, a)) = row.iter().next() {
                let inv = a.try_inv()?;
                for v in row.values_mut() {
                    *v = &*v * &inv;
                }
                // Keep earlier pivots reduced against the new one lazily: back_substitute handles it.
                pivots.insert(lead, row);
            }
        }
        Ok(Echelon { pivots })
    }

    /// Clear every pivot column from the other pivot rows (reduced echelon form).
    fn back_substitute(&mut self) {
        let cols: Vec<usize> = self.pivots.keys().rev().copied().collect();
        for &pc in &cols {
            let prow = self.pivots[&pc].clone();
            for (&other, row) in self.pivots.range_mut(..pc) {
                debug_assert!(other < pc);
                if let Some(a) = row.get(&pc).cloned() {
                    axpy(row, &-a, &prow);
                }
            }
        }
    }
}

/// A linear map given column by column as sparse vectors over an arbitrary
/// ordered key set; rows are allocated as keys appear.
#[derive(Clone, Debug)]
pub struct KeyedColumns<K: Ord + Clone> {
    keys: BTreeMap<K, usize>,
    cols: Vec<Vec<(usize, Scalar)>>,
}

impl<K: Ord + Clone> Default for KeyedColumns<K> {
    fn default() -> Self {
        KeyedColumns { keys: BTreeMap::new(), cols: Vec::new() }
    }
}

impl<K: Ord + Clone> KeyedColumns<K> {
    pub fn new() -> Self {
        Self::default()
    }

    fn row(&mut self, k: K) -> usize {
        let n = self.keys.len();
        *self.keys.entry(k).or_insert(n)
    }

    pub fn push(&mut self, col: impl IntoIterator<Item = (K, Scalar)>) -> usize {
        let mut c = Vec::new();
        for (k, v) in col {
            if !v.is_zero() {
                c.push((self.row(k), v));
            }
        }
        self.cols.push(c);
        self.cols.len() - 1
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    fn matrix(&self) -> SparseMatrix {
        let mut rows = vec![SparseRow::new(); self.keys.len()];
        for (j, c) in self.cols.iter().enumerate() {
            for (r, v) in c {
                rows[*r].insert(j, v.clone());
            }
        }
        SparseMatrix { cols: self.cols.len(), rows }
    }

    pub fn rank(&self) -> Result<usize> {
        self.matrix().rank()
    }

    pub fn nullspace(&self) -> Result<Vec<Vec<Scalar>>> {
        self.matrix().nullspace()
    }

    /// Some x with Σ x_j col_j = rhs, free coordinates set to zero.
    pub fn solve(&self, rhs: impl IntoIterator<Item = (K, Scalar)>) -> Result<Option<Vec<Scalar>>> {
        let mut me = self.clone();
        let mut b = Vec::new();
        for (k, v) in rhs {
            if !v.is_zero() {
                b.push((me.row(k), v));
            }
        }
        let m = me.matrix();
        let mut bv = vec![Scalar::zero(); m.nrows()];
        for (r, v) in b {
            bv[r] = &bv[r] + &v;
        }
        m.solve(&bv)
    }
}

/// Rank by fraction-free elimination on a dense matrix.
///
/// Entries must lie in one field. Over ℚ(ħ) with polynomial entries every
/// intermediate quotient is exact in ℚ[ħ], which keeps the degrees bounded.
pub fn bareiss_rank(m: &[Vec<Scalar>]) -> Result<usize> {
    let mut a: Vec<Vec<Scalar>> = m.to_vec();
    let rows = a.len();
    if rows == 0 {
        return Ok(0);
    }
    let cols = a[0].len();
    for r in &a {
        for v in r {
            check_field(v)?;
        }
    }
    let mut prev = Scalar::one();
    let mut rank = 0;
    for c in 0..cols {
        if rank == rows {
            break;
        }
        let Some(p) = (rank..rows).find(|&r| !a[r][c].is_zero()) else { continue };
        a.swap(rank, p);
        for r in rank + 1..rows {
            for k in c + 1..cols {
                let num = a[rank][c].try_mul(&a[r][k])?.try_sub(&a[r][c].try_mul(&a[rank][k])?)?;
                a[r][k] = num.try_div(&prev)?;
            }
            a[r][c] = Scalar::zero();
        }
        prev = a[rank][c].clone();
        rank += 1;
    }
    Ok(rank)
}

/// Plain dense Gaussian elimination rank; an independent cross-check.
pub fn gauss_rank(m: &[Vec<Scalar>]) -> Result<usize> {
    let mut a: Vec<Vec<Scalar>> = m.to_vec();
    let rows = a.len();
    if rows == 0 {
        return Ok(0);
    }
    let cols = a[0].len();
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&r| !a[r][c].is_zero()) else { continue };
        a.swap(rank, p);
        let inv = a[rank][c].try_inv()?;
        for r in rank + 1..rows {
            if a[r][c].is_zero() {
                continue;
            }
            let f = a[r][c].try_mul(&inv)?;
            for k in c..cols {
                let t = f.try_mul(&a[rank][k])?;
                a[r][k] = a[r][k].try_sub(&t)?;
            }
        }
        rank += 1;
    }
    Ok(rank)
}

/// Dense matrix product.
pub fn mat_mul(a: &[Vec<Scalar>], b: &[Vec<Scalar>]) -> Result<Vec<Vec<Scalar>>> {
    let inner = b.len();
    let cols = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            assert_eq!(row.len(), inner);
            (0..cols)
                .map(|j| {
                    let mut acc = Scalar::zero();
                    for k in 0..inner {
                        if row[k].is_zero() || b[k][j].is_zero() {
                            continue;
                        }
                        acc = acc.try_add(&row[k].try_mul(&b[k][j])?)?;
                    }
                    Ok(acc)
                })
                .collect()
        })
        .collect()
}

/// Inverse of a square matrix by Gauss–Jordan.
pub fn mat_inverse(a: &[Vec<Scalar>]) -> Result<Vec<Vec<Scalar>>> {
    let n = a.len();
    let mut m = SparseMatrix::new(2 * n);
    for (i, row) in a.iter().enumerate() {
        let mut r: SparseRow = row.iter().enumerate().filter(|(_, v)| !v.is_zero()).map(|(j, v)| (j, v.clone())).collect();
        r.insert(n + i, Scalar::one());
        m.push_row(r);
    }
    let mut e = Echelon::build(&m)?;
    if (0..n).any(|c| !e.pivots.contains_key(&c)) {
        return Err(Error::DivisionByZero);
    }
    e.back_substitute();
    Ok((0..n)
        .map(|i| {
            let row = &e.pivots[&i];
            (0..n).map(|j| row.get(&(n + j)).cloned().unwrap_or_else(Scalar::zero)).collect()
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ints(rows: &[&[i64]]) -> Vec<Vec<Scalar>> {
        rows.iter().map(|r| r.iter().map(|&v| Scalar::from_int(v)).collect()).collect()
    }

    #[test]
    fn nullspace_and_solve() {
        let d = ints(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        let m = SparseMatrix::from_dense(&d, 3);
        assert_eq!(m.rank().unwrap(), 2);
        let ns = m.nullspace().unwrap();
        assert_eq!(ns.len(), 1);
        assert!(m.mul_vec(&ns[0]).iter().all(Scalar::is_zero));
        let b = vec![Scalar::from_int(4), Scalar::from_int(8), Scalar::from_int(2)];
        let x = m.solve(&b).unwrap().unwrap();
        assert_eq!(m.mul_vec(&x), b);
        let bad = vec![Scalar::from_int(4), Scalar::from_int(9), Scalar::from_int(2)];
        assert!(m.solve(&bad).unwrap().is_none());
    }

    #[test]
    fn rank_over_hbar() {
        let h = Scalar::hbar_rational();
        // [[h, 1], [h^2, h]] has rank 1.
        let d = vec![vec![h.clone(), Scalar::one()], vec![&h * &h, h.clone()]];
        assert_eq!(bareiss_rank(&d).unwrap(), 1);
        assert_eq!(gauss_rank(&d).unwrap(), 1);
    }

    #[test]
    fn series_entries_rejected() {
        let d = vec![vec![Scalar::hbar_series(3)]];
        assert!(matches!(bareiss_rank(&d), Err(Error::NotAField(_))));
        assert!(matches!(SparseMatrix::from_dense(&d, 1).rank(), Err(Error::NotAField(_))));
    }

    #[test]
    fn inverse_roundtrip() {
        let d = ints(&[&[2, 1], &[1, 1]]);
        let inv = mat_inverse(&d).unwrap();
        assert_eq!(mat_mul(&d, &inv).unwrap(), ints(&[&[1, 0], &[0, 1]]));
    }

    proptest! {
        #[test]
        fn three_rank_kernels_agree(entries in proptest::collection::vec(-2i64..3, 30), rows in 1usize..6) {
            let cols = 30 / rows.max(1);
            let cols = cols.min(7);
            let d: Vec<Vec<Scalar>> = (0..rows)
                .map(|i| (0..cols).map(|j| Scalar::from_int(entries[(i * cols + j) % 30])).collect())
                .collect();
            let s = SparseMatrix::from_dense(&d, cols).rank().unwrap();
            prop_assert_eq!(s, bareiss_rank(&d).unwrap());
            prop_assert_eq!(s, gauss_rank(&d).unwrap());
            let ns = SparseMatrix::from_dense(&d, cols).nullspace().unwrap();
            prop_assert_eq!(ns.len() + s, cols);
        }
    }
}

//! Exact linear algebra over `CycScalar`: dense matrices with reduced row
//! echelon forms, plus a sparse incremental echelon basis for the large but
//! very sparse systems that arise in the cochain complex.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::scalars::CycScalar;

pub type Vector = Vec<CycScalar>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    entries: Vec<CycScalar>,
}

impl Matrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, entries: vec![CycScalar::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.set(i, i, CycScalar::from_int(1));
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<CycScalar>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged matrix");
        Matrix { rows: r, cols: c, entries: rows.into_iter().flatten().collect() }
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[Vector], nrows: usize) -> Self {
        let mut m = Self::zero(nrows, cols.len());
        for (j, v) in cols.iter().enumerate() {
            assert_eq!(v.len(), nrows);
            for (i, x) in v.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        m
    }

    pub fn diagonal(d: Vec<CycScalar>) -> Self {
        let n = d.len();
        let mut m = Self::zero(n, n);
        for (i, x) in d.into_iter().enumerate() {
            m.set(i, i, x);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &CycScalar {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: CycScalar) {
        self.entries[i * self.cols + j] = x;
    }

    pub fn row(&self, i: usize) -> &[CycScalar] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vector {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn entries(&self) -> &[CycScalar] {
        &self.entries
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = Self::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let idx = i * out.cols + j;
                        out.entries[idx] += &(a * b);
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[CycScalar]) -> Vector {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = CycScalar::zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc += &(a * b);
                    }
                }
                acc
            })
            .collect()
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a - b).collect();
        Matrix { rows: self.rows, cols: self.cols, entries }
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..self.cols).all(|j| {
                let x = self.get(i, j);
                if i == j { x.is_one() } else { x.is_zero() }
            }))
    }

    pub fn rank(&self) -> usize {
        rref(self).1.len()
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut aug = Self::zero(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, CycScalar::from_int(1));
        }
        let (r, piv) = rref(&aug);
        if piv.len() < n || piv[n - 1] != n - 1 {
            return None;
        }
        let mut inv = Self::zero(n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, r.get(i, n + j).clone());
            }
        }
        Some(inv)
    }

    /// Canonical hashable key for exact comparison inside Q(ζ_order).
    pub fn key_in(&self, order: u32) -> Vec<Vec<crate::scalars::Rational>> {
        self.entries.iter().map(|x| x.key_in(order)).collect()
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// Reduced row echelon form with first-nonzero pivoting.
pub fn rref(m: &Matrix) -> (Matrix, Vec<usize>) {
    let mut a = m.clone();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..a.cols {
        if r == a.rows {
            break;
        }
        let Some(p) = (r..a.rows).find(|&i| !a.get(i, c).is_zero()) else {
            continue;
        };
        if p != r {
            for j in 0..a.cols {
                a.entries.swap(p * a.cols + j, r * a.cols + j);
            }
        }
        let inv = a.get(r, c).inv().expect("nonzero pivot");
        for j in c..a.cols {
            let v = a.get(r, j) * &inv;
            a.set(r, j, v);
        }
        for i in 0..a.rows {
            if i == r {
                continue;
            }
            let f = a.get(i, c).clone();
            if f.is_zero() {
                continue;
            }
            for j in c..a.cols {
                let prj = a.get(r, j);
                if prj.is_zero() {
                    continue;
                }
                let v = a.get(i, j) - &(&f * prj);
                a.set(i, j, v);
            }
        }
        pivots.push(c);
        r += 1;
    }
    (a, pivots)
}

/// Null-space basis, one vector per free column in ascending order.
pub fn kernel_basis(m: &Matrix) -> Vec<Vector> {
    let (r, pivots) = rref(m);
    let free: Vec<usize> = (0..m.cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![CycScalar::zero(); m.cols];
            v[f] = CycScalar::from_int(1);
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = -r.get(i, f);
            }
            v
        })
        .collect()
}

/// Column-space basis: the nonzero rows of rref(mᵀ), each with leading entry 1.
pub fn image_basis(m: &Matrix) -> Vec<Vector> {
    let (r, pivots) = rref(&m.transpose());
    (0..pivots.len()).map(|i| r.row(i).to_vec()).collect()
}

/// Coefficients expressing `target` in the span of `spanning`, if it lies there.
pub fn solve_membership(spanning: &[Vector], target: &[CycScalar]) -> Result<Option<Vector>> {
    let n = target.len();
    if spanning.iter().any(|v| v.len() != n) {
        return Err(Error::usage("solve_membership: vectors of different lengths"));
    }
    let k = spanning.len();
    let mut aug = Matrix::zero(n, k + 1);
    for (j, v) in spanning.iter().enumerate() {
        for (i, x) in v.iter().enumerate() {
            aug.set(i, j, x.clone());
        }
    }
    for (i, x) in target.iter().enumerate() {
        aug.set(i, k, x.clone());
    }
    let (r, pivots) = rref(&aug);
    if pivots.last() == Some(&k) {
        return Ok(None);
    }
    let mut coeffs = vec![CycScalar::zero(); k];
    for (i, &p) in pivots.iter().enumerate() {
        coeffs[p] = r.get(i, k).clone();
    }
    Ok(Some(coeffs))
}

/// Sparse vector keyed by an ordered coordinate type.
pub type SparseVec<K> = BTreeMap<K, CycScalar>;

pub fn sparse_axpy<K: Ord + Clone>(y: &mut SparseVec<K>, a: &CycScalar, x: &SparseVec<K>) {
    for (k, v) in x {
        let t = a * v;
        match y.get_mut(k) {
            Some(e) => {
                *e += &t;
                if e.is_zero() {
                    y.remove(k);
                }
            }
            None => {
                if !t.is_zero() {
                    y.insert(k.clone(), t);
                }
            }
        }
    }
}

/// Row-echelon basis built one sparse vector at a time. Each stored row has
/// leading coefficient 1 at its pivot and also records which combination of
/// inserted vectors produced it, so membership queries can return witnesses.
#[derive(Clone, Debug, Default)]
pub struct SparseEchelon<K: Ord + Clone> {
    rows: BTreeMap<K, (SparseVec<K>, SparseVec<usize>)>,
    inserted: usize,
}

impl<K: Ord + Clone> SparseEchelon<K> {
    pub fn new() -> Self {
        SparseEchelon { rows: BTreeMap::new(), inserted: 0 }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Number of vectors offered so far (independent or not).
    pub fn inserted(&self) -> usize {
        self.inserted
    }

    /// Reduce `v` against the basis; returns the remainder and the combination
    /// of inserted vectors that was subtracted.
    fn reduce(&self, mut v: SparseVec<K>) -> (SparseVec<K>, SparseVec<usize>) {
        let mut combo = SparseVec::new();
        let mut cursor: Option<K> = None;
        loop {
            let next = match &cursor {
                None => v.iter().next(),
                Some(c) => v.range((std::ops::Bound::Excluded(c.clone()), std::ops::Bound::Unbounded)).next(),
            };
            let Some((k, coef)) = next else { break };
            let (k, coef) = (k.clone(), coef.clone());
            if let Some((row, rc)) = self.rows.get(&k) {
                let neg = -&coef;
                sparse_axpy(&mut v, &neg, row);
                sparse_axpy(&mut combo, &coef, rc);
            }
            cursor = Some(k);
        }
        (v, combo)
    }

    /// Insert a vector; returns true iff it enlarged the span.
    pub fn insert(&mut self, v: SparseVec<K>) -> bool {
        let id = self.inserted;
        self.inserted += 1;
        let (rem, combo) = self.reduce(v);
        let Some((pivot, lead)) = rem.iter().next().map(|(k, c)| (k.clone(), c.clone())) else {
            return false;
        };
        let inv = lead.inv().expect("nonzero lead");
        let row: SparseVec<K> = rem.into_iter().map(|(k, c)| (k, &c * &inv)).collect();
        // row = (v - combo·inserted)/lead
        let mut rc = SparseVec::new();
        rc.insert(id, inv.clone());
        sparse_axpy(&mut rc, &(-&inv), &combo);
        self.rows.insert(pivot, (row, rc));
        true
    }

    pub fn contains(&self, v: &SparseVec<K>) -> bool {
        self.reduce(v.clone()).0.is_empty()
    }

    /// If `v` is in the span, the coefficients (by insertion index) of a combination equal to it.
    pub fn solve(&self, v: &SparseVec<K>) -> Option<SparseVec<usize>> {
        let (rem, combo) = self.reduce(v.clone());
        rem.is_empty().then_some(combo)
    }
}

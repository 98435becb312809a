//! Dense matrices over a [`Ring`] and exact row reduction over `Q(i)`.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{Ring, Scalar};

/// Row-major dense matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix<T = Scalar> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Ring> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        Matrix::from_fn(n, n, |i, j| if i == j { T::one() } else { T::zero() })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Shape("ragged rows".into()));
        }
        Ok(Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<T>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Shape(alloc::format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Matrix { rows, cols, data })
    }

    /// Column matrix.
    pub fn column(v: Vec<T>) -> Self {
        Matrix { rows: v.len(), cols: 1, data: v }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn data(&self) -> &[T] {
        &self.data
    }

    pub fn into_data(self) -> Vec<T> {
        self.data
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn map<U>(&self, f: impl FnMut(&T) -> U) -> Matrix<U> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn checked_mul(&self, rhs: &Matrix<T>) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::Shape(alloc::format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Matrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.get(i, l);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(l, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * rhs.cols + j;
                    let cur = core::mem::replace(&mut out.data[idx], T::zero());
                    out.data[idx] = cur + a.clone() * b.clone();
                }
            }
        }
        Ok(out)
    }

    /// Panics on a shape mismatch; see [`Matrix::checked_mul`].
    pub fn mul(&self, rhs: &Matrix<T>) -> Self {
        self.checked_mul(rhs).expect("matrix shape mismatch")
    }

    fn zip_with(&self, rhs: &Matrix<T>, f: impl Fn(T, T) -> T) -> Self {
        assert!(
            self.rows == rhs.rows && self.cols == rhs.cols,
            "matrix shape mismatch: {}x{} vs {}x{}",
            self.rows,
            self.cols,
            rhs.rows,
            rhs.cols
        );
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| f(a.clone(), b.clone())).collect(),
        }
    }

    pub fn add(&self, rhs: &Matrix<T>) -> Self {
        self.zip_with(rhs, |a, b| a + b)
    }

    pub fn sub(&self, rhs: &Matrix<T>) -> Self {
        self.zip_with(rhs, |a, b| a - b)
    }

    pub fn neg(&self) -> Self {
        self.map(|a| -a.clone())
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        self.map(|a| a.scale(s))
    }

    pub fn times(&self, s: &T) -> Self {
        self.map(|a| a.clone() * s.clone())
    }

    pub fn apply(&self, v: &[T]) -> Vec<T> {
        assert_eq!(v.len(), self.cols, "vector length mismatch");
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(T::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
            })
            .collect()
    }

    /// Kronecker product; index `(i, k)` of the result is `i * rhs.rows + k`.
    pub fn kron(&self, rhs: &Matrix<T>) -> Self {
        Matrix::from_fn(self.rows * rhs.rows, self.cols * rhs.cols, |i, j| {
            let a = self.get(i / rhs.rows, j / rhs.cols);
            if a.is_zero() {
                return T::zero();
            }
            a.clone() * rhs.get(i % rhs.rows, j % rhs.cols).clone()
        })
    }

    pub fn block_diag(blocks: &[Matrix<T>]) -> Self {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = Matrix::zeros(rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            out.set_block(r0, c0, b);
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, block: &Matrix<T>) {
        for i in 0..block.rows {
            for j in 0..block.cols {
                self.set(r0 + i, c0 + j, block.get(i, j).clone());
            }
        }
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        Matrix::from_fn(rows, cols, |i, j| self.get(r0 + i, c0 + j).clone())
    }

    pub fn commutes_with(&self, rhs: &Matrix<T>) -> bool {
        self.mul(rhs) == rhs.mul(self)
    }

    /// Entrywise pairing `Σ a_ij b_ij`, the trace form `tr(Aᵀ B)`.
    pub fn pair(&self, rhs: &Matrix<T>) -> T {
        assert!(self.rows == rhs.rows && self.cols == rhs.cols, "pairing shape mismatch");
        self.data
            .iter()
            .zip(&rhs.data)
            .filter(|(a, b)| !a.is_zero() && !b.is_zero())
            .fold(T::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
    }
}

impl Matrix<Scalar> {
    /// Apply a scalar matrix to a vector with entries in any coefficient ring.
    pub fn act_on<C: Ring>(&self, v: &[C]) -> Vec<C> {
        assert_eq!(v.len(), self.cols, "vector length mismatch");
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(C::zero(), |acc, (a, b)| acc + b.scale(a))
            })
            .collect()
    }

    pub fn lift<C: Ring>(&self) -> Matrix<C> {
        self.map(|s| C::from_scalar(s.clone()))
    }

    pub fn row_space(&self) -> Subspace {
        Subspace::from_vectors(self.cols, self.to_rows())
    }

    pub fn column_space(&self) -> Subspace {
        Subspace::from_vectors(self.rows, (0..self.cols).map(|j| self.col(j)))
    }

    pub fn rank(&self) -> usize {
        self.row_space().dim()
    }

    /// Basis of `{x : A x = 0}`.
    pub fn nullspace(&self) -> Vec<Vec<Scalar>> {
        self.row_space().orthogonal_basis()
    }

    pub fn inverse(&self) -> Option<Matrix<Scalar>> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Matrix::<Scalar>::identity(n);
        for c in 0..n {
            let p = (c..n).find(|&r| !a.get(r, c).is_zero())?;
            if p != c {
                for j in 0..n {
                    a.data.swap(p * n + j, c * n + j);
                    inv.data.swap(p * n + j, c * n + j);
                }
            }
            let s = a.get(c, c).inv()?;
            for j in 0..n {
                let x = a.get(c, j) * &s;
                a.set(c, j, x);
                let y = inv.get(c, j) * &s;
                inv.set(c, j, y);
            }
            for r in 0..n {
                if r == c || a.get(r, c).is_zero() {
                    continue;
                }
                let f = a.get(r, c).clone();
                for j in 0..n {
                    let x = a.get(r, j) - &(&f * a.get(c, j));
                    a.set(r, j, x);
                    let y = inv.get(r, j) - &(&f * inv.get(c, j));
                    inv.set(r, j, y);
                }
            }
        }
        Some(inv)
    }

    /// Some solution of `A x = b`, if one exists.
    pub fn solve(&self, b: &[Scalar]) -> Option<Vec<Scalar>> {
        assert_eq!(b.len(), self.rows, "right-hand side length mismatch");
        let mut aug: Vec<Vec<Scalar>> = (0..self.rows)
            .map(|i| {
                let mut row = self.row(i).to_vec();
                row.push(b[i].clone());
                row
            })
            .collect();
        let n = self.cols;
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..n {
            let Some(p) = (r..aug.len()).find(|&i| !aug[i][c].is_zero()) else {
                continue;
            };
            aug.swap(r, p);
            let s = aug[r][c].inv().expect("nonzero pivot");
            for x in aug[r].iter_mut() {
                *x = &*x * &s;
            }
            for i in 0..aug.len() {
                if i != r && !aug[i][c].is_zero() {
                    let f = aug[i][c].clone();
                    let pivot_row = aug[r].clone();
                    for (x, y) in aug[i].iter_mut().zip(&pivot_row) {
                        if !y.is_zero() {
                            *x = &*x - &(&f * y);
                        }
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        if aug[r..].iter().any(|row| !row[n].is_zero()) {
            return None;
        }
        let mut x = vec![Scalar::zero(); n];
        for (i, &c) in pivots.iter().enumerate() {
            x[c] = aug[i][n].clone();
        }
        Some(x)
    }
}

impl<T: Ring> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries((0..self.rows).map(|i| self.row(i))).finish()
    }
}

/// A subspace of `Q(i)^n`, stored as its reduced row echelon basis.
///
/// The echelon form is unique, so `==` is subspace equality.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Subspace {
    ambient: usize,
    rows: Vec<Vec<Scalar>>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace { ambient, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn full(ambient: usize) -> Self {
        Subspace::from_vectors(ambient, (0..ambient).map(|i| unit_vector(ambient, i)))
    }

    pub fn from_vectors<I>(ambient: usize, vectors: I) -> Self
    where
        I: IntoIterator<Item = Vec<Scalar>>,
    {
        let mut s = Subspace::zero(ambient);
        for v in vectors {
            s.insert(v);
        }
        s
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn basis(&self) -> &[Vec<Scalar>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Positions that are not pivots; their unit vectors span a complement.
    pub fn free_positions(&self) -> Vec<usize> {
        (0..self.ambient).filter(|c| !self.pivots.contains(c)).collect()
    }

    /// Reduce `v` modulo the subspace; the result vanishes at every pivot.
    pub fn reduce(&self, v: &[Scalar]) -> Vec<Scalar> {
        let mut v = v.to_vec();
        self.reduce_in_place(&mut v);
        v
    }

    pub fn reduce_in_place<C: Ring>(&self, v: &mut [C]) {
        assert_eq!(v.len(), self.ambient, "vector length mismatch");
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if v[p].is_zero() {
                continue;
            }
            let f = v[p].clone();
            for (x, y) in v.iter_mut().zip(row) {
                if !y.is_zero() {
                    let cur = core::mem::replace(x, C::zero());
                    *x = cur - f.scale(y);
                }
            }
        }
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        self.reduce(v).iter().all(Zero::is_zero)
    }

    /// Coefficients of `v` in terms of [`Subspace::basis`], if `v` lies in it.
    pub fn coordinates(&self, v: &[Scalar]) -> Option<Vec<Scalar>> {
        if !self.contains(v) {
            return None;
        }
        Some(self.pivots.iter().map(|&p| v[p].clone()).collect())
    }

    /// Adds `v`; returns whether the dimension grew.
    pub fn insert(&mut self, v: Vec<Scalar>) -> bool {
        let mut v = self.reduce(&v);
        let Some(p) = v.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let s = v[p].inv().expect("nonzero pivot");
        for x in v.iter_mut() {
            if !x.is_zero() {
                *x = &*x * &s;
            }
        }
        for row in self.rows.iter_mut() {
            if row[p].is_zero() {
                continue;
            }
            let f = row[p].clone();
            for (x, y) in row.iter_mut().zip(&v) {
                if !y.is_zero() {
                    *x = &*x - &(&f * y);
                }
            }
        }
        let at = self.pivots.partition_point(|&q| q < p);
        self.pivots.insert(at, p);
        self.rows.insert(at, v);
        true
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.ambient == other.ambient && self.rows.iter().all(|r| other.contains(r))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient, other.ambient, "ambient dimension mismatch");
        let mut s = self.clone();
        for r in &other.rows {
            s.insert(r.clone());
        }
        s
    }

    /// Basis of `{w : Σ v_i w_i = 0 for all v in self}`.
    pub fn orthogonal_basis(&self) -> Vec<Vec<Scalar>> {
        let free = self.free_positions();
        free.iter()
            .map(|&f| {
                let mut w = vec![Scalar::zero(); self.ambient];
                w[f] = Scalar::one();
                for (row, &p) in self.rows.iter().zip(&self.pivots) {
                    w[p] = -row[f].clone();
                }
                w
            })
            .collect()
    }

    pub fn orthogonal(&self) -> Subspace {
        Subspace::from_vectors(self.ambient, self.orthogonal_basis())
    }

    pub fn intersection(&self, other: &Subspace) -> Subspace {
        // (U ∩ W)^⊥ = U^⊥ + W^⊥
        self.orthogonal().sum(&other.orthogonal()).orthogonal()
    }
}

pub fn unit_vector(n: usize, i: usize) -> Vec<Scalar> {
    let mut v = vec![Scalar::zero(); n];
    v[i] = Scalar::one();
    v
}

pub fn dot(a: &[Scalar], b: &[Scalar]) -> Scalar {
    a.iter()
        .zip(b)
        .filter(|(x, y)| !x.is_zero() && !y.is_zero())
        .fold(Scalar::zero(), |acc, (x, y)| &acc + &(x * y))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(n: i64) -> Scalar {
        Scalar::from_int(n)
    }

    fn m(rows: &[&[i64]]) -> Matrix {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| s(x)).collect()).collect())
            .unwrap()
    }

    #[test]
    fn rank_and_nullspace() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(a.rank(), 2);
        let ns = a.nullspace();
        assert_eq!(ns.len(), 1);
        assert!(a.apply(&ns[0]).iter().all(Zero::is_zero));
    }

    #[test]
    fn inverse_round_trip() {
        let a = m(&[&[2, 1], &[7, 4]]);
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), Matrix::identity(2));
        assert!(m(&[&[1, 2], &[2, 4]]).inverse().is_none());
    }

    #[test]
    fn solve_consistent_and_inconsistent() {
        let a = m(&[&[1, 1], &[1, -1], &[2, 0]]);
        let x = a.solve(&[s(3), s(1), s(4)]).unwrap();
        assert_eq!(x, alloc::vec![s(2), s(1)]);
        assert!(a.solve(&[s(3), s(1), s(5)]).is_none());
    }

    #[test]
    fn subspace_echelon_form_is_canonical() {
        let u = Subspace::from_vectors(3, [alloc::vec![s(1), s(1), s(0)], alloc::vec![s(0), s(1), s(1)]]);
        let w = Subspace::from_vectors(3, [alloc::vec![s(1), s(2), s(1)], alloc::vec![s(1), s(0), s(-1)]]);
        assert_eq!(u, w);
        assert_eq!(u.orthogonal().dim(), 1);
        assert_eq!(u.intersection(&Subspace::from_vectors(3, [unit_vector(3, 0), unit_vector(3, 1)])).dim(), 1);
    }

    #[test]
    fn kron_indexing() {
        let a = m(&[&[1, 2], &[3, 4]]);
        let i = Matrix::<Scalar>::identity(2);
        let k = a.kron(&i);
        assert_eq!(*k.get(2, 0), s(3));
        assert_eq!(*k.get(3, 1), s(3));
        assert_eq!(*k.get(0, 1), s(0));
    }
}

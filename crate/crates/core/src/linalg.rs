//! Dense linear algebra over a prime field.
//!
//! Everything downstream (quiver representations, complexes, truncations)
//! reduces to the handful of routines here: row reduction, kernels, images,
//! affine solutions and quotients. Pivots are always chosen as the first
//! nonzero entry scanning columns left to right, so every basis produced is a
//! deterministic function of the input.

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The field `F_p` for a small prime `p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct PrimeField {
    p: u32,
}

impl PrimeField {
    /// Largest modulus accepted; keeps products of two residues inside `u32`.
    pub const MAX_PRIME: u32 = 65521;

    pub fn new(p: u32) -> Result<Self> {
        if !(2..=Self::MAX_PRIME).contains(&p) || !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(Self { p })
    }

    pub fn p(self) -> u32 {
        self.p
    }

    #[inline]
    pub fn add(self, a: u32, b: u32) -> u32 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(self, a: u32, b: u32) -> u32 {
        (a * b) % self.p
    }

    /// Multiplicative inverse by Fermat; `None` for zero.
    pub fn inv(self, a: u32) -> Option<u32> {
        if a.is_multiple_of(self.p) {
            return None;
        }
        let mut base = a % self.p;
        let mut exp = self.p - 2;
        let mut acc = 1u32;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        Some(acc)
    }

    /// Reduces any integer into `[0, p)`.
    pub fn reduce(self, a: i64) -> u32 {
        a.rem_euclid(self.p as i64) as u32
    }

    /// `(-1)^k` as a residue.
    pub fn sign(self, k: i32) -> u32 {
        if k.rem_euclid(2) == 0 {
            1
        } else {
            self.p - 1
        }
    }

    pub fn random<R: Rng + ?Sized>(self, rng: &mut R) -> u32 {
        rng.gen_range(0..self.p)
    }
}

impl TryFrom<u32> for PrimeField {
    type Error = Error;

    fn try_from(p: u32) -> Result<Self> {
        Self::new(p)
    }
}

impl From<PrimeField> for u32 {
    fn from(f: PrimeField) -> u32 {
        f.p
    }
}

impl fmt::Display for PrimeField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.p)
    }
}

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Dense row-major matrix over `F_p`. Zero-row and zero-column shapes are
/// legal and act as maps between zero spaces.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    field: PrimeField,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix[{}x{} over {}]", self.rows, self.cols, self.field)?;
        for r in 0..self.rows {
            write!(f, "\n  {:?}", self.row(r))?;
        }
        Ok(())
    }
}

/// Output of [`Matrix::rref`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    pub reduced: Matrix,
    pub pivots: Vec<usize>,
}

/// One particular solution plus a basis of the homogeneous solutions.
#[derive(Clone, Debug)]
pub struct Solution {
    pub particular: Matrix,
    pub kernel: Matrix,
}

/// A quotient `F_p^n -> F_p^n / S` together with a linear section.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub projection: Matrix,
    pub section: Matrix,
}

impl Matrix {
    pub fn zeros(field: PrimeField, rows: usize, cols: usize) -> Self {
        Self {
            field,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: PrimeField, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    /// Builds a matrix from signed integer rows, reducing every entry mod p.
    pub fn from_rows(field: PrimeField, rows: &[Vec<i64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Shape("ragged matrix rows".into()));
        }
        let data = rows.iter().flatten().map(|&a| field.reduce(a)).collect();
        Ok(Self {
            field,
            rows: rows.len(),
            cols,
            data,
        })
    }

    /// Like [`Matrix::from_rows`] but with an explicit shape, so that
    /// `0 x n` and `n x 0` matrices survive a round trip through row lists.
    pub fn from_rows_shaped(
        field: PrimeField,
        rows: usize,
        cols: usize,
        entries: &[Vec<i64>],
    ) -> Result<Self> {
        if entries.len() != rows || entries.iter().any(|r| r.len() != cols) {
            return Err(Error::Shape(format!(
                "expected a {rows}x{cols} matrix, found {} rows",
                entries.len()
            )));
        }
        let data = entries.iter().flatten().map(|&a| field.reduce(a)).collect();
        Ok(Self {
            field,
            rows,
            cols,
            data,
        })
    }

    pub fn from_fn(
        field: PrimeField,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> u32,
    ) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c) % field.p());
            }
        }
        Self {
            field,
            rows,
            cols,
            data,
        }
    }

    /// A column vector.
    pub fn column_vector(field: PrimeField, entries: &[u32]) -> Self {
        Self::from_fn(field, entries.len(), 1, |r, _| entries[r])
    }

    pub fn random<R: Rng + ?Sized>(field: PrimeField, rows: usize, cols: usize, rng: &mut R) -> Self {
        let data = (0..rows * cols).map(|_| field.random(rng)).collect();
        Self {
            field,
            rows,
            cols,
            data,
        }
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u32) {
        self.data[r * self.cols + c] = v % self.field.p();
    }

    pub fn row(&self, r: usize) -> &[u32] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn entries(&self) -> &[u32] {
        &self.data
    }

    pub fn to_rows(&self) -> Vec<Vec<u32>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn column(&self, c: usize) -> Vec<u32> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&a| a == 0)
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.field, self.cols, self.rows, |r, c| self.get(c, r))
    }

    /// Matrix product `self * rhs`.
    ///
    /// Panics when the inner dimensions disagree; callers in this crate only
    /// multiply maps whose shapes are fixed by representation dimensions.
    pub fn mul(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(
            self.cols, rhs.rows,
            "matrix product shape mismatch: {}x{} * {}x{}",
            self.rows, self.cols, rhs.rows, rhs.cols
        );
        debug_assert_eq!(self.field, rhs.field);
        let p = self.field.p() as u64;
        let mut out = vec![0u32; self.rows * rhs.cols];
        let mut acc = vec![0u64; rhs.cols];
        for r in 0..self.rows {
            acc.iter_mut().for_each(|a| *a = 0);
            for k in 0..self.cols {
                let a = self.data[r * self.cols + k] as u64;
                if a == 0 {
                    continue;
                }
                let rrow = &rhs.data[k * rhs.cols..(k + 1) * rhs.cols];
                for (slot, &b) in acc.iter_mut().zip(rrow) {
                    *slot += a * b as u64;
                }
            }
            for (c, a) in acc.iter().enumerate() {
                out[r * rhs.cols + c] = (a % p) as u32;
            }
        }
        Matrix {
            field: self.field,
            rows: self.rows,
            cols: rhs.cols,
            data: out,
        }
    }

    pub fn add(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.shape(), rhs.shape(), "matrix sum shape mismatch");
        let f = self.field;
        Matrix {
            field: f,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(&a, &b)| f.add(a, b)).collect(),
        }
    }

    pub fn sub(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.shape(), rhs.shape(), "matrix difference shape mismatch");
        let f = self.field;
        Matrix {
            field: f,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(&a, &b)| f.sub(a, b)).collect(),
        }
    }

    pub fn neg(&self) -> Matrix {
        self.scale(self.field.p() - 1)
    }

    pub fn scale(&self, s: u32) -> Matrix {
        let f = self.field;
        let s = s % f.p();
        Matrix {
            field: f,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&a| f.mul(a, s)).collect(),
        }
    }

    /// Copies `block` into `self` with its top-left corner at `(r0, c0)`.
    pub fn set_block(&mut self, r0: usize, c0: usize, block: &Matrix) {
        assert!(r0 + block.rows <= self.rows && c0 + block.cols <= self.cols);
        for r in 0..block.rows {
            let dst = (r0 + r) * self.cols + c0;
            self.data[dst..dst + block.cols].copy_from_slice(block.row(r));
        }
    }

    /// The sub-matrix of rows `r0..r0+rows` and columns `c0..c0+cols`.
    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Matrix {
        Matrix::from_fn(self.field, rows, cols, |r, c| self.get(r0 + r, c0 + c))
    }

    pub fn select_columns(&self, cols: &[usize]) -> Matrix {
        Matrix::from_fn(self.field, self.rows, cols.len(), |r, c| self.get(r, cols[c]))
    }

    pub fn hstack(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.rows, rhs.rows, "hstack row mismatch");
        let mut m = Matrix::zeros(self.field, self.rows, self.cols + rhs.cols);
        m.set_block(0, 0, self);
        m.set_block(0, self.cols, rhs);
        m
    }

    pub fn vstack(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.cols, rhs.cols, "vstack column mismatch");
        let mut data = self.data.clone();
        data.extend_from_slice(&rhs.data);
        Matrix {
            field: self.field,
            rows: self.rows + rhs.rows,
            cols: self.cols,
            data,
        }
    }

    /// Reduced row-echelon form with the pivot positions.
    pub fn rref(&self) -> Rref {
        let f = self.field;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(pr) = (row..m.rows).find(|&r| m.get(r, col) != 0) else {
                continue;
            };
            if pr != row {
                for c in 0..m.cols {
                    m.data.swap(pr * m.cols + c, row * m.cols + c);
                }
            }
            let inv = f.inv(m.get(row, col)).expect("pivot is nonzero");
            for c in col..m.cols {
                let v = f.mul(m.get(row, c), inv);
                m.data[row * m.cols + c] = v;
            }
            for r in 0..m.rows {
                if r == row {
                    continue;
                }
                let factor = m.get(r, col);
                if factor == 0 {
                    continue;
                }
                for c in col..m.cols {
                    let v = f.sub(m.get(r, c), f.mul(factor, m.get(row, c)));
                    m.data[r * m.cols + c] = v;
                }
            }
            pivots.push(col);
            row += 1;
        }
        Rref { reduced: m, pivots }
    }

    pub fn rank(&self) -> usize {
        self.rref().pivots.len()
    }

    /// Columns spanning the null space, one per free column of the rref.
    pub fn kernel_basis(&self) -> Matrix {
        let Rref { reduced, pivots } = self.rref();
        kernel_from_rref(&reduced, &pivots, self.cols)
    }

    /// The pivot columns of `self`: an independent spanning set of the
    /// column space.
    pub fn image_basis(&self) -> Matrix {
        self.select_columns(&self.rref().pivots)
    }

    /// Solves `self * X = rhs`. Returns `Ok(None)` for an inconsistent
    /// system and an error when the row counts disagree.
    pub fn solve(&self, rhs: &Matrix) -> Result<Option<Solution>> {
        if self.rows != rhs.rows {
            return Err(Error::Shape(format!(
                "solve: coefficient matrix has {} rows, right-hand side has {}",
                self.rows, rhs.rows
            )));
        }
        let aug = self.hstack(rhs);
        let Rref { reduced, pivots } = aug.rref();
        if pivots.iter().any(|&c| c >= self.cols) {
            return Ok(None);
        }
        let mut particular = Matrix::zeros(self.field, self.cols, rhs.cols);
        for (i, &pc) in pivots.iter().enumerate() {
            for j in 0..rhs.cols {
                particular.set(pc, j, reduced.get(i, self.cols + j));
            }
        }
        let kernel = kernel_from_rref(&reduced, &pivots, self.cols);
        Ok(Some(Solution { particular, kernel }))
    }

    /// Inverse of a square matrix, `None` when singular.
    pub fn inverse(&self) -> Option<Matrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let Rref { reduced, pivots } = self.hstack(&Matrix::identity(self.field, n)).rref();
        if pivots.len() < n || pivots[n.saturating_sub(1)..].iter().any(|&c| c >= n) {
            return None;
        }
        Some(reduced.block(0, n, n, n))
    }

    /// A left inverse `L` with `L * self = I`, for a matrix with independent
    /// columns.
    pub fn left_inverse(&self) -> Result<Matrix> {
        let k = self.cols;
        let complement = complement_columns(self)?;
        let basis = self.hstack(&complement);
        let inv = basis.inverse().expect("extended basis is invertible");
        Ok(inv.block(0, 0, k, self.rows))
    }

    /// A right inverse `S` with `self * S = I`, for a matrix with
    /// independent rows.
    pub fn right_inverse(&self) -> Result<Matrix> {
        Ok(self.transpose().left_inverse()?.transpose())
    }
}

fn kernel_from_rref(reduced: &Matrix, pivots: &[usize], cols: usize) -> Matrix {
    let f = reduced.field;
    let mut is_pivot = vec![false; cols];
    for &p in pivots {
        if p < cols {
            is_pivot[p] = true;
        }
    }
    let free: Vec<usize> = (0..cols).filter(|&c| !is_pivot[c]).collect();
    let mut k = Matrix::zeros(f, cols, free.len());
    for (j, &fc) in free.iter().enumerate() {
        k.set(fc, j, 1);
        for (i, &pc) in pivots.iter().enumerate() {
            if pc < cols {
                k.set(pc, j, f.neg(reduced.get(i, fc)));
            }
        }
    }
    k
}

/// Standard basis vectors completing the independent columns of `basis` to a
/// basis of the ambient space.
fn complement_columns(basis: &Matrix) -> Result<Matrix> {
    let n = basis.rows;
    let k = basis.cols;
    let Rref { pivots, .. } = basis.hstack(&Matrix::identity(basis.field, n)).rref();
    if pivots.iter().take_while(|&&c| c < k).count() != k {
        return Err(Error::DependentBasis);
    }
    let extra: Vec<usize> = pivots.iter().filter(|&&c| c >= k).map(|&c| c - k).collect();
    Ok(Matrix::identity(basis.field, n).select_columns(&extra))
}

/// Quotient of `F_p^ambient_dim` by the span of the (independent) columns of
/// `subspace`.
pub fn quotient(field: PrimeField, ambient_dim: usize, subspace: &Matrix) -> Result<Quotient> {
    if subspace.rows() != ambient_dim {
        return Err(Error::Shape(format!(
            "quotient: subspace vectors have length {}, ambient dimension is {ambient_dim}",
            subspace.rows()
        )));
    }
    let subspace = if subspace.cols() == 0 {
        Matrix::zeros(field, ambient_dim, 0)
    } else {
        subspace.clone()
    };
    let complement = complement_columns(&subspace)?;
    let k = subspace.cols();
    let q = complement.cols();
    let inv = subspace
        .hstack(&complement)
        .inverse()
        .expect("extended basis is invertible");
    Ok(Quotient {
        projection: inv.block(k, 0, q, ambient_dim),
        section: complement,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f(p: u32) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    fn m(p: u32, rows: &[&[i64]]) -> Matrix {
        Matrix::from_rows(f(p), &rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn rejects_composite_modulus() {
        assert!(PrimeField::new(4).is_err());
        assert!(PrimeField::new(1).is_err());
        assert!(PrimeField::new(251).is_ok());
    }

    #[test]
    fn inverses_mod_p() {
        let k = f(7);
        for a in 1..7 {
            assert_eq!(k.mul(a, k.inv(a).unwrap()), 1);
        }
        assert_eq!(k.inv(0), None);
    }

    #[test]
    fn rref_of_zero() {
        let z = Matrix::zeros(f(2), 2, 2);
        let r = z.rref();
        assert!(r.reduced.is_zero());
        assert!(r.pivots.is_empty());
    }

    #[test]
    fn rref_of_identity() {
        let i = Matrix::identity(f(3), 3);
        let r = i.rref();
        assert_eq!(r.reduced, i);
        assert_eq!(r.pivots, vec![0, 1, 2]);
    }

    #[test]
    fn rank_one_over_f5() {
        let a = m(5, &[&[1, 2], &[2, 4]]);
        let r = a.rref();
        assert_eq!(r.pivots, vec![0]);
        assert_eq!(a.rank(), 1);
        assert_eq!(a.image_basis().cols(), 1);
    }

    #[test]
    fn kernel_of_identity_is_empty() {
        assert_eq!(Matrix::identity(f(3), 4).kernel_basis().cols(), 0);
    }

    #[test]
    fn kernel_of_zero_functional() {
        let z = Matrix::zeros(f(2), 1, 2);
        assert_eq!(z.kernel_basis().cols(), 2);
    }

    #[test]
    fn kernel_matches_enumeration_over_f2() {
        let a = m(2, &[&[1, 1, 0], &[0, 1, 1]]);
        // brute force: every vector of F_2^3
        let mut nonzero_kernel = Vec::new();
        for bits in 1u32..8 {
            let v: Vec<u32> = (0..3).map(|i| (bits >> i) & 1).collect();
            let x = Matrix::column_vector(f(2), &v);
            if a.mul(&x).is_zero() {
                nonzero_kernel.push(v);
            }
        }
        assert_eq!(nonzero_kernel, vec![vec![1, 1, 1]]);
        let k = a.kernel_basis();
        assert_eq!(k.cols(), 1);
        assert_eq!(k.column(0), vec![1, 1, 1]);
    }

    #[test]
    fn image_of_identity_and_zero() {
        let i = Matrix::identity(f(3), 3);
        assert_eq!(i.image_basis(), i);
        assert_eq!(Matrix::zeros(f(3), 3, 3).image_basis().cols(), 0);
    }

    #[test]
    fn solve_identity_returns_rhs() {
        let i = Matrix::identity(f(5), 3);
        let b = m(5, &[&[1, 2], &[3, 4], &[0, 1]]);
        let s = i.solve(&b).unwrap().unwrap();
        assert_eq!(s.particular, b);
        assert_eq!(s.kernel.cols(), 0);
    }

    #[test]
    fn solve_zero_with_nonzero_rhs_is_inconsistent() {
        let z = Matrix::zeros(f(3), 2, 2);
        let b = Matrix::column_vector(f(3), &[1, 0]);
        assert!(z.solve(&b).unwrap().is_none());
    }

    #[test]
    fn solve_rejects_row_mismatch() {
        let a = Matrix::identity(f(3), 2);
        let b = Matrix::zeros(f(3), 3, 1);
        assert!(matches!(a.solve(&b), Err(Error::Shape(_))));
    }

    #[test]
    fn zero_dimensional_shapes() {
        let k = f(3);
        let a = Matrix::zeros(k, 0, 3);
        assert_eq!(a.rank(), 0);
        assert_eq!(a.kernel_basis().shape(), (3, 3));
        let b = Matrix::zeros(k, 3, 0);
        assert_eq!(b.kernel_basis().shape(), (0, 0));
        assert_eq!(b.image_basis().shape(), (3, 0));
        let e = Matrix::zeros(k, 0, 0);
        assert_eq!(e.mul(&e).shape(), (0, 0));
        assert!(e.solve(&Matrix::zeros(k, 0, 2)).unwrap().is_some());
        let s = Matrix::zeros(k, 2, 0);
        let sol = s.solve(&Matrix::zeros(k, 2, 1)).unwrap().unwrap();
        assert_eq!(sol.particular.shape(), (0, 1));
    }

    #[test]
    fn quotient_by_everything_and_nothing() {
        let k = f(3);
        let q = quotient(k, 3, &Matrix::identity(k, 3)).unwrap();
        assert_eq!(q.projection.shape(), (0, 3));
        let q = quotient(k, 3, &Matrix::zeros(k, 3, 0)).unwrap();
        assert_eq!(q.projection, Matrix::identity(k, 3));
        assert_eq!(q.section, Matrix::identity(k, 3));
    }

    #[test]
    fn quotient_by_a_line_in_f3_squared() {
        let k = f(3);
        let line = Matrix::column_vector(k, &[1, 2]);
        let q = quotient(k, 2, &line).unwrap();
        assert_eq!(q.projection.rank(), 1);
        assert!(q.projection.mul(&line).is_zero());
        assert_eq!(q.projection.mul(&q.section), Matrix::identity(k, 1));
    }

    #[test]
    fn quotient_rejects_dependent_basis() {
        let k = f(2);
        let s = m(2, &[&[1, 1], &[0, 0]]);
        assert!(matches!(quotient(k, 2, &s), Err(Error::DependentBasis)));
    }

    fn arb_matrix() -> impl Strategy<Value = Matrix> {
        (prop::sample::select(vec![2u32, 3, 5, 7]), 0usize..6, 0usize..6, any::<u64>()).prop_map(
            |(p, r, c, seed)| {
                use rand::SeedableRng;
                let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
                Matrix::random(PrimeField::new(p).unwrap(), r, c, &mut rng)
            },
        )
    }

    proptest! {
        #[test]
        fn rank_nullity(a in arb_matrix()) {
            let k = a.kernel_basis();
            prop_assert_eq!(a.rank() + k.cols(), a.cols());
            prop_assert!(a.mul(&k).is_zero());
            prop_assert_eq!(k.rank(), k.cols());
        }

        #[test]
        fn rref_is_idempotent(a in arb_matrix()) {
            let r = a.rref().reduced;
            prop_assert_eq!(r.rref().reduced, r);
        }

        #[test]
        fn solve_then_substitute(a in arb_matrix(), seed in any::<u64>()) {
            use rand::SeedableRng;
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let x = Matrix::random(a.field(), a.cols(), 2, &mut rng);
            let b = a.mul(&x);
            let sol = a.solve(&b).unwrap().expect("consistent by construction");
            prop_assert_eq!(a.mul(&sol.particular), b);
            prop_assert!(a.mul(&sol.kernel).is_zero());
        }

        #[test]
        fn one_sided_inverses(a in arb_matrix()) {
            let img = a.image_basis();
            let l = img.left_inverse().unwrap();
            prop_assert_eq!(l.mul(&img), Matrix::identity(a.field(), img.cols()));
        }
    }
}

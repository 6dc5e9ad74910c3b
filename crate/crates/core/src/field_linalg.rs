//! Exact linear algebra over a prime field F_p.
//!
//! Residues are stored as `u32` values in `[0, p)` next to an explicit [`Prime`]
//! modulus; every operation reduces immediately. Vectors are plain slices of
//! residues, matrices are row-major.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("modulus {0} is not prime")]
    CompositeModulus(u64),
    #[error("modulus {0} is too large (must fit in 31 bits)")]
    ModulusTooLarge(u64),
    #[error("vector length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("matrix shape {rows}x{cols} does not match {len} entries")]
    ShapeMismatch {
        rows: usize,
        cols: usize,
        len: usize,
    },
    #[error("moduli differ: {0} vs {1}")]
    ModulusMismatch(u32, u32),
    #[error("matrix is {rows}x{cols}, expected square")]
    NotSquare { rows: usize, cols: usize },
}

/// A validated prime modulus.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u64")]
pub struct Prime(u32);

impl Prime {
    pub fn new(p: u64) -> Result<Self, LinalgError> {
        if p >= 1 << 31 {
            return Err(LinalgError::ModulusTooLarge(p));
        }
        if !is_prime(p) {
            return Err(LinalgError::CompositeModulus(p));
        }
        Ok(Prime(p as u32))
    }

    #[inline]
    pub fn get(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn add(self, a: u32, b: u32) -> u32 {
        let s = a + b;
        if s >= self.0 {
            s - self.0
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            a + self.0 - b
        }
    }

    #[inline]
    pub fn neg(self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.0 - a
        }
    }

    #[inline]
    pub fn mul(self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.0 as u64) as u32
    }

    /// Multiplicative inverse. Panics on zero.
    pub fn inv(self, a: u32) -> u32 {
        assert!(
            !a.is_multiple_of(self.0),
            "zero has no inverse mod {}",
            self.0
        );
        self.pow(a, self.0 - 2)
    }

    pub fn pow(self, a: u32, mut e: u32) -> u32 {
        let mut base = a % self.0;
        let mut acc = 1 % self.0;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Reduces a signed integer into `[0, p)`.
    #[inline]
    pub fn reduce(self, a: i64) -> u32 {
        a.rem_euclid(self.0 as i64) as u32
    }
}

impl fmt::Debug for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl TryFrom<u64> for Prime {
    type Error = LinalgError;
    fn try_from(p: u64) -> Result<Self, Self::Error> {
        Prime::new(p)
    }
}

impl From<Prime> for u64 {
    fn from(p: Prime) -> u64 {
        p.0 as u64
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// A residue together with its modulus.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct FpScalar {
    value: u32,
    modulus: Prime,
}

impl FpScalar {
    pub fn new(value: i64, modulus: Prime) -> Self {
        FpScalar {
            value: modulus.reduce(value),
            modulus,
        }
    }

    pub fn zero(modulus: Prime) -> Self {
        FpScalar { value: 0, modulus }
    }

    pub fn one(modulus: Prime) -> Self {
        FpScalar { value: 1, modulus }
    }

    pub fn value(self) -> u32 {
        self.value
    }

    pub fn modulus(self) -> Prime {
        self.modulus
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    pub fn inv(self) -> Option<Self> {
        (self.value != 0).then(|| FpScalar {
            value: self.modulus.inv(self.value),
            modulus: self.modulus,
        })
    }
}

impl fmt::Debug for FpScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.value, self.modulus)
    }
}

impl fmt::Display for FpScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

macro_rules! scalar_binop {
    ($tr:ident, $method:ident) => {
        impl $tr for FpScalar {
            type Output = FpScalar;
            fn $method(self, rhs: FpScalar) -> FpScalar {
                assert_eq!(self.modulus, rhs.modulus, "mixed moduli");
                FpScalar {
                    value: self.modulus.$method(self.value, rhs.value),
                    modulus: self.modulus,
                }
            }
        }
    };
}

scalar_binop!(Add, add);
scalar_binop!(Sub, sub);
scalar_binop!(Mul, mul);

impl Neg for FpScalar {
    type Output = FpScalar;
    fn neg(self) -> FpScalar {
        FpScalar {
            value: self.modulus.neg(self.value),
            modulus: self.modulus,
        }
    }
}

/// `y += a * x`, entrywise mod p.
#[inline]
pub fn axpy(p: Prime, y: &mut [u32], a: u32, x: &[u32]) {
    debug_assert_eq!(y.len(), x.len());
    if a == 0 {
        return;
    }
    for (yi, &xi) in y.iter_mut().zip(x) {
        if xi != 0 {
            *yi = p.add(*yi, p.mul(a, xi));
        }
    }
}

/// Scales a vector in place.
pub fn scale(p: Prime, v: &mut [u32], a: u32) {
    for x in v.iter_mut() {
        *x = p.mul(*x, a);
    }
}

pub fn is_zero_vec(v: &[u32]) -> bool {
    v.iter().all(|&x| x == 0)
}

/// Reduced row echelon data returned by [`FpMatrix::rref`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    pub rank: usize,
    pub echelon: FpMatrix,
    pub pivots: Vec<usize>,
}

/// A dense matrix over F_p.
#[derive(Clone, PartialEq, Eq)]
pub struct FpMatrix {
    p: Prime,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl FpMatrix {
    pub fn zeros(p: Prime, rows: usize, cols: usize) -> Self {
        FpMatrix {
            p,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(p: Prime, n: usize) -> Self {
        let mut m = Self::zeros(p, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    /// Builds a matrix from row-major integer entries, reducing each mod p.
    pub fn new(p: Prime, rows: usize, cols: usize, entries: &[i64]) -> Result<Self, LinalgError> {
        if entries.len() != rows * cols {
            return Err(LinalgError::ShapeMismatch {
                rows,
                cols,
                len: entries.len(),
            });
        }
        Ok(FpMatrix {
            p,
            rows,
            cols,
            data: entries.iter().map(|&x| p.reduce(x)).collect(),
        })
    }

    /// Builds a matrix whose rows are the given residue vectors.
    pub fn from_rows(p: Prime, cols: usize, rows: &[Vec<u32>]) -> Result<Self, LinalgError> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(LinalgError::LengthMismatch {
                    expected: cols,
                    got: r.len(),
                });
            }
            data.extend(r.iter().map(|&x| x % p.get()));
        }
        Ok(FpMatrix {
            p,
            rows: rows.len(),
            cols,
            data,
        })
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: u32) {
        self.data[r * self.cols + c] = v % self.p.get();
    }

    pub fn row(&self, r: usize) -> &[u32] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vectors(&self) -> Vec<Vec<u32>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn mul_vec(&self, v: &[u32]) -> Result<Vec<u32>, LinalgError> {
        if v.len() != self.cols {
            return Err(LinalgError::LengthMismatch {
                expected: self.cols,
                got: v.len(),
            });
        }
        Ok((0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .fold(0, |acc, (&a, &b)| self.p.add(acc, self.p.mul(a, b)))
            })
            .collect())
    }

    /// Reduced row echelon form. Pivots are the first nonzero entry of each
    /// row scanning left to right, scaled to 1.
    pub fn rref(&self) -> Rref {
        let p = self.p;
        let mut m = self.clone();
        let cols = m.cols;
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == m.rows {
                break;
            }
            let Some(found) = (r..m.rows).find(|&i| m.data[i * cols + c] != 0) else {
                continue;
            };
            if found != r {
                for k in 0..cols {
                    m.data.swap(found * cols + k, r * cols + k);
                }
            }
            let inv = p.inv(m.data[r * cols + c]);
            for k in 0..cols {
                m.data[r * cols + k] = p.mul(m.data[r * cols + k], inv);
            }
            let pivot_row = m.row(r).to_vec();
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let f = m.data[i * cols + c];
                if f != 0 {
                    axpy(
                        p,
                        &mut m.data[i * cols..(i + 1) * cols],
                        p.neg(f),
                        &pivot_row,
                    );
                }
            }
            pivots.push(c);
            r += 1;
        }
        Rref {
            rank: pivots.len(),
            echelon: m,
            pivots,
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    /// A basis of `{ v : self * v = 0 }`, one vector per free column.
    pub fn nullspace(&self) -> Vec<Vec<u32>> {
        let p = self.p;
        let Rref {
            echelon, pivots, ..
        } = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        (0..self.cols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut v = vec![0; self.cols];
                v[free] = 1;
                for (r, &pc) in pivots.iter().enumerate() {
                    v[pc] = p.neg(echelon.get(r, free));
                }
                v
            })
            .collect()
    }
}

impl FpMatrix {
    /// Inverse of a square matrix, or `None` if it is singular.
    pub fn inverse(&self) -> Result<Option<FpMatrix>, LinalgError> {
        if self.rows != self.cols {
            return Err(LinalgError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        let mut aug = FpMatrix::zeros(self.p, n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                aug.set(r, c, self.get(r, c));
            }
            aug.set(r, n + r, 1);
        }
        let Rref {
            echelon, pivots, ..
        } = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Ok(None);
        }
        let mut inv = FpMatrix::zeros(self.p, n, n);
        for r in 0..n {
            for c in 0..n {
                inv.set(r, c, echelon.get(r, n + c));
            }
        }
        Ok(Some(inv))
    }

    /// Row vector times matrix.
    pub fn vec_mul(&self, v: &[u32]) -> Result<Vec<u32>, LinalgError> {
        if v.len() != self.rows {
            return Err(LinalgError::LengthMismatch {
                expected: self.rows,
                got: v.len(),
            });
        }
        let mut out = vec![0; self.cols];
        for (r, &a) in v.iter().enumerate().filter(|(_, &a)| a != 0) {
            axpy(self.p, &mut out, a, self.row(r));
        }
        Ok(out)
    }
}

impl fmt::Debug for FpMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "FpMatrix {}x{} over F_{}", self.rows, self.cols, self.p)?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", self.row(r))?;
        }
        Ok(())
    }
}

/// Whether `v` lies in the span of `basis`.
pub fn in_span(p: Prime, v: &[u32], basis: &[Vec<u32>]) -> Result<bool, LinalgError> {
    let mut space = Subspace::new(p, v.len());
    for b in basis {
        if b.len() != v.len() {
            return Err(LinalgError::LengthMismatch {
                expected: v.len(),
                got: b.len(),
            });
        }
        space.insert(b.clone());
    }
    Ok(space.contains(v))
}

/// A subspace of F_p^n kept in reduced row echelon form.
///
/// Rows are sorted by pivot column; each pivot column is zero in every other row.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    p: Prime,
    len: usize,
    rows: Vec<Vec<u32>>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn new(p: Prime, len: usize) -> Self {
        Subspace {
            p,
            len,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn spanned_by<I: IntoIterator<Item = Vec<u32>>>(p: Prime, len: usize, vectors: I) -> Self {
        let mut s = Self::new(p, len);
        for v in vectors {
            s.insert(v);
        }
        s
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn ambient_len(&self) -> usize {
        self.len
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn basis(&self) -> &[Vec<u32>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Subtracts the span from `v` in place; afterwards `v` vanishes on every pivot column.
    pub fn reduce_in_place(&self, v: &mut [u32]) {
        for (row, &c) in self.rows.iter().zip(&self.pivots) {
            let f = v[c];
            if f != 0 {
                axpy(self.p, v, self.p.neg(f), row);
            }
        }
    }

    pub fn reduce(&self, v: &[u32]) -> Vec<u32> {
        let mut w = v.to_vec();
        self.reduce_in_place(&mut w);
        w
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        is_zero_vec(&self.reduce(v))
    }

    /// Coordinates of `v` with respect to [`Subspace::basis`], if `v` lies in the span.
    pub fn coordinates(&self, v: &[u32]) -> Option<Vec<u32>> {
        self.contains(v)
            .then(|| self.pivots.iter().map(|&c| v[c]).collect())
    }

    /// Adds `v` to the span. Returns `true` if the dimension grew.
    pub fn insert(&mut self, mut v: Vec<u32>) -> bool {
        assert_eq!(v.len(), self.len, "subspace vector length");
        for x in v.iter_mut() {
            *x %= self.p.get();
        }
        self.reduce_in_place(&mut v);
        let Some(c) = v.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = self.p.inv(v[c]);
        scale(self.p, &mut v, inv);
        for row in self.rows.iter_mut() {
            let f = row[c];
            if f != 0 {
                axpy(self.p, row, self.p.neg(f), &v);
            }
        }
        let at = self.pivots.partition_point(|&q| q < c);
        self.pivots.insert(at, c);
        self.rows.insert(at, v);
        true
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.rows.iter().all(|v| self.contains(v))
    }

    /// Vectors of `self` supported only on the columns where `mask` is true.
    pub fn intersect_coordinate_block(&self, mask: &[bool]) -> Subspace {
        assert_eq!(mask.len(), self.len);
        // Reorder columns so the block comes last, echelonize, keep rows pivoting in the block.
        let order: Vec<usize> = (0..self.len)
            .filter(|&c| !mask[c])
            .chain((0..self.len).filter(|&c| mask[c]))
            .collect();
        let outside = mask.iter().filter(|&&b| !b).count();
        let mut permuted = Subspace::new(self.p, self.len);
        for row in &self.rows {
            permuted.insert(order.iter().map(|&c| row[c]).collect());
        }
        let mut out = Subspace::new(self.p, self.len);
        for (row, &piv) in permuted.rows.iter().zip(&permuted.pivots) {
            if piv >= outside {
                let mut v = vec![0; self.len];
                for (k, &c) in order.iter().enumerate() {
                    v[c] = row[k];
                }
                out.insert(v);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u64) -> Prime {
        Prime::new(p).unwrap()
    }

    #[test]
    fn composite_modulus_rejected() {
        assert_eq!(Prime::new(6), Err(LinalgError::CompositeModulus(6)));
        assert_eq!(Prime::new(1), Err(LinalgError::CompositeModulus(1)));
        assert!(Prime::new(7).is_ok());
    }

    #[test]
    fn inverse_round_trip() {
        let m = FpMatrix::new(f(7), 3, 3, &[1, 2, 0, 0, 1, 3, 4, 0, 1]).unwrap();
        let inv = m.inverse().unwrap().unwrap();
        for r in 0..3 {
            let mut e = vec![0; 3];
            e[r] = 1;
            assert_eq!(inv.vec_mul(&m.vec_mul(&e).unwrap()).unwrap(), e);
        }
        let singular = FpMatrix::new(f(3), 2, 2, &[1, 2, 2, 1]).unwrap();
        assert_eq!(singular.inverse().unwrap(), None);
        assert!(FpMatrix::zeros(f(3), 2, 3).inverse().is_err());
    }

    #[test]
    fn identity_rref() {
        let r = FpMatrix::identity(f(5), 2).rref();
        assert_eq!(r.rank, 2);
        assert_eq!(r.pivots, vec![0, 1]);
    }

    #[test]
    fn singular_over_f3() {
        let m = FpMatrix::new(f(3), 2, 2, &[1, 2, 2, 1]).unwrap();
        let r = m.rref();
        assert_eq!(r.rank, 1);
        assert_eq!(r.echelon.row(0), &[1, 2]);
        let ns = m.nullspace();
        assert_eq!(ns.len(), 1);
        // x + 2y = 0 mod 3: (1, 1) up to scaling
        assert_eq!(ns[0][0], ns[0][1]);
        assert!(is_zero_vec(&m.mul_vec(&ns[0]).unwrap()));
    }

    #[test]
    fn zero_matrices() {
        assert_eq!(FpMatrix::zeros(f(7), 3, 3).rank(), 0);
        assert!(FpMatrix::identity(f(5), 3).nullspace().is_empty());
        assert_eq!(FpMatrix::zeros(f(3), 2, 2).nullspace().len(), 2);
    }

    #[test]
    fn span_membership() {
        let p = f(5);
        let basis = vec![vec![0, 1]];
        assert!(in_span(p, &[0, 0], &basis).unwrap());
        assert!(in_span(p, &[0, 3], &basis).unwrap());
        assert!(!in_span(p, &[1, 0], &basis).unwrap());
        assert!(matches!(
            in_span(p, &[1, 0, 0], &basis),
            Err(LinalgError::LengthMismatch { .. })
        ));
    }

    #[test]
    fn shape_mismatch() {
        assert!(FpMatrix::new(f(2), 2, 2, &[1, 0, 1]).is_err());
    }

    #[test]
    fn scalar_arithmetic() {
        let p = f(7);
        let a = FpScalar::new(3, p);
        let b = FpScalar::new(-2, p);
        assert_eq!((a + b).value(), 1);
        assert_eq!((a * b).value(), 1);
        assert_eq!((a - b).value(), 5);
        assert_eq!((a * a.inv().unwrap()).value(), 1);
        assert!(FpScalar::zero(p).inv().is_none());
    }

    #[test]
    fn block_intersection() {
        let p = f(3);
        // span{(1,1,0), (0,1,1)} meets the block {1,2} in span{(0,1,1)}
        let s = Subspace::spanned_by(p, 3, [vec![1, 1, 0], vec![0, 1, 1]]);
        let block = s.intersect_coordinate_block(&[false, true, true]);
        assert_eq!(block.dim(), 1);
        assert!(block.contains(&[0, 1, 1]));
    }
}

//! Symmetric matrices over `F_q`.
//!
//! A [`SymMatrix`] stores the upper triangle row by row: `(0,0), (0,1), ...,
//! (0,m-1), (1,1), ..., (m-1,m-1)`. That order is the canonical coordinate
//! order used everywhere else: evaluation points, generator matrices and the
//! lexicographic enumeration of `S_m`.
//!
//! Note that with this order the entries after the first row are exactly the
//! packed entries of the trailing `(m-1) x (m-1)` minor.

mod census;
mod diag;
mod enumerate;

pub use census::{
    census, class_count, cone_size, hyp_minus_ell, projective_size, rank_count, type_count,
    RankCensus,
};
pub use diag::{
    canonical_diagonal, canonical_form, congruence_diagonalize, rank, DiagForm, Diagonalization,
    RankDisc,
};
pub(crate) use diag::{classify_packed, MAX_M};

pub(crate) use enumerate::increment as increment_digits;
pub use enumerate::{space_size, EnumMode, Enumerator, SymMatrixIter, DEFAULT_BUDGET};

use std::fmt;

use crate::error::{invalid, Error, Result};
use crate::gf::{Fe, FieldSpec};

/// Number of packed entries of an `m x m` symmetric matrix, `m(m+1)/2`.
pub const fn packed_len(m: usize) -> usize {
    m * (m + 1) / 2
}

/// Position of logical entry `(i, j)` in the packed upper triangle.
#[inline]
pub const fn packed_index(m: usize, i: usize, j: usize) -> usize {
    let (i, j) = if i <= j { (i, j) } else { (j, i) };
    i * m - i * (i.wrapping_sub(1)) / 2 + (j - i)
}

/// `f_k^delta(A) = A_11 + ... + A_{k-1,k-1} + delta * A_kk` on packed
/// residues; `k = 0` is the zero functional.
#[inline]
pub(crate) fn diagonal_functional_raw(
    q: u32,
    m: usize,
    k: usize,
    delta: u32,
    packed: &[u32],
) -> u32 {
    if k == 0 {
        return 0;
    }
    let mut acc = 0u64;
    for i in 0..k - 1 {
        acc += packed[packed_index(m, i, i)] as u64;
    }
    ((acc + delta as u64 * packed[packed_index(m, k - 1, k - 1)] as u64) % q as u64) as u32
}

/// Evaluates `f_k^delta` at `a`. Requires `k <= a.m()`.
pub fn diagonal_functional(field: &FieldSpec, k: usize, delta: Fe, a: &SymMatrix) -> Result<Fe> {
    if k > a.m() {
        return Err(invalid(format!("k = {k} exceeds m = {}", a.m())));
    }
    Ok(Fe(diagonal_functional_raw(
        field.order(),
        a.m(),
        k,
        delta.0,
        &a.raw(),
    )))
}

/// A symmetric `m x m` matrix over `F_q` in packed upper-triangle storage.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SymMatrix {
    m: usize,
    entries: Vec<Fe>,
}

impl SymMatrix {
    pub fn zero(m: usize) -> SymMatrix {
        SymMatrix {
            m,
            entries: vec![Fe::ZERO; packed_len(m)],
        }
    }

    pub fn identity(m: usize) -> SymMatrix {
        let mut a = SymMatrix::zero(m);
        for i in 0..m {
            a.set(i, i, Fe::ONE);
        }
        a
    }

    pub fn diagonal(diag: &[Fe]) -> SymMatrix {
        let mut a = SymMatrix::zero(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            a.set(i, i, d);
        }
        a
    }

    /// `E_ij + E_ji` for `i != j`, `E_ii` otherwise.
    pub fn unit(m: usize, i: usize, j: usize) -> SymMatrix {
        let mut a = SymMatrix::zero(m);
        a.set(i, j, Fe::ONE);
        a
    }

    pub fn from_packed(m: usize, entries: Vec<Fe>) -> Result<SymMatrix> {
        if entries.len() != packed_len(m) {
            return Err(Error::DimensionMismatch {
                left: entries.len(),
                right: packed_len(m),
            });
        }
        Ok(SymMatrix { m, entries })
    }

    pub(crate) fn from_raw(m: usize, raw: &[u32]) -> SymMatrix {
        debug_assert_eq!(raw.len(), packed_len(m));
        SymMatrix {
            m,
            entries: raw.iter().map(|&v| Fe(v)).collect(),
        }
    }

    /// Builds a matrix from full rows, reducing every entry into the field.
    /// Fails if the rows are not square or not symmetric.
    pub fn from_rows(field: &FieldSpec, rows: &[Vec<i64>]) -> Result<SymMatrix> {
        let m = rows.len();
        let mut a = SymMatrix::zero(m);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != m {
                return Err(Error::DimensionMismatch {
                    left: row.len(),
                    right: m,
                });
            }
            for (j, &v) in row.iter().enumerate() {
                let x = field.elem(v);
                if j < i {
                    if a.get(i, j) != x {
                        return Err(invalid(format!("entry ({i},{j}) breaks symmetry")));
                    }
                } else {
                    a.set(i, j, x);
                }
            }
        }
        Ok(a)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn packed(&self) -> &[Fe] {
        &self.entries
    }

    pub(crate) fn raw(&self) -> Vec<u32> {
        self.entries.iter().map(|e| e.0).collect()
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Fe {
        self.entries[packed_index(self.m, i, j)]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Fe) {
        self.entries[packed_index(self.m, i, j)] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    /// Deletes the first row and column.
    pub fn trailing_minor(&self) -> SymMatrix {
        if self.m == 0 {
            return self.clone();
        }
        SymMatrix {
            m: self.m - 1,
            entries: self.entries[self.m..].to_vec(),
        }
    }

    pub fn to_dense(&self) -> Matrix {
        let mut d = Matrix::zero(self.m);
        for i in 0..self.m {
            for j in 0..self.m {
                d.set(i, j, self.get(i, j));
            }
        }
        d
    }

    /// `P A P^T`.
    pub fn congruent(&self, field: &FieldSpec, p: &Matrix) -> Result<SymMatrix> {
        if p.n() != self.m {
            return Err(Error::DimensionMismatch {
                left: p.n(),
                right: self.m,
            });
        }
        let prod = p.mul(field, &self.to_dense())?.mul(field, &p.transpose())?;
        Ok(prod.to_symmetric().expect("congruence preserves symmetry"))
    }
}

impl fmt::Display for SymMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.m {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.m {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
        }
        write!(f, "]")
    }
}

/// A dense square matrix over `F_q`, used for congruence transforms and raw
/// (not necessarily symmetric) coefficient matrices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    n: usize,
    data: Vec<Fe>,
}

impl Matrix {
    pub fn zero(n: usize) -> Matrix {
        Matrix {
            n,
            data: vec![Fe::ZERO; n * n],
        }
    }

    pub fn identity(n: usize) -> Matrix {
        let mut a = Matrix::zero(n);
        for i in 0..n {
            a.set(i, i, Fe::ONE);
        }
        a
    }

    pub fn from_rows(field: &FieldSpec, rows: &[Vec<i64>]) -> Result<Matrix> {
        let n = rows.len();
        let mut a = Matrix::zero(n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    left: row.len(),
                    right: n,
                });
            }
            for (j, &v) in row.iter().enumerate() {
                a.set(i, j, field.elem(v));
            }
        }
        Ok(a)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Fe {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Fe) {
        self.data[i * self.n + j] = v;
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zero(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn mul(&self, field: &FieldSpec, other: &Matrix) -> Result<Matrix> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                left: self.n,
                right: other.n,
            });
        }
        let n = self.n;
        let mut out = Matrix::zero(n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = Fe::ZERO;
                for k in 0..n {
                    acc = field.add(acc, field.mul(self.get(i, k), other.get(k, j)));
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    /// Rank by ordinary Gaussian elimination.
    pub fn rank(&self, field: &FieldSpec) -> usize {
        let n = self.n;
        let mut a = self.data.clone();
        let mut rank = 0;
        for col in 0..n {
            let Some(piv) = (rank..n).find(|&r| !a[r * n + col].is_zero()) else {
                continue;
            };
            for c in 0..n {
                a.swap(rank * n + c, piv * n + c);
            }
            let inv = field.inv(a[rank * n + col]).unwrap();
            for r in 0..n {
                if r == rank || a[r * n + col].is_zero() {
                    continue;
                }
                let factor = field.mul(a[r * n + col], inv);
                for c in 0..n {
                    let v = field.sub(a[r * n + c], field.mul(factor, a[rank * n + c]));
                    a[r * n + c] = v;
                }
            }
            rank += 1;
        }
        rank
    }

    pub fn is_invertible(&self, field: &FieldSpec) -> bool {
        self.rank(field) == self.n
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn to_symmetric(&self) -> Option<SymMatrix> {
        if !self.is_symmetric() {
            return None;
        }
        let mut s = SymMatrix::zero(self.n);
        for i in 0..self.n {
            for j in i..self.n {
                s.set(i, j, self.get(i, j));
            }
        }
        Some(s)
    }
}

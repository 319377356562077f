//! Congruence diagonalization `L A L^T = D`.
//!
//! Symmetric elimination: pick a non-zero diagonal pivot in the trailing
//! block; if the block is non-zero but its diagonal vanishes, add row/column
//! `j` to row/column `i` for some non-zero `a_ij`, which puts `2 a_ij != 0` on
//! the diagonal (odd characteristic). Pivots are swapped to the front, so the
//! non-zero diagonal entries of `D` precede the zeros.

use super::{packed_index, Matrix, SymMatrix};
use crate::gf::{Fe, FieldSpec, SquareClass};

/// Largest side length handled by the stack-allocated fast path.
pub(crate) const MAX_M: usize = 8;

/// Result of [`congruence_diagonalize`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagonalization {
    /// Invertible `L` with `L A L^T = diag(diagonal)`.
    pub transform: Matrix,
    pub diagonal: Vec<Fe>,
    pub rank: usize,
}

impl Diagonalization {
    pub fn diagonal_matrix(&self) -> SymMatrix {
        SymMatrix::diagonal(&self.diagonal)
    }
}

struct Work<'f> {
    field: &'f FieldSpec,
    d: Matrix,
    l: Matrix,
}

impl Work<'_> {
    fn swap(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        let n = self.d.n();
        for c in 0..n {
            let (x, y) = (self.d.get(i, c), self.d.get(j, c));
            self.d.set(i, c, y);
            self.d.set(j, c, x);
            let (x, y) = (self.l.get(i, c), self.l.get(j, c));
            self.l.set(i, c, y);
            self.l.set(j, c, x);
        }
        for r in 0..n {
            let (x, y) = (self.d.get(r, i), self.d.get(r, j));
            self.d.set(r, i, y);
            self.d.set(r, j, x);
        }
    }

    /// row_t += c * row_s and col_t += c * col_s; L row_t += c * L row_s.
    fn add_multiple(&mut self, t: usize, s: usize, c: Fe) {
        let f = self.field;
        let n = self.d.n();
        for k in 0..n {
            let v = f.add(self.d.get(t, k), f.mul(c, self.d.get(s, k)));
            self.d.set(t, k, v);
            let v = f.add(self.l.get(t, k), f.mul(c, self.l.get(s, k)));
            self.l.set(t, k, v);
        }
        for k in 0..n {
            let v = f.add(self.d.get(k, t), f.mul(c, self.d.get(k, s)));
            self.d.set(k, t, v);
        }
    }
}

/// Finds an invertible `L` and a diagonal `D` with `L A L^T = D`.
pub fn congruence_diagonalize(field: &FieldSpec, a: &SymMatrix) -> Diagonalization {
    let n = a.m();
    let mut w = Work {
        field,
        d: a.to_dense(),
        l: Matrix::identity(n),
    };
    let mut rank = 0;
    for p in 0..n {
        let pivot = match (p..n).find(|&i| !w.d.get(i, i).is_zero()) {
            Some(i) => i,
            None => {
                let off = (p..n)
                    .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                    .find(|&(i, j)| !w.d.get(i, j).is_zero());
                let Some((i, j)) = off else { break };
                w.add_multiple(i, j, Fe::ONE);
                i
            }
        };
        w.swap(p, pivot);
        let inv = field.inv(w.d.get(p, p)).expect("pivot is non-zero");
        for r in p + 1..n {
            let x = w.d.get(r, p);
            if x.is_zero() {
                continue;
            }
            let c = field.neg(field.mul(x, inv));
            w.add_multiple(r, p, c);
        }
        rank += 1;
    }
    let diagonal = (0..n).map(|i| w.d.get(i, i)).collect();
    Diagonalization {
        transform: w.l,
        diagonal,
        rank,
    }
}

/// Rank and discriminant class of a symmetric matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RankDisc {
    pub rank: u8,
    /// `chi` of the product of the non-zero diagonal entries after
    /// diagonalization; `+1` (empty product) for the zero matrix.
    pub disc: i8,
}

impl RankDisc {
    /// Hyperbolic test for even rank `2s`: `chi((-1)^s * disc) = +1`.
    /// The zero matrix counts as hyperbolic.
    pub fn is_hyperbolic(self, chi_minus_one: i8) -> bool {
        debug_assert!(self.rank % 2 == 0);
        let s = (self.rank / 2) as u32;
        chi_minus_one.pow(s) * self.disc == 1
    }

    pub fn disc_class(self) -> Option<SquareClass> {
        if self.rank == 0 {
            None
        } else {
            SquareClass::from_sign(self.disc)
        }
    }
}

/// Congruence-invariant summary of a symmetric matrix: rank and the square
/// class of its discriminant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagForm {
    pub rank: usize,
    /// `None` for the zero matrix.
    pub delta_class: Option<SquareClass>,
    pub transform: Matrix,
}

pub fn canonical_form(field: &FieldSpec, a: &SymMatrix) -> DiagForm {
    let dz = congruence_diagonalize(field, a);
    let disc = dz
        .diagonal
        .iter()
        .filter(|d| !d.is_zero())
        .fold(1i8, |acc, &d| acc * field.chi(d));
    DiagForm {
        rank: dz.rank,
        delta_class: if dz.rank == 0 {
            None
        } else {
            SquareClass::from_sign(disc)
        },
        transform: dz.transform,
    }
}

/// `diag(1, ..., 1, delta, 0, ..., 0)` congruent to `a`, with `delta` the
/// fixed representative of the discriminant class.
pub fn canonical_diagonal(field: &FieldSpec, a: &SymMatrix) -> SymMatrix {
    let form = canonical_form(field, a);
    let mut diag = vec![Fe::ZERO; a.m()];
    for d in diag.iter_mut().take(form.rank) {
        *d = Fe::ONE;
    }
    if let Some(class) = form.delta_class {
        diag[form.rank - 1] = field.class_rep(class);
    }
    SymMatrix::diagonal(&diag)
}

pub fn rank(field: &FieldSpec, a: &SymMatrix) -> usize {
    classify_packed(field, a.m(), &a.raw()).rank as usize
}

/// Stack-allocated rank/discriminant computation on packed residues; the
/// hot path of every enumeration. Works on the Schur complement of the
/// trailing block only, so no transform is tracked.
#[inline]
pub(crate) fn classify_packed(field: &FieldSpec, m: usize, packed: &[u32]) -> RankDisc {
    debug_assert!(m <= MAX_M);
    let q = field.order();
    let mut a = [[0u32; MAX_M]; MAX_M];
    for i in 0..m {
        for j in i..m {
            let v = packed[packed_index(m, i, j)];
            a[i][j] = v;
            a[j][i] = v;
        }
    }
    let mut rank = 0u8;
    let mut disc = 1i8;
    for p in 0..m {
        let mut pivot = (p..m).find(|&i| a[i][i] != 0);
        if pivot.is_none() {
            'search: for i in p..m {
                for j in i + 1..m {
                    if a[i][j] != 0 {
                        // row_i += row_j, col_i += col_j inside the block
                        for k in p..m {
                            let v = a[i][k] + a[j][k];
                            a[i][k] = if v >= q { v - q } else { v };
                        }
                        for k in p..m {
                            let v = a[k][i] + a[k][j];
                            a[k][i] = if v >= q { v - q } else { v };
                        }
                        pivot = Some(i);
                        break 'search;
                    }
                }
            }
        }
        let Some(piv) = pivot else { break };
        if piv != p {
            a.swap(piv, p);
            for row in a.iter_mut().take(m) {
                row.swap(piv, p);
            }
        }
        let d = a[p][p];
        disc *= field.chi_raw(d);
        rank += 1;
        let dinv = field.inv_raw(d);
        for r in p + 1..m {
            let x = a[r][p];
            if x == 0 {
                continue;
            }
            let c = x * dinv % q;
            for k in p + 1..m {
                let sub = c * a[p][k] % q;
                let v = a[r][k];
                a[r][k] = if v >= sub { v - sub } else { v + q - sub };
            }
        }
    }
    RankDisc { rank, disc }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symmat::Enumerator;

    fn check_roundtrip(f: &FieldSpec, a: &SymMatrix) -> Diagonalization {
        let dz = congruence_diagonalize(f, a);
        let back = a.congruent(f, &dz.transform).unwrap();
        assert_eq!(back, dz.diagonal_matrix(), "L A L^T != D for {a}");
        assert!(dz.transform.is_invertible(f));
        let nz = dz.diagonal.iter().filter(|d| !d.is_zero()).count();
        assert_eq!(nz, dz.rank);
        // non-zero entries first
        assert!(dz.diagonal[..dz.rank].iter().all(|d| !d.is_zero()));
        dz
    }

    #[test]
    fn zero_matrix_is_already_diagonal() {
        let f = FieldSpec::new(3).unwrap();
        for m in 0..4 {
            let dz = check_roundtrip(&f, &SymMatrix::zero(m));
            assert_eq!(dz.rank, 0);
            assert_eq!(dz.transform, Matrix::identity(m));
        }
    }

    #[test]
    fn hyperbolic_plane_needs_the_off_diagonal_trick() {
        let f = FieldSpec::new(3).unwrap();
        let a = SymMatrix::from_rows(&f, &[vec![0, 1], vec![1, 0]]).unwrap();
        let dz = check_roundtrip(&f, &a);
        assert_eq!(dz.rank, 2);
        let prod = f.mul(dz.diagonal[0], dz.diagonal[1]);
        // det is congruence-invariant up to squares; det A = -1
        assert_eq!(f.chi(prod), f.chi(f.elem(-1)));
    }

    #[test]
    fn unit_matrix_stays_put() {
        let f = FieldSpec::new(3).unwrap();
        let a = SymMatrix::unit(3, 0, 0);
        let dz = check_roundtrip(&f, &a);
        assert_eq!(dz.diagonal_matrix(), a);
        assert_eq!(dz.rank, 1);
    }

    #[test]
    fn canonical_form_examples() {
        let f3 = FieldSpec::new(3).unwrap();
        for k in 1..5 {
            let form = canonical_form(&f3, &SymMatrix::identity(k));
            assert_eq!(
                (form.rank, form.delta_class),
                (k, Some(SquareClass::Square))
            );
        }
        let d = SymMatrix::diagonal(&[Fe(1), Fe(2)]);
        let form = canonical_form(&f3, &d);
        assert_eq!(
            (form.rank, form.delta_class),
            (2, Some(SquareClass::Nonsquare))
        );

        let f5 = FieldSpec::new(5).unwrap();
        let d = SymMatrix::diagonal(&[Fe(2), Fe(2), Fe(0)]);
        let form = canonical_form(&f5, &d);
        assert_eq!(
            (form.rank, form.delta_class),
            (2, Some(SquareClass::Square))
        );

        assert_eq!(canonical_form(&f5, &SymMatrix::zero(3)).delta_class, None);
    }

    #[test]
    fn roundtrip_exhaustive_q3() {
        let f = FieldSpec::new(3).unwrap();
        for m in 1..=4 {
            for a in Enumerator::new(&f, m)
                .iter(crate::symmat::EnumMode::All)
                .unwrap()
            {
                check_roundtrip(&f, &a);
            }
        }
    }

    #[test]
    fn fast_path_agrees_with_tracked_diagonalization() {
        for q in [3u64, 5, 7] {
            let f = FieldSpec::new(q).unwrap();
            let max_m = if q == 3 { 4 } else { 3 };
            for m in 0..=max_m {
                for a in Enumerator::new(&f, m)
                    .iter(crate::symmat::EnumMode::All)
                    .unwrap()
                {
                    let form = canonical_form(&f, &a);
                    let fast = classify_packed(&f, m, &a.raw());
                    assert_eq!(fast.rank as usize, form.rank);
                    assert_eq!(fast.disc_class(), form.delta_class, "{a}");
                }
            }
        }
    }

    #[test]
    fn canonical_diagonal_has_same_invariants() {
        let f = FieldSpec::new(5).unwrap();
        for a in Enumerator::new(&f, 3)
            .iter(crate::symmat::EnumMode::All)
            .unwrap()
        {
            let c = canonical_diagonal(&f, &a);
            let (fa, fc) = (canonical_form(&f, &a), canonical_form(&f, &c));
            assert_eq!((fa.rank, fa.delta_class), (fc.rank, fc.delta_class));
        }
    }
}

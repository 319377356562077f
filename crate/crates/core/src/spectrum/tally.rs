//! Stratum tallies of `S_n`.
//!
//! One pass over `S_n` records, for every matrix `B`, its rank, its
//! discriminant and the square class of `f_j^delta(B)` for every `j` and
//! both classes of `delta`. Every sum over `B` in the weight formulas depends
//! on `B` only through those data, and so do the brute-force weights and the
//! kernel counts `p`, `h`, `e`.

use num_bigint::BigInt;
use serde::Serialize;

use crate::error::Result;
use crate::gf::{Fe, FieldSpec, SquareClass};
use crate::quadform::{gamma_of, lambda_of, QuadFormClass, TypeSplit};
use crate::symmat::{classify_packed, packed_index, packed_len, Enumerator, RankDisc, SymMatrix};

/// Value class of a functional: zero, non-zero square, non-square.
pub(crate) const F_CLASSES: usize = 3;

#[inline]
fn value_class(chi: i8) -> usize {
    match chi {
        0 => 0,
        1 => 1,
        _ => 2,
    }
}

fn alpha_class(fclass: usize) -> SquareClass {
    if fclass == 1 {
        SquareClass::Square
    } else {
        SquareClass::Nonsquare
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TallySource {
    /// Every matrix of `S_n` was visited.
    Enumerated,
    /// Derived exactly from the tally of `S_{n-1}` and fiber counts over
    /// class representatives.
    Lifted,
}

/// Counts indexed by `[rank][disc][j][delta class][value class of f_j]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StratumTally {
    q: u32,
    chi_minus_one: i8,
    n: usize,
    counts: Vec<u128>,
    source: TallySource,
}

impl StratumTally {
    fn empty(field: &FieldSpec, n: usize, source: TallySource) -> StratumTally {
        StratumTally {
            q: field.order(),
            chi_minus_one: field.chi_minus_one(),
            n,
            counts: vec![0; slots(n)],
            source,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn source(&self) -> TallySource {
        self.source
    }

    #[inline]
    fn idx(n: usize, rank: usize, disc: usize, j: usize, c: usize, f: usize) -> usize {
        (((rank * 2 + disc) * (n + 1) + j) * 2 + c) * F_CLASSES + f
    }

    fn get(&self, rank: usize, disc: usize, j: usize, c: usize, f: usize) -> u128 {
        if rank > self.n || j > self.n {
            return 0;
        }
        self.counts[Self::idx(self.n, rank, disc, j, c, f)]
    }

    /// Full enumeration of `S_n`.
    pub fn enumerate(
        field: &FieldSpec,
        n: usize,
        budget: u64,
        workers: Option<usize>,
    ) -> Result<StratumTally> {
        let q = field.order();
        let reps = [
            field.class_rep(SquareClass::Square).value() as u64,
            field.class_rep(SquareClass::Nonsquare).value() as u64,
        ];
        let diag: Vec<usize> = (0..n).map(|i| packed_index(n, i, i)).collect();
        let counts = Enumerator::new(field, n)
            .with_budget(budget)
            .with_workers(workers)
            .fold(
                || vec![0u128; slots(n)],
                |acc, a| {
                    let rd = classify_packed(field, n, a);
                    let base = (rd.rank as usize * 2 + disc_index(rd)) * (n + 1);
                    // j = 0: the zero functional
                    acc[base * 2 * F_CLASSES] += 1;
                    acc[(base * 2 + 1) * F_CLASSES] += 1;
                    let mut prefix = 0u64;
                    for j in 1..=n {
                        let d = a[diag[j - 1]] as u64;
                        for (c, &rep) in reps.iter().enumerate() {
                            let v = ((prefix + rep * d) % q as u64) as u32;
                            let f = value_class(field.chi_raw(v));
                            acc[((base + j) * 2 + c) * F_CLASSES + f] += 1;
                        }
                        prefix += d;
                    }
                },
                |mut x, y| {
                    for (a, b) in x.iter_mut().zip(y) {
                        *a += b;
                    }
                    x
                },
            )?;
        Ok(StratumTally {
            q,
            chi_minus_one: field.chi_minus_one(),
            n,
            counts,
            source: TallySource::Enumerated,
        })
    }

    /// Exact tally of `S_n` from the tally of `S_{n-1}`.
    ///
    /// Write `A = [[z, y], [y^T, B]]`. The joint distribution of the class of
    /// `A` and of `z` over all `(z, y)` depends only on the congruence class
    /// of `B`, and `f_j(A) = z + f_{j-1}(B)` for `j >= 2` depends on `B`
    /// through the value `g = f_{j-1}(B)`, whose square class is all that
    /// matters (scale `A` by `c^2`, then undo the scaling of `B` by
    /// congruence). So it suffices to count fibers over one representative
    /// per class and weight them by the counts of `prev`.
    pub fn lift(field: &FieldSpec, prev: &StratumTally) -> StratumTally {
        let n = prev.n + 1;
        let q = field.order();
        let mut out = StratumTally::empty(field, n, TallySource::Lifted);
        let reps = [
            field.class_rep(SquareClass::Square),
            field.class_rep(SquareClass::Nonsquare),
        ];
        let g_reps = [Fe::ZERO, reps[0], reps[1]];
        for rb in 0..=prev.n {
            for db in 0..2 {
                let total_b = prev.get(rb, db, 0, 0, 0);
                if total_b == 0 {
                    continue;
                }
                let b = class_representative(field, prev.n, rb, db);
                // fib[rank][disc][z]
                let fib = first_row_fibers(field, &b);
                let fib_at = |ra: usize, da: usize, z: usize| fib[(ra * 2 + da) * q as usize + z];
                for ra in 0..=n {
                    for da in 0..2 {
                        let row_total: u128 = (0..q as usize).map(|z| fib_at(ra, da, z)).sum();
                        if row_total == 0 {
                            continue;
                        }
                        for c in 0..2 {
                            out.counts[Self::idx(n, ra, da, 0, c, 0)] += total_b * row_total;
                        }
                        for z in 0..q as usize {
                            let cnt = fib_at(ra, da, z);
                            if cnt == 0 {
                                continue;
                            }
                            let zf = Fe(z as u32);
                            for (c, &rep) in reps.iter().enumerate() {
                                let f = value_class(field.chi(field.mul(rep, zf)));
                                out.counts[Self::idx(n, ra, da, 1, c, f)] += total_b * cnt;
                                for j in 2..=n {
                                    for (gc, &g) in g_reps.iter().enumerate() {
                                        let nb = prev.get(rb, db, j - 1, c, gc);
                                        if nb == 0 {
                                            continue;
                                        }
                                        let f = value_class(field.chi(field.add(zf, g)));
                                        out.counts[Self::idx(n, ra, da, j, c, f)] += nb * cnt;
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        out
    }

    pub fn rank_disc_count(&self, rank: usize, disc_sign: i8) -> u128 {
        self.get(rank, if disc_sign == 1 { 0 } else { 1 }, 0, 0, 0)
    }

    pub fn rank_count(&self, rank: usize) -> u128 {
        self.rank_disc_count(rank, 1) + self.rank_disc_count(rank, -1)
    }

    fn class_of(&self, rank: usize, disc: usize) -> QuadFormClass {
        QuadFormClass::from_rank_disc(
            RankDisc {
                rank: rank as u8,
                disc: if disc == 0 { 1 } else { -1 },
            },
            self.chi_minus_one,
        )
    }

    fn is_hyperbolic(&self, rank: usize, disc: usize) -> bool {
        self.class_of(rank, disc).kind == crate::quadform::FormKind::Hyperbolic || rank == 0
    }

    /// Hyperbolic (or elliptic) matrices of even rank `rank`.
    pub fn type_count(&self, rank: usize, hyperbolic: bool) -> u128 {
        (0..2)
            .filter(|&d| self.rank_disc_count(rank, if d == 0 { 1 } else { -1 }) > 0)
            .filter(|&d| self.is_hyperbolic(rank, d) == hyperbolic)
            .map(|d| self.get(rank, d, 0, 0, 0))
            .sum()
    }

    /// Kernel counts of `f_j^delta` on the rank-`rank` stratum.
    pub fn kernel(&self, j: usize, class: SquareClass, rank: usize) -> TypeSplit {
        let c = class.index();
        let mut out = TypeSplit::default();
        for d in 0..2 {
            let cnt = self.get(rank, d, j, c, 0);
            if rank % 2 == 1 {
                out.p += cnt;
            } else if self.is_hyperbolic(rank, d) {
                out.h += cnt;
            } else {
                out.e += cnt;
            }
        }
        out
    }

    /// `w_j^delta(rank, n)`: matrices of the given rank with `f_j != 0`.
    pub fn restricted_weight(&self, j: usize, class: SquareClass, rank: usize) -> u128 {
        let c = class.index();
        (0..2)
            .flat_map(|d| (1..F_CLASSES).map(move |f| (d, f)))
            .map(|(d, f)| self.get(rank, d, j, c, f))
            .sum()
    }

    /// `W_j^delta(t, n)`: matrices of rank at most `t` with `f_j != 0`.
    pub fn weight(&self, j: usize, class: SquareClass, t: usize) -> u128 {
        (0..=t.min(self.n))
            .map(|r| self.restricted_weight(j, class, r))
            .sum()
    }

    /// `sum lambda_B` over `B` of the given rank with `f_j(B) = 0`.
    pub fn lambda_sum(&self, rank: usize, j: usize, class: SquareClass) -> BigInt {
        let c = class.index();
        (0..2)
            .map(|d| {
                BigInt::from(self.get(rank, d, j, c, 0))
                    * lambda_of(self.q, &self.class_of(rank, d))
            })
            .sum()
    }

    /// `sum gamma_{f_j(B)}(B)` over `B` of the given rank with `f_j(B) != 0`.
    pub fn gamma_sum(&self, rank: usize, j: usize, class: SquareClass) -> BigInt {
        let c = class.index();
        let mut acc = BigInt::from(0);
        for d in 0..2 {
            for f in 1..F_CLASSES {
                let cnt = self.get(rank, d, j, c, f);
                if cnt == 0 {
                    continue;
                }
                let g = gamma_of(
                    self.q,
                    self.chi_minus_one,
                    &self.class_of(rank, d),
                    alpha_class(f),
                );
                acc += BigInt::from(cnt) * g;
            }
        }
        acc
    }

    /// Raw counts, for equality checks between tallies of different origin.
    pub fn counts(&self) -> &[u128] {
        &self.counts
    }
}

fn slots(n: usize) -> usize {
    (n + 1) * 2 * (n + 1) * 2 * F_CLASSES
}

#[inline]
fn disc_index(rd: RankDisc) -> usize {
    if rd.disc == 1 {
        0
    } else {
        1
    }
}

/// `diag(1, ..., 1, d, 0, ..., 0)` of rank `rank` with discriminant class
/// `disc` (0 square, 1 non-square).
fn class_representative(field: &FieldSpec, n: usize, rank: usize, disc: usize) -> SymMatrix {
    let mut diag = vec![Fe::ZERO; n];
    for d in diag.iter_mut().take(rank) {
        *d = Fe::ONE;
    }
    if rank > 0 && disc == 1 {
        diag[rank - 1] = field.canonical_nonsquare();
    }
    SymMatrix::diagonal(&diag)
}

/// Counts of `(rank A, disc A, z)` over all first rows `(z, y)` of matrices
/// with trailing minor `b`.
fn first_row_fibers(field: &FieldSpec, b: &SymMatrix) -> Vec<u128> {
    let q = field.order();
    let n = b.m() + 1;
    let mut fib = vec![0u128; (n + 1) * 2 * q as usize];
    let mut packed = vec![0u32; packed_len(n)];
    packed[n..].copy_from_slice(&b.raw());
    let mut row = vec![0u32; n];
    loop {
        packed[..n].copy_from_slice(&row);
        let rd = classify_packed(field, n, &packed);
        fib[(rd.rank as usize * 2 + disc_index(rd)) * q as usize + row[0] as usize] += 1;
        if !crate::symmat::increment_digits(&mut row, q) {
            return fib;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symmat::census;

    #[test]
    fn tally_matches_census() {
        for q in [3u64, 5] {
            let f = FieldSpec::new(q).unwrap();
            for n in 0..=3 {
                let t = StratumTally::enumerate(&f, n, u64::MAX, None).unwrap();
                let c = census(q, n);
                for r in 0..=n {
                    assert_eq!(BigInt::from(t.rank_count(r)), c.s[r]);
                }
                for h in 0..=n / 2 {
                    assert_eq!(BigInt::from(t.type_count(2 * h, true)), c.v_plus[h]);
                    assert_eq!(BigInt::from(t.type_count(2 * h, false)), c.v_minus[h]);
                }
            }
        }
    }

    #[test]
    fn lift_reproduces_enumeration() {
        for q in [3u64, 5, 7] {
            let f = FieldSpec::new(q).unwrap();
            let max_n = if q == 3 { 4 } else { 3 };
            let mut prev = StratumTally::enumerate(&f, 0, u64::MAX, None).unwrap();
            for n in 1..=max_n {
                let lifted = StratumTally::lift(&f, &prev);
                let direct = StratumTally::enumerate(&f, n, u64::MAX, None).unwrap();
                assert_eq!(lifted.counts(), direct.counts(), "q = {q}, n = {n}");
                prev = direct;
            }
        }
    }
}

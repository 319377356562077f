//! The evaluation codes: a functional `f(A) = tr(F A)` is evaluated on every
//! matrix of rank at most `t` (affine code) or on one representative per
//! projective point (projective code).
//!
//! Evaluation points are always taken in lexicographic packed order; a
//! projective representative is a non-zero matrix whose first non-zero
//! packed coordinate is 1.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::gf::{Fe, FieldSpec, SquareClass};
use crate::symmat::{
    census, classify_packed, diagonal_functional_raw, packed_index, packed_len, Enumerator, Matrix,
    SymMatrix,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Affine,
    Projective,
}

impl Variant {
    pub fn as_str(self) -> &'static str {
        match self {
            Variant::Affine => "affine",
            Variant::Projective => "projective",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Variant> {
        match s {
            "affine" => Ok(Variant::Affine),
            "projective" => Ok(Variant::Projective),
            other => Err(invalid(format!("unknown variant {other:?}"))),
        }
    }
}

/// Identifies one code: field order, matrix size, rank bound and variant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct CodeId {
    pub q: u64,
    pub m: usize,
    pub t: usize,
    pub variant: Variant,
}

impl CodeId {
    pub fn new(q: u64, m: usize, t: usize, variant: Variant) -> Result<CodeId> {
        if t < 1 || t > m {
            return Err(invalid(format!("need 1 <= t <= m, got t = {t}, m = {m}")));
        }
        Ok(CodeId { q, m, t, variant })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CodeParams {
    #[serde(serialize_with = "crate::json::serialize_big")]
    pub n: BigInt,
    pub k: usize,
}

pub fn code_params(id: &CodeId) -> CodeParams {
    let c = census(id.q, id.m);
    let n = match id.variant {
        Variant::Affine => c.cone[id.t].clone(),
        Variant::Projective => c.projective[id.t].clone(),
    };
    CodeParams {
        n,
        k: packed_len(id.m),
    }
}

fn check_dims(f: &SymMatrix, a: &SymMatrix) -> Result<()> {
    if f.m() != a.m() {
        return Err(Error::DimensionMismatch {
            left: f.m(),
            right: a.m(),
        });
    }
    Ok(())
}

/// Packed coefficients `c` with `tr(F A) = sum_p c[p] a[p]`: diagonal
/// entries once, off-diagonal entries twice.
pub(crate) fn pairing_coefficients(field: &FieldSpec, f: &SymMatrix) -> Vec<u32> {
    let m = f.m();
    let mut c = vec![0u32; packed_len(m)];
    for i in 0..m {
        for j in i..m {
            let v = f.get(i, j);
            let w = if i == j { v } else { field.add(v, v) };
            c[packed_index(m, i, j)] = w.value();
        }
    }
    c
}

#[inline]
pub(crate) fn dot_raw(q: u32, c: &[u32], a: &[u32]) -> u32 {
    let s: u64 = c.iter().zip(a).map(|(&x, &y)| x as u64 * y as u64).sum();
    (s % q as u64) as u32
}

/// `tr(F A) = sum_{i,j} F_ij A_ij`.
pub fn trace_pairing(field: &FieldSpec, f: &SymMatrix, a: &SymMatrix) -> Result<Fe> {
    check_dims(f, a)?;
    let mut acc = Fe::ZERO;
    for i in 0..f.m() {
        for j in 0..f.m() {
            acc = field.add(acc, field.mul(f.get(i, j), a.get(i, j)));
        }
    }
    Ok(acc)
}

/// The symmetric `G` with `G_ij = (f_ij + f_ji) / 2`, so that
/// `tr(G A) = tr(F A)` on symmetric `A`.
pub fn symmetrize(field: &FieldSpec, raw: &Matrix) -> SymMatrix {
    let half = field.inv(field.elem(2)).expect("odd characteristic");
    let mut g = SymMatrix::zero(raw.n());
    for i in 0..raw.n() {
        for j in i..raw.n() {
            let s = field.add(raw.get(i, j), raw.get(j, i));
            g.set(i, j, field.mul(s, half));
        }
    }
    g
}

/// Whether a packed vector is the chosen representative of its projective
/// point.
#[inline]
pub(crate) fn is_projective_rep(a: &[u32]) -> bool {
    a.iter().find(|&&x| x != 0) == Some(&1)
}

/// Number of evaluation points of `id` where `tr(F A) != 0`, by enumeration.
pub fn codeword_weight_bf(
    field: &FieldSpec,
    f: &SymMatrix,
    id: &CodeId,
    budget: u64,
) -> Result<u64> {
    if f.m() != id.m {
        return Err(Error::DimensionMismatch {
            left: f.m(),
            right: id.m,
        });
    }
    let q = field.order();
    let m = id.m;
    let c = pairing_coefficients(field, f);
    let projective = id.variant == Variant::Projective;
    Enumerator::new(field, m).with_budget(budget).fold(
        || 0u64,
        |acc, a| {
            if projective && !is_projective_rep(a) {
                return;
            }
            if dot_raw(q, &c, a) == 0 {
                return;
            }
            if classify_packed(field, m, a).rank as usize <= id.t {
                *acc += 1;
            }
        },
        |a, b| a + b,
    )
}

/// `w_k^delta(r, m) = |{A in S(r, m) : f_k^delta(A) != 0}|` by enumeration.
pub fn restricted_weight_bf(
    field: &FieldSpec,
    k: usize,
    delta_class: SquareClass,
    r: usize,
    m: usize,
    budget: u64,
) -> Result<u64> {
    if k > m {
        return Err(invalid(format!("k = {k} exceeds m = {m}")));
    }
    let q = field.order();
    let delta = field.class_rep(delta_class).value();
    Enumerator::new(field, m).with_budget(budget).fold(
        || 0u64,
        |acc, a| {
            if diagonal_functional_raw(q, m, k, delta, a) != 0
                && classify_packed(field, m, a).rank as usize == r
            {
                *acc += 1;
            }
        },
        |a, b| a + b,
    )
}

/// All evaluation points of `S_m` held in memory, for evaluating many
/// codewords against the same code family.
#[derive(Debug, Clone)]
pub struct EvaluationPoints {
    q: u32,
    m: usize,
    packed: Vec<u32>,
    ranks: Vec<u8>,
    reps: Vec<bool>,
}

impl EvaluationPoints {
    pub fn new(field: &FieldSpec, m: usize, budget: u64) -> Result<EvaluationPoints> {
        let it = Enumerator::new(field, m)
            .with_budget(budget)
            .iter(crate::symmat::EnumMode::All)?;
        let mut pts = EvaluationPoints {
            q: field.order(),
            m,
            packed: Vec::new(),
            ranks: Vec::new(),
            reps: Vec::new(),
        };
        for a in it {
            let raw = a.raw();
            pts.ranks.push(classify_packed(field, m, &raw).rank);
            pts.reps.push(is_projective_rep(&raw));
            pts.packed.extend(raw);
        }
        Ok(pts)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Weights of `tr(F .)` for every rank bound `t = 0..=m`, affine and
    /// projective.
    pub fn weights(&self, field: &FieldSpec, f: &SymMatrix) -> WeightsByRank {
        let c = pairing_coefficients(field, f);
        let len = packed_len(self.m);
        let mut per_rank_aff = vec![0u64; self.m + 1];
        let mut per_rank_proj = vec![0u64; self.m + 1];
        for (idx, a) in self.packed.chunks_exact(len.max(1)).enumerate() {
            if dot_raw(self.q, &c, a) == 0 {
                continue;
            }
            let r = self.ranks[idx] as usize;
            per_rank_aff[r] += 1;
            if self.reps[idx] {
                per_rank_proj[r] += 1;
            }
        }
        let cumulative = |v: Vec<u64>| {
            v.iter()
                .scan(0u64, |acc, x| {
                    *acc += x;
                    Some(*acc)
                })
                .collect()
        };
        WeightsByRank {
            affine: cumulative(per_rank_aff),
            projective: cumulative(per_rank_proj),
        }
    }
}

/// `affine[t]` and `projective[t]` are codeword weights in the codes with
/// rank bound `t`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightsByRank {
    pub affine: Vec<u64>,
    pub projective: Vec<u64>,
}

/// One weight class of a code: codewords `tr(F .)` with `F` of rank `k` and
/// discriminant class `delta_class`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpectrumEntry {
    pub k: usize,
    pub delta_class: Option<SquareClass>,
    pub weight: u64,
    pub multiplicity: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Spectrum {
    pub id: CodeId,
    pub entries: Vec<SpectrumEntry>,
    /// Distinct weights in increasing order, zero included.
    pub distinct_weights: Vec<u64>,
}

impl Spectrum {
    pub fn total_multiplicity(&self) -> u64 {
        self.entries.iter().map(|e| e.multiplicity).sum()
    }

    /// Weight enumerator as `(weight, number of codewords)` pairs.
    pub fn enumerator(&self) -> Vec<(u64, u64)> {
        let mut out: Vec<(u64, u64)> = Vec::new();
        for w in &self.distinct_weights {
            let n = self
                .entries
                .iter()
                .filter(|e| e.weight == *w)
                .map(|e| e.multiplicity)
                .sum();
            out.push((*w, n));
        }
        out
    }
}

#[derive(Clone)]
struct SpectrumAcc {
    // [k][class] weights of f_k^delta and class counts of F
    weight: Vec<[u64; 2]>,
    classes: Vec<[u64; 2]>,
}

/// Full weight spectrum of a code. One pass over `S_m` serves twice: each
/// matrix is an evaluation point for the `2m` canonical functionals and also
/// a functional whose class is tallied for the multiplicities.
pub fn spectrum(field: &FieldSpec, id: &CodeId, budget: u64) -> Result<Spectrum> {
    let q = field.order();
    let m = id.m;
    let reps = [
        field.class_rep(SquareClass::Square).value(),
        field.class_rep(SquareClass::Nonsquare).value(),
    ];
    let projective = id.variant == Variant::Projective;
    let init = || SpectrumAcc {
        weight: vec![[0; 2]; m + 1],
        classes: vec![[0; 2]; m + 1],
    };
    let acc = Enumerator::new(field, m).with_budget(budget).fold(
        init,
        |acc, a| {
            let rd = classify_packed(field, m, a);
            let rank = rd.rank as usize;
            acc.classes[rank][if rd.disc == 1 { 0 } else { 1 }] += 1;
            if rank > id.t || (projective && !is_projective_rep(a)) {
                return;
            }
            for k in 1..=m {
                for (c, &d) in reps.iter().enumerate() {
                    if diagonal_functional_raw(q, m, k, d, a) != 0 {
                        acc.weight[k][c] += 1;
                    }
                }
            }
        },
        |mut x, y| {
            for k in 0..=m {
                for c in 0..2 {
                    x.weight[k][c] += y.weight[k][c];
                    x.classes[k][c] += y.classes[k][c];
                }
            }
            x
        },
    )?;
    let mut entries = vec![SpectrumEntry {
        k: 0,
        delta_class: None,
        weight: 0,
        multiplicity: acc.classes[0][0],
    }];
    for k in 1..=m {
        for class in SquareClass::BOTH {
            entries.push(SpectrumEntry {
                k,
                delta_class: Some(class),
                weight: acc.weight[k][class.index()],
                multiplicity: acc.classes[k][class.index()],
            });
        }
    }
    let distinct_weights = entries
        .iter()
        .map(|e| e.weight)
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    Ok(Spectrum {
        id: *id,
        entries,
        distinct_weights,
    })
}

/// Generator matrix: one row per basis functional `X_ii` or `X_ij + X_ji`
/// (packed order), one column per evaluation point.
pub fn generator_matrix(field: &FieldSpec, id: &CodeId, budget: u64) -> Result<Vec<Vec<Fe>>> {
    let m = id.m;
    let len = packed_len(m);
    let mut rows = vec![Vec::new(); len];
    let it = Enumerator::new(field, m)
        .with_budget(budget)
        .iter(crate::symmat::EnumMode::RankLe(id.t))?;
    for a in it {
        let raw = a.raw();
        if id.variant == Variant::Projective && !is_projective_rep(&raw) {
            continue;
        }
        for i in 0..m {
            for j in i..m {
                let v = a.get(i, j);
                let entry = if i == j { v } else { field.add(v, v) };
                rows[packed_index(m, i, j)].push(entry);
            }
        }
    }
    Ok(rows)
}

/// Rank of a (not necessarily square) matrix given by rows.
pub fn row_rank(field: &FieldSpec, rows: &[Vec<Fe>]) -> usize {
    let mut a: Vec<Vec<Fe>> = rows.to_vec();
    let cols = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..cols {
        let Some(piv) = (rank..a.len()).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(rank, piv);
        let inv = field.inv(a[rank][col]).expect("pivot is non-zero");
        for r in 0..a.len() {
            if r == rank || a[r][col].is_zero() {
                continue;
            }
            let factor = field.mul(a[r][col], inv);
            for c in col..cols {
                let v = field.sub(a[r][c], field.mul(factor, a[rank][c]));
                a[r][c] = v;
            }
        }
        rank += 1;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;

    const BIG: u64 = u64::MAX;

    #[test]
    fn pairing_examples() {
        let f = FieldSpec::new(3).unwrap();
        let a = SymMatrix::from_rows(&f, &[vec![1, 2], vec![2, 1]]).unwrap();
        assert_eq!(trace_pairing(&f, &SymMatrix::identity(2), &a), Ok(Fe(2)));
        assert_eq!(trace_pairing(&f, &SymMatrix::zero(2), &a), Ok(Fe(0)));
        let d = SymMatrix::diagonal(&[Fe(2), Fe(1)]);
        assert_eq!(trace_pairing(&f, &SymMatrix::unit(2, 0, 0), &d), Ok(Fe(2)));
        assert!(trace_pairing(&f, &SymMatrix::zero(3), &a).is_err());
        let c = pairing_coefficients(&f, &a);
        assert_eq!(
            dot_raw(3, &c, &a.raw()),
            trace_pairing(&f, &a, &a).unwrap().value()
        );
    }

    #[test]
    fn symmetrize_examples() {
        let f = FieldSpec::new(3).unwrap();
        let e12 = Matrix::from_rows(&f, &[vec![0, 1], vec![0, 0]]).unwrap();
        let g = symmetrize(&f, &e12);
        assert_eq!(
            g,
            SymMatrix::from_rows(&f, &[vec![0, 2], vec![2, 0]]).unwrap()
        );
        let anti = Matrix::from_rows(&f, &[vec![0, 1], vec![-1, 0]]).unwrap();
        assert!(symmetrize(&f, &anti).is_zero());
        let s = SymMatrix::from_rows(&f, &[vec![1, 2], vec![2, 0]]).unwrap();
        assert_eq!(symmetrize(&f, &s.to_dense()), s);
    }

    #[test]
    fn params_examples() {
        let p = code_params(&CodeId::new(3, 3, 1, Variant::Projective).unwrap());
        assert_eq!((p.n, p.k), (BigInt::from(13), 6));
        let p = code_params(&CodeId::new(3, 3, 3, Variant::Affine).unwrap());
        assert_eq!((p.n, p.k), (BigInt::from(729), 6));
        assert!(CodeId::new(3, 3, 0, Variant::Affine).is_err());
    }

    #[test]
    fn weight_examples() {
        let f = FieldSpec::new(3).unwrap();
        let id = CodeId::new(3, 3, 1, Variant::Affine).unwrap();
        assert_eq!(
            codeword_weight_bf(&f, &SymMatrix::unit(3, 0, 0), &id, BIG),
            Ok(18)
        );
        assert_eq!(codeword_weight_bf(&f, &SymMatrix::zero(3), &id, BIG), Ok(0));
        let id2 = CodeId::new(3, 3, 2, Variant::Affine).unwrap();
        assert_eq!(
            codeword_weight_bf(&f, &SymMatrix::identity(3), &id2, BIG),
            Ok(180)
        );
        assert_eq!(
            restricted_weight_bf(&f, 1, SquareClass::Square, 1, 3, BIG),
            Ok(18)
        );
        assert_eq!(
            restricted_weight_bf(&f, 0, SquareClass::Square, 2, 3, BIG),
            Ok(0)
        );
    }

    #[test]
    fn spectrum_examples() {
        let f = FieldSpec::new(3).unwrap();
        let s = spectrum(&f, &CodeId::new(3, 1, 1, Variant::Affine).unwrap(), BIG).unwrap();
        assert_eq!(s.distinct_weights, vec![0, 2]);
        let s = spectrum(&f, &CodeId::new(3, 3, 2, Variant::Affine).unwrap(), BIG).unwrap();
        assert_eq!(s.distinct_weights, vec![0, 162, 180]);
        assert_eq!(s.total_multiplicity(), 729);
        assert_eq!(s.entries[0].multiplicity, 1);
    }

    #[test]
    fn generator_has_full_rank() {
        let f = FieldSpec::new(3).unwrap();
        for t in 1..=3 {
            for variant in [Variant::Affine, Variant::Projective] {
                let id = CodeId::new(3, 3, t, variant).unwrap();
                let g = generator_matrix(&f, &id, BIG).unwrap();
                assert_eq!(g.len(), 6);
                assert_eq!(BigInt::from(g[0].len()), code_params(&id).n);
                assert_eq!(row_rank(&f, &g), 6);
            }
        }
    }
}

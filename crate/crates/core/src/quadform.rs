//! Quadratic forms `Q_B(X) = X B X^T`: type classification and the zero /
//! level-set counts `lambda_B` and `gamma_alpha(B)`.
//!
//! Counts are taken over the row space of `B`, which is the same as counting
//! over `F_q^r` for any nonsingular principal `r x r` minor of `B`. The
//! closed forms below are keyed on the class of `B` only; the `*_brute`
//! functions count directly and serve as the oracle.

use std::fmt;

use num_bigint::BigInt;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gf::{Fe, FieldSpec, SquareClass};
use crate::symmat::{
    classify_packed, diagonal_functional_raw, packed_index, packed_len, Enumerator, RankDisc,
    SymMatrix,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FormKind {
    Zero,
    Parabolic,
    Hyperbolic,
    Elliptic,
}

impl FormKind {
    pub fn as_str(self) -> &'static str {
        match self {
            FormKind::Zero => "zero",
            FormKind::Parabolic => "parabolic",
            FormKind::Hyperbolic => "hyperbolic",
            FormKind::Elliptic => "elliptic",
        }
    }
}

impl fmt::Display for FormKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Congruence class of a symmetric matrix, read as a quadratic form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct QuadFormClass {
    pub rank: usize,
    pub kind: FormKind,
    /// Discriminant class; `None` for the zero form.
    pub delta_class: Option<SquareClass>,
}

impl QuadFormClass {
    pub fn from_rank_disc(rd: RankDisc, chi_minus_one: i8) -> QuadFormClass {
        let rank = rd.rank as usize;
        let kind = if rank == 0 {
            FormKind::Zero
        } else if rank % 2 == 1 {
            FormKind::Parabolic
        } else if rd.is_hyperbolic(chi_minus_one) {
            FormKind::Hyperbolic
        } else {
            FormKind::Elliptic
        };
        QuadFormClass {
            rank,
            kind,
            delta_class: rd.disc_class(),
        }
    }

    /// `chi` of the discriminant, `+1` for the zero form.
    pub fn disc_sign(&self) -> i8 {
        self.delta_class.map_or(1, SquareClass::sign)
    }
}

pub fn classify(field: &FieldSpec, b: &SymMatrix) -> QuadFormClass {
    let rd = classify_packed(field, b.m(), &b.raw());
    QuadFormClass::from_rank_disc(rd, field.chi_minus_one())
}

fn qpow(q: u32, e: usize) -> BigInt {
    num_traits::pow(BigInt::from(q), e)
}

/// Number of zeros of a nondegenerate form of the given class on its row
/// space.
pub fn lambda_of(q: u32, class: &QuadFormClass) -> BigInt {
    let r = class.rank;
    match class.kind {
        FormKind::Zero => BigInt::from(1),
        FormKind::Parabolic => qpow(q, r - 1),
        FormKind::Hyperbolic => {
            let s = r / 2;
            qpow(q, 2 * s - 1) + qpow(q, s) - qpow(q, s - 1)
        }
        FormKind::Elliptic => {
            let s = r / 2;
            qpow(q, 2 * s - 1) - qpow(q, s) + qpow(q, s - 1)
        }
    }
}

/// Number of row-space vectors with `X B X^T = -alpha`, for `alpha` in the
/// given square class.
///
/// Even rank `2s`: `q^{2s-1} -/+ q^{s-1}` (hyperbolic/elliptic). Odd rank
/// `2s+1`: `q^{2s} + q^s chi((-1)^{s+1} disc alpha)`.
pub fn gamma_of(q: u32, chi_minus_one: i8, class: &QuadFormClass, alpha: SquareClass) -> BigInt {
    let r = class.rank;
    match class.kind {
        FormKind::Zero => BigInt::from(0),
        FormKind::Hyperbolic => qpow(q, r - 1) - qpow(q, r / 2 - 1),
        FormKind::Elliptic => qpow(q, r - 1) + qpow(q, r / 2 - 1),
        FormKind::Parabolic => {
            let s = (r - 1) / 2;
            let sign = chi_minus_one.pow(s as u32 + 1) * class.disc_sign() * alpha.sign();
            qpow(q, 2 * s) + BigInt::from(sign) * qpow(q, s)
        }
    }
}

pub fn lambda(field: &FieldSpec, b: &SymMatrix) -> BigInt {
    lambda_of(field.order(), &classify(field, b))
}

pub fn gamma(field: &FieldSpec, b: &SymMatrix, alpha: Fe) -> Result<BigInt> {
    let class = field.square_class(alpha).ok_or(Error::ZeroAlpha)?;
    Ok(gamma_of(
        field.order(),
        field.chi_minus_one(),
        &classify(field, b),
        class,
    ))
}

/// Indices of a principal minor of `b` that is nonsingular of size
/// `rank(b)`. Every symmetric matrix has one.
fn nonsingular_principal_minor(field: &FieldSpec, b: &SymMatrix) -> Vec<usize> {
    let m = b.m();
    let rank = classify_packed(field, m, &b.raw()).rank as usize;
    let raw = b.raw();
    let mut chosen: Vec<usize> = (0..rank).collect();
    loop {
        let mut sub = Vec::with_capacity(packed_len(rank));
        for (a, &i) in chosen.iter().enumerate() {
            for &j in &chosen[a..] {
                sub.push(raw[packed_index(m, i, j)]);
            }
        }
        if classify_packed(field, rank, &sub).rank as usize == rank {
            return chosen;
        }
        // next combination in lexicographic order
        let mut pos = rank;
        loop {
            assert!(
                pos > 0,
                "symmetric matrix without a nonsingular principal minor"
            );
            pos -= 1;
            if chosen[pos] < m - rank + pos {
                break;
            }
        }
        chosen[pos] += 1;
        for p in pos + 1..rank {
            chosen[p] = chosen[p - 1] + 1;
        }
    }
}

/// Histogram of `X B X^T` over the row space of `b`: entry `v` counts the
/// vectors on which the form takes value `v`.
pub fn value_histogram_brute(field: &FieldSpec, b: &SymMatrix) -> Vec<u64> {
    let q = field.order() as usize;
    let idx = nonsingular_principal_minor(field, b);
    let r = idx.len();
    let mut hist = vec![0u64; q];
    if r == 0 {
        hist[0] = 1;
        return hist;
    }
    // lookup tables keep divisions out of the inner loop
    let mul: Vec<u32> = (0..q * q).map(|i| ((i / q) * (i % q) % q) as u32).collect();
    let add: Vec<u32> = (0..q * q).map(|i| ((i / q + i % q) % q) as u32).collect();
    let mat: Vec<Vec<u32>> = (0..r)
        .map(|a| (0..r).map(|c| b.get(idx[a], idx[c]).value()).collect())
        .collect();
    // row `level` of `lin` holds the linear coefficients seen at that depth
    let mut lin = vec![0u32; (r + 1) * r];
    walk(q, (&mul, &add), &mat, 0, 0, &mut lin, &mut hist);
    hist
}

// Coordinates before `level` are fixed: `value` is their contribution to the
// form and `lin[level * r + j]` (for j >= level) is 2 sum_i M_ij y_i.
fn walk(
    q: usize,
    (mul, add): (&[u32], &[u32]),
    mat: &[Vec<u32>],
    level: usize,
    value: u32,
    lin: &mut [u32],
    hist: &mut [u64],
) {
    let r = mat.len();
    let d = mat[level][level] as usize;
    let l = lin[level * r + level] as usize;
    let last = level + 1 == r;
    for y in 0..q {
        let sq = mul[y * q + y] as usize;
        let t = add[mul[d * q + sq] as usize * q + mul[l * q + y] as usize] as usize;
        let v = add[value as usize * q + t] as usize;
        if last {
            hist[v] += 1;
            continue;
        }
        for j in level + 1..r {
            let two_m = (2 * mat[level][j] as usize) % q;
            lin[(level + 1) * r + j] =
                add[lin[level * r + j] as usize * q + mul[two_m * q + y] as usize];
        }
        walk(q, (mul, add), mat, level + 1, v as u32, lin, hist);
    }
}

pub fn lambda_brute(field: &FieldSpec, b: &SymMatrix) -> u64 {
    value_histogram_brute(field, b)[0]
}

pub fn gamma_brute(field: &FieldSpec, b: &SymMatrix, alpha: Fe) -> Result<u64> {
    if alpha.is_zero() {
        return Err(Error::ZeroAlpha);
    }
    Ok(value_histogram_brute(field, b)[field.neg(alpha).value() as usize])
}

/// Type read off from the zero count alone, inverting the closed form for
/// `lambda`. Independent of the discriminant test used by [`classify`].
pub fn classify_by_zero_count(field: &FieldSpec, b: &SymMatrix) -> FormKind {
    let rank = classify_packed(field, b.m(), &b.raw()).rank as usize;
    if rank == 0 {
        return FormKind::Zero;
    }
    if rank % 2 == 1 {
        return FormKind::Parabolic;
    }
    let hyp = QuadFormClass {
        rank,
        kind: FormKind::Hyperbolic,
        delta_class: None,
    };
    if BigInt::from(lambda_brute(field, b)) == lambda_of(field.order(), &hyp) {
        FormKind::Hyperbolic
    } else {
        FormKind::Elliptic
    }
}

/// Kernel counts of `f_k^delta` within one rank stratum of `S_m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct TypeSplit {
    /// Odd rank: matrices with `f = 0`.
    pub p: u128,
    /// Even rank: hyperbolic matrices with `f = 0`.
    pub h: u128,
    /// Even rank: elliptic matrices with `f = 0`.
    pub e: u128,
}

/// `(p, h, e)` for the rank-`r` stratum of `S_m` by direct enumeration, with
/// `delta` the fixed representative of `delta_class`.
pub fn type_split(
    field: &FieldSpec,
    k: usize,
    delta_class: SquareClass,
    r: usize,
    m: usize,
    budget: u64,
) -> Result<TypeSplit> {
    if k > m {
        return Err(crate::error::invalid(format!("k = {k} exceeds m = {m}")));
    }
    let q = field.order();
    let delta = field.class_rep(delta_class).value();
    let chi_minus_one = field.chi_minus_one();
    Enumerator::new(field, m).with_budget(budget).fold(
        TypeSplit::default,
        |acc, a| {
            let rd = classify_packed(field, m, a);
            if rd.rank as usize != r || diagonal_functional_raw(q, m, k, delta, a) != 0 {
                return;
            }
            if r % 2 == 1 {
                acc.p += 1;
            } else if rd.is_hyperbolic(chi_minus_one) {
                acc.h += 1;
            } else {
                acc.e += 1;
            }
        },
        |a, b| TypeSplit {
            p: a.p + b.p,
            h: a.h + b.h,
            e: a.e + b.e,
        },
    )
}

//! Closed-form counts of symmetric matrices by rank and type.
//!
//! All values are exact big integers. Negative ranks or rank bounds count as
//! empty.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::gf::SquareClass;

fn pow(q: u64, e: usize) -> BigInt {
    num_traits::pow(BigInt::from(q), e)
}

fn exact_div(num: BigInt, den: BigInt) -> BigInt {
    let (quot, rem) = num.div_rem(&den);
    assert!(rem.is_zero(), "inexact division in closed-form count");
    quot
}

/// `s(r, m)`: number of symmetric `m x m` matrices of rank exactly `r`.
pub fn rank_count(q: u64, r: i64, m: usize) -> BigInt {
    if r < 0 || r as usize > m {
        return BigInt::zero();
    }
    let r = r as usize;
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 1..=r / 2 {
        num *= pow(q, 2 * i);
        den *= pow(q, 2 * i) - 1;
    }
    for i in 0..r {
        num *= pow(q, m - i) - 1;
    }
    exact_div(num, den)
}

/// `n_s(t, m)`: number of symmetric matrices of rank at most `t`.
pub fn cone_size(q: u64, t: i64, m: usize) -> BigInt {
    (0..=t.min(m as i64)).map(|r| rank_count(q, r, m)).sum()
}

/// `N_s(t, m) = (n_s(t, m) - 1) / (q - 1)`: points of the projective variety.
pub fn projective_size(q: u64, t: i64, m: usize) -> BigInt {
    if t < 0 {
        return BigInt::zero();
    }
    exact_div(cone_size(q, t, m) - 1, BigInt::from(q - 1))
}

/// `(v_+1 - v_-1)(2h, m) = prod_{i<2h}(q^m - q^i) / prod_{i<h}(q^{2h} - q^{2i})`.
pub fn hyp_minus_ell(q: u64, h: usize, m: usize) -> BigInt {
    if 2 * h > m {
        return BigInt::zero();
    }
    let num: BigInt = (0..2 * h).map(|i| pow(q, m) - pow(q, i)).product();
    let den: BigInt = (0..h).map(|i| pow(q, 2 * h) - pow(q, 2 * i)).product();
    exact_div(num, den)
}

/// `v_{+1}(2h, m)` (hyperbolic) when `hyperbolic`, else `v_{-1}(2h, m)`.
/// Rank 0 counts the zero matrix as hyperbolic.
pub fn type_count(q: u64, h: usize, m: usize, hyperbolic: bool) -> BigInt {
    let base = pow(q, h);
    let factor = if hyperbolic { base + 1 } else { base - 1 };
    exact_div(factor * hyp_minus_ell(q, h, m), BigInt::from(2))
}

/// Number of rank-`r` matrices whose discriminant lies in `class`.
/// `None` for `r = 0`, where the discriminant is undefined.
pub fn class_count(q: u64, r: usize, m: usize, class: SquareClass) -> Option<BigInt> {
    if r == 0 {
        return None;
    }
    if r % 2 == 1 {
        // scaling by a non-square swaps the two classes
        return Some(exact_div(rank_count(q, r as i64, m), BigInt::from(2)));
    }
    let h = r / 2;
    let chi_minus_one: i8 = if q % 4 == 1 { 1 } else { -1 };
    // hyperbolic iff chi((-1)^h) * disc = +1
    let hyperbolic = chi_minus_one.pow(h as u32) * class.sign() == 1;
    Some(type_count(q, h, m, hyperbolic))
}

/// All closed-form counts for one `(q, m)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RankCensus {
    pub q: u64,
    pub m: usize,
    /// `s[r] = s(r, m)`, `0 <= r <= m`.
    #[serde(serialize_with = "crate::json::serialize_big_vec")]
    pub s: Vec<BigInt>,
    /// `cone[t] = n_s(t, m)`.
    #[serde(serialize_with = "crate::json::serialize_big_vec")]
    pub cone: Vec<BigInt>,
    /// `projective[t] = N_s(t, m)`.
    #[serde(serialize_with = "crate::json::serialize_big_vec")]
    pub projective: Vec<BigInt>,
    /// `v_plus[h] = v_{+1}(2h, m)`, `0 <= 2h <= m`.
    #[serde(serialize_with = "crate::json::serialize_big_vec")]
    pub v_plus: Vec<BigInt>,
    #[serde(serialize_with = "crate::json::serialize_big_vec")]
    pub v_minus: Vec<BigInt>,
}

pub fn census(q: u64, m: usize) -> RankCensus {
    let s: Vec<BigInt> = (0..=m).map(|r| rank_count(q, r as i64, m)).collect();
    let cone: Vec<BigInt> = s
        .iter()
        .scan(BigInt::zero(), |acc, x| {
            *acc += x;
            Some(acc.clone())
        })
        .collect();
    let projective = (0..=m).map(|t| projective_size(q, t as i64, m)).collect();
    let v_plus = (0..=m / 2).map(|h| type_count(q, h, m, true)).collect();
    let v_minus = (0..=m / 2).map(|h| type_count(q, h, m, false)).collect();
    RankCensus {
        q,
        m,
        s,
        cone,
        projective,
        v_plus,
        v_minus,
    }
}

//! Arithmetic in odd prime fields `F_q` with precomputed quadratic-character
//! and inverse tables.
//!
//! Every element is a residue in `[0, q)`. The tables are built once when
//! the field is constructed, so `chi` and `inv` are single lookups inside
//! the enumeration loops.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported field order. Products of two residues must fit in `u32`.
pub const MAX_ORDER: u64 = 65521;

/// An element of `F_q`, stored as its least non-negative residue.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Fe(pub(crate) u32);

impl Fe {
    pub const ZERO: Fe = Fe(0);
    pub const ONE: Fe = Fe(1);

    pub fn value(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for Fe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// The square class of a non-zero element; also used as the `delta` class of
/// the diagonal functionals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SquareClass {
    Square,
    Nonsquare,
}

impl SquareClass {
    pub const BOTH: [SquareClass; 2] = [SquareClass::Square, SquareClass::Nonsquare];

    /// `+1` for squares, `-1` for non-squares.
    pub fn sign(self) -> i8 {
        match self {
            SquareClass::Square => 1,
            SquareClass::Nonsquare => -1,
        }
    }

    pub fn from_sign(sign: i8) -> Option<SquareClass> {
        match sign {
            1 => Some(SquareClass::Square),
            -1 => Some(SquareClass::Nonsquare),
            _ => None,
        }
    }

    /// Class of the product of a representative of `self` and one of `other`.
    pub fn times(self, other: SquareClass) -> SquareClass {
        SquareClass::from_sign(self.sign() * other.sign()).unwrap()
    }

    pub fn index(self) -> usize {
        match self {
            SquareClass::Square => 0,
            SquareClass::Nonsquare => 1,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            SquareClass::Square => "square",
            SquareClass::Nonsquare => "nonsquare",
        }
    }
}

impl fmt::Display for SquareClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for SquareClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<SquareClass> {
        match s {
            "square" => Ok(SquareClass::Square),
            "nonsquare" => Ok(SquareClass::Nonsquare),
            other => Err(crate::error::invalid(format!(
                "unknown square class {other:?}"
            ))),
        }
    }
}

/// Binary field operation selector for [`FieldSpec::arith`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// An odd prime field together with its character and inverse tables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldSpec {
    q: u32,
    chi: Vec<i8>,
    inv: Vec<u32>,
    nonsquare: u32,
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl FieldSpec {
    pub fn new(q: u64) -> Result<FieldSpec> {
        if q % 2 == 0 && q > 0 {
            return Err(Error::EvenCharacteristic(q));
        }
        if !is_prime(q) {
            return Err(Error::NonPrime(q));
        }
        if q > MAX_ORDER {
            return Err(Error::OrderTooLarge(q));
        }
        let q32 = q as u32;
        let n = q32 as usize;

        let mut chi = vec![-1i8; n];
        chi[0] = 0;
        for x in 1..q32 {
            chi[((x * x) % q32) as usize] = 1;
        }

        let mut inv = vec![0u32; n];
        for x in 1..q32 {
            if inv[x as usize] != 0 {
                continue;
            }
            // Fermat: x^(q-2)
            let mut acc = 1u64;
            let mut base = x as u64;
            let mut e = q - 2;
            while e > 0 {
                if e & 1 == 1 {
                    acc = acc * base % q;
                }
                base = base * base % q;
                e >>= 1;
            }
            inv[x as usize] = acc as u32;
            inv[acc as usize] = x;
        }

        let nonsquare = (1..q32).find(|&x| chi[x as usize] == -1).unwrap();
        Ok(FieldSpec {
            q: q32,
            chi,
            inv,
            nonsquare,
        })
    }

    /// The field order `q`.
    pub fn order(&self) -> u32 {
        self.q
    }

    /// Reduces an arbitrary integer into the field.
    pub fn elem(&self, v: i64) -> Fe {
        Fe(v.rem_euclid(self.q as i64) as u32)
    }

    /// All elements in increasing residue order.
    pub fn elements(&self) -> impl Iterator<Item = Fe> {
        (0..self.q).map(Fe)
    }

    /// Non-zero elements in increasing residue order.
    pub fn units(&self) -> impl Iterator<Item = Fe> {
        (1..self.q).map(Fe)
    }

    #[inline]
    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        let s = a.0 + b.0;
        Fe(if s >= self.q { s - self.q } else { s })
    }

    #[inline]
    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        Fe(if a.0 >= b.0 {
            a.0 - b.0
        } else {
            a.0 + self.q - b.0
        })
    }

    #[inline]
    pub fn neg(&self, a: Fe) -> Fe {
        Fe(if a.0 == 0 { 0 } else { self.q - a.0 })
    }

    #[inline]
    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        Fe(a.0 * b.0 % self.q)
    }

    pub fn inv(&self, a: Fe) -> Result<Fe> {
        if a.0 == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(Fe(self.inv[a.0 as usize]))
    }

    pub fn div(&self, a: Fe, b: Fe) -> Result<Fe> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn arith(&self, a: Fe, b: Fe, op: ArithOp) -> Result<Fe> {
        match op {
            ArithOp::Add => Ok(self.add(a, b)),
            ArithOp::Sub => Ok(self.sub(a, b)),
            ArithOp::Mul => Ok(self.mul(a, b)),
            ArithOp::Div => self.div(a, b),
        }
    }

    /// Quadratic character: 0 for zero, +1 for non-zero squares, -1 otherwise.
    #[inline]
    pub fn chi(&self, a: Fe) -> i8 {
        self.chi[a.0 as usize]
    }

    /// `chi(-1)`: +1 exactly when `q = 1 (mod 4)`.
    pub fn chi_minus_one(&self) -> i8 {
        self.chi(self.neg(Fe::ONE))
    }

    pub fn square_class(&self, a: Fe) -> Option<SquareClass> {
        SquareClass::from_sign(self.chi(a))
    }

    /// The least non-square in integer order.
    pub fn canonical_nonsquare(&self) -> Fe {
        Fe(self.nonsquare)
    }

    /// Fixed representative of a square class: 1 or the canonical non-square.
    pub fn class_rep(&self, class: SquareClass) -> Fe {
        match class {
            SquareClass::Square => Fe::ONE,
            SquareClass::Nonsquare => self.canonical_nonsquare(),
        }
    }

    // Raw-residue helpers for the enumeration loops.

    #[inline]
    pub(crate) fn chi_raw(&self, a: u32) -> i8 {
        self.chi[a as usize]
    }

    #[inline]
    pub(crate) fn inv_raw(&self, a: u32) -> u32 {
        self.inv[a as usize]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constructs_small_fields() {
        let f3 = FieldSpec::new(3).unwrap();
        assert_eq!(f3.order(), 3);
        assert_eq!(f3.canonical_nonsquare(), Fe(2));
        assert_eq!(FieldSpec::new(7).unwrap().canonical_nonsquare(), Fe(3));
    }

    #[test]
    fn rejects_bad_orders() {
        assert_eq!(FieldSpec::new(4), Err(Error::EvenCharacteristic(4)));
        assert_eq!(FieldSpec::new(2), Err(Error::EvenCharacteristic(2)));
        assert_eq!(FieldSpec::new(9), Err(Error::NonPrime(9)));
        assert_eq!(FieldSpec::new(1), Err(Error::NonPrime(1)));
        assert_eq!(FieldSpec::new(0), Err(Error::NonPrime(0)));
        assert_eq!(FieldSpec::new(65537), Err(Error::OrderTooLarge(65537)));
    }

    #[test]
    fn arithmetic_examples() {
        let f3 = FieldSpec::new(3).unwrap();
        assert_eq!(f3.arith(Fe(2), Fe(2), ArithOp::Mul), Ok(Fe(1)));
        assert_eq!(
            f3.arith(Fe(1), Fe(0), ArithOp::Div),
            Err(Error::DivisionByZero)
        );
        let f5 = FieldSpec::new(5).unwrap();
        assert_eq!(f5.arith(Fe(3), Fe(2), ArithOp::Div), Ok(Fe(4)));
        assert_eq!(f5.arith(Fe(1), Fe(3), ArithOp::Sub), Ok(Fe(3)));
        assert_eq!(f5.arith(Fe(4), Fe(3), ArithOp::Add), Ok(Fe(2)));
    }

    #[test]
    fn character_examples() {
        let f3 = FieldSpec::new(3).unwrap();
        assert_eq!(f3.chi(Fe(0)), 0);
        assert_eq!(f3.chi(Fe(1)), 1);
        assert_eq!(f3.chi(Fe(2)), -1);
        let f7 = FieldSpec::new(7).unwrap();
        assert_eq!(f7.chi(Fe(3)), -1);
        for sq in [1, 2, 4] {
            assert_eq!(f7.chi(Fe(sq)), 1);
        }
    }

    fn small_fields() -> Vec<FieldSpec> {
        [3u64, 5, 7, 11, 13, 101]
            .iter()
            .map(|&q| FieldSpec::new(q).unwrap())
            .collect()
    }

    #[test]
    fn character_table_is_balanced() {
        for f in small_fields() {
            let plus = f.elements().filter(|&a| f.chi(a) == 1).count();
            let minus = f.elements().filter(|&a| f.chi(a) == -1).count();
            let half = (f.order() as usize - 1) / 2;
            assert_eq!((plus, minus), (half, half));
            assert_eq!(f.chi(f.canonical_nonsquare()), -1);
        }
    }

    #[test]
    fn character_is_multiplicative() {
        for f in small_fields() {
            for a in f.units() {
                for b in f.units() {
                    assert_eq!(f.chi(f.mul(a, b)), f.chi(a) * f.chi(b));
                }
            }
        }
    }

    #[test]
    fn minus_one_is_square_iff_one_mod_four() {
        for f in small_fields() {
            let expected = if f.order() % 4 == 1 { 1 } else { -1 };
            assert_eq!(f.chi_minus_one(), expected);
        }
    }

    #[test]
    fn division_inverts_multiplication() {
        for f in small_fields() {
            for a in f.elements() {
                for b in f.units() {
                    let c = f.div(a, b).unwrap();
                    assert_eq!(f.mul(c, b), a);
                }
            }
        }
    }
}

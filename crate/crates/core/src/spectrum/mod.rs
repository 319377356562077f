//! Weight formulas for the diagonal functionals `f_k^delta`, each computable
//! independently so that they can be checked against one another and
//! against brute force.
//!
//! All sums over `B in S_{m-1}` are read off a [`StratumTally`]; a
//! [`Session`] caches tallies so that a batch of queries enumerates each
//! `S_n` at most once.

mod fibers;
mod tally;

pub use fibers::{fiber_census, fiber_census_all, FiberReport, Quantity, Stratum, StratumCheck};
pub use tally::{StratumTally, TallySource};

use std::collections::BTreeMap;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{invalid, Result};
use crate::gf::{FieldSpec, SquareClass};
use crate::quadform::TypeSplit;
use crate::symmat::{cone_size, hyp_minus_ell, rank_count, space_size, DEFAULT_BUDGET};

/// How a weight value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    /// Direct count over the evaluation points.
    BruteForce,
    /// Sum of the restricted weights over ranks `1..=t`.
    RestrictedSum,
    /// The closed weight formula with sums of `lambda` and `gamma`.
    WeightFormula,
    /// The closed form for `k = 1`.
    ClosedW1,
    /// `W_1` plus the even-rank difference identity.
    DifferenceIdentity,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::BruteForce => "brute-force",
            Method::RestrictedSum => "restricted-sum",
            Method::WeightFormula => "weight-formula",
            Method::ClosedW1 => "closed-w1",
            Method::DifferenceIdentity => "difference-identity",
        }
    }
}

/// Shared state for a batch of computations over one field.
#[derive(Debug)]
pub struct Session {
    field: FieldSpec,
    budget: u64,
    workers: Option<usize>,
    tallies: Mutex<BTreeMap<usize, Arc<StratumTally>>>,
    lifted: Mutex<BTreeMap<usize, Arc<StratumTally>>>,
}

fn qpow(q: u32, e: i64) -> BigRational {
    let base = BigRational::from_integer(BigInt::from(q));
    if e >= 0 {
        num_traits::pow(base, e as usize)
    } else {
        num_traits::pow(base.recip(), (-e) as usize)
    }
}

fn qpow_int(q: u32, e: usize) -> BigInt {
    num_traits::pow(BigInt::from(q), e)
}

fn rat(v: BigInt) -> BigRational {
    BigRational::from_integer(v)
}

fn to_int(v: BigRational, what: &str) -> BigInt {
    assert!(v.is_integer(), "{what} is not an integer: {v}");
    v.to_integer()
}

impl Session {
    pub fn new(field: FieldSpec) -> Session {
        Session {
            field,
            budget: DEFAULT_BUDGET,
            workers: None,
            tallies: Mutex::new(BTreeMap::new()),
            lifted: Mutex::new(BTreeMap::new()),
        }
    }

    pub fn with_budget(mut self, budget: u64) -> Session {
        self.budget = budget;
        self
    }

    pub fn with_workers(mut self, workers: Option<usize>) -> Session {
        self.workers = workers;
        self
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn q(&self) -> u32 {
        self.field.order()
    }

    pub fn budget(&self) -> u64 {
        self.budget
    }

    pub fn workers(&self) -> Option<usize> {
        self.workers
    }

    /// Whether `S_n` can be enumerated within the budget.
    pub fn can_enumerate(&self, n: usize) -> bool {
        n <= crate::symmat::MAX_M && space_size(self.q(), n) <= self.budget as u128
    }

    /// Tally of `S_n` by full enumeration (cached).
    pub fn tally(&self, n: usize) -> Result<Arc<StratumTally>> {
        if let Some(t) = self.tallies.lock().unwrap().get(&n) {
            return Ok(t.clone());
        }
        let t = Arc::new(StratumTally::enumerate(
            &self.field,
            n,
            self.budget,
            self.workers,
        )?);
        self.tallies.lock().unwrap().insert(n, t.clone());
        Ok(t)
    }

    /// Tally of `S_n`, enumerated when the budget allows and otherwise lifted
    /// exactly from the largest enumerable size below.
    pub fn tally_or_lift(&self, n: usize) -> Result<Arc<StratumTally>> {
        if self.can_enumerate(n) {
            return self.tally(n);
        }
        if n == 0 {
            return self.tally(0);
        }
        if let Some(t) = self.lifted.lock().unwrap().get(&n) {
            return Ok(t.clone());
        }
        let prev = self.tally_or_lift(n - 1)?;
        let t = Arc::new(StratumTally::lift(&self.field, &prev));
        self.lifted.lock().unwrap().insert(n, t.clone());
        Ok(t)
    }

    fn check_km(k: usize, m: usize) -> Result<()> {
        if m == 0 {
            return Err(invalid("m must be at least 1"));
        }
        if k > m {
            return Err(invalid(format!("k = {k} exceeds m = {m}")));
        }
        Ok(())
    }

    /// Restricted weight `w_k^delta(r, m)` from the fiber decomposition over
    /// the trailing minor:
    ///
    /// `(q-1)(q^{m-1} - q^{r-2}) s(r-2) + (q-2) q^{r-1} s(r-1) + q^r s(r)`
    /// `+ L(r-1) + G(r-1) - L(r) - G(r)`,
    ///
    /// where `s(.) = s(., m-1)` and `L`, `G` are the sums of `lambda_B` over
    /// `f_{k-1}(B) = 0` and of `gamma_{f_{k-1}(B)}(B)` over `f_{k-1}(B) != 0`.
    pub fn restricted_weight_formula(
        &self,
        k: usize,
        class: SquareClass,
        r: usize,
        m: usize,
    ) -> Result<BigInt> {
        Self::check_km(k, m)?;
        if k == 0 || r == 0 || r > m {
            return Ok(BigInt::zero());
        }
        let q = self.q();
        let qq = q as u64;
        let tally = self.tally(m - 1)?;
        let j = k - 1;
        let (mi, ri) = (m as i64, r as i64);
        let s = |rr: i64| rat(rank_count(qq, rr, m - 1));
        let mut w = rat(BigInt::from(q - 1)) * (qpow(q, mi - 1) - qpow(q, ri - 2)) * s(ri - 2)
            + rat(BigInt::from(q as i64 - 2)) * qpow(q, ri - 1) * s(ri - 1)
            + qpow(q, ri) * s(ri);
        let sums =
            |rank: usize| rat(tally.lambda_sum(rank, j, class) + tally.gamma_sum(rank, j, class));
        w += sums(r - 1);
        w -= sums(r);
        Ok(to_int(w, "restricted weight"))
    }

    /// `sum_{r=1}^t w_k^delta(r, m)`.
    pub fn restricted_sum(
        &self,
        k: usize,
        class: SquareClass,
        t: usize,
        m: usize,
    ) -> Result<BigInt> {
        let mut acc = BigInt::zero();
        for r in 1..=t {
            acc += self.restricted_weight_formula(k, class, r, m)?;
        }
        Ok(acc)
    }

    /// `W_k^delta(t, m)` from the telescoped formula:
    ///
    /// `(q-1) q^{m-1} n_s(t-2) + (q-1) q^{t-1} s(t-1) + q^t s(t) - L(t) - G(t)`
    /// with all counts taken in `S_{m-1}`.
    pub fn weight_theorem(
        &self,
        k: usize,
        class: SquareClass,
        t: usize,
        m: usize,
    ) -> Result<BigInt> {
        Self::check_km(k, m)?;
        if k == 0 {
            return Ok(BigInt::zero());
        }
        let t = t.min(m);
        let q = self.q();
        let qq = q as u64;
        let tally = self.tally(m - 1)?;
        let j = k - 1;
        let ti = t as i64;
        let qm1 = BigInt::from(q - 1);
        let w = &qm1 * qpow_int(q, m - 1) * cone_size(qq, ti - 2, m - 1)
            + &qm1 * qpow_int(q, t - 1) * rank_count(qq, ti - 1, m - 1)
            + qpow_int(q, t) * rank_count(qq, ti, m - 1)
            - tally.lambda_sum(t, j, class)
            - tally.gamma_sum(t, j, class);
        Ok(w)
    }

    /// Brute-force `W_k^delta(t, m)` from the tally of `S_m`.
    pub fn weight_brute(&self, k: usize, class: SquareClass, t: usize, m: usize) -> Result<BigInt> {
        Self::check_km(k, m)?;
        Ok(BigInt::from(self.tally(m)?.weight(k, class, t)))
    }

    /// Brute-force `w_k^delta(r, m)` from the tally of `S_m`.
    pub fn restricted_weight_brute(
        &self,
        k: usize,
        class: SquareClass,
        r: usize,
        m: usize,
    ) -> Result<BigInt> {
        Self::check_km(k, m)?;
        Ok(BigInt::from(self.tally(m)?.restricted_weight(k, class, r)))
    }

    /// Closed form of `W_1(t, m)`.
    pub fn weight_w1(&self, t: usize, m: usize) -> Result<BigInt> {
        Self::check_km(1, m)?;
        Ok(weight_w1(self.q() as u64, t.min(m), m))
    }

    /// `q^t ((v_+ - v_-)(2t, m-1) - (h - e)_{k-1}(2t, m-1))`, which equals
    /// `W_k(2t, m) - W_1(2t, m)`.
    pub fn weight_diff_identity(
        &self,
        k: usize,
        class: SquareClass,
        t_half: usize,
        m: usize,
    ) -> Result<BigInt> {
        Self::check_km(k, m)?;
        if k == 0 {
            return Err(invalid("the difference identity needs k >= 1"));
        }
        if 2 * t_half > m {
            return Err(invalid(format!("rank 2t = {} exceeds m = {m}", 2 * t_half)));
        }
        let q = self.q();
        let tally = self.tally(m - 1)?;
        let split = tally.kernel(k - 1, class, 2 * t_half);
        let diff = hyp_minus_ell(q as u64, t_half, m - 1)
            - (BigInt::from(split.h) - BigInt::from(split.e));
        Ok(qpow_int(q, t_half) * diff)
    }

    /// All available evaluations of `W_k^delta(t, m)`.
    pub fn weight_report(
        &self,
        k: usize,
        class: SquareClass,
        t: usize,
        m: usize,
        brute: bool,
    ) -> Result<WeightReport> {
        Self::check_km(k, m)?;
        if t == 0 || t > m {
            return Err(invalid(format!("need 1 <= t <= m, got t = {t}, m = {m}")));
        }
        let mut values = BTreeMap::new();
        if brute {
            values.insert(Method::BruteForce, self.weight_brute(k, class, t, m)?);
        }
        values.insert(Method::RestrictedSum, self.restricted_sum(k, class, t, m)?);
        let theorem = self.weight_theorem(k, class, t, m)?;
        values.insert(Method::WeightFormula, theorem.clone());
        if k == 1 {
            values.insert(Method::ClosedW1, self.weight_w1(t, m)?);
        }
        if t % 2 == 0 && k >= 1 {
            let w1 = self.weight_w1(t, m)?;
            values.insert(
                Method::DifferenceIdentity,
                w1 + self.weight_diff_identity(k, class, t / 2, m)?,
            );
        }
        let value = values.get(&Method::BruteForce).cloned().unwrap_or(theorem);
        let agree = values.values().all(|v| *v == value);
        Ok(WeightReport {
            q: self.q() as u64,
            m,
            t,
            k,
            delta_class: class,
            value,
            values,
            agree,
        })
    }

    /// Kernel counts `(p, h, e)` of `f_k^delta` in the rank-`r` stratum of
    /// `S_m`, enumerated or lifted.
    pub fn type_split(
        &self,
        k: usize,
        class: SquareClass,
        r: usize,
        m: usize,
    ) -> Result<(TypeSplit, TallySource)> {
        Self::check_km(k, m)?;
        let t = self.tally_or_lift(m)?;
        Ok((t.kernel(k, class, r), t.source()))
    }

    /// Minimum distance of the code with rank bound `t`, by scanning every
    /// candidate weight with the weight formula.
    pub fn min_distance(&self, t: usize, m: usize) -> Result<MinDistance> {
        if t == 0 || t > m {
            return Err(invalid(format!("need 1 <= t <= m, got t = {t}, m = {m}")));
        }
        let q = self.q() as u64;
        let mut candidates = Vec::new();
        for k in 1..=m {
            for class in SquareClass::BOTH {
                candidates.push(Candidate {
                    k,
                    delta_class: class,
                    weight: self.weight_theorem(k, class, t, m)?,
                });
            }
        }
        let affine = candidates.iter().map(|c| c.weight.clone()).min().unwrap();
        let projective = to_int(
            rat(affine.clone()) / rat(BigInt::from(q - 1)),
            "projective distance",
        );
        let w1 = weight_w1(q, t, m);
        let even = if t % 2 == 0 {
            let closed = projective_distance_formula(q, t, m);
            Some(EvenRankCheck {
                w1: w1.clone(),
                min_equals_w1: affine == w1,
                projective_formula: closed.clone(),
                projective_formula_matches: closed == projective,
                w2_equals_w1: m < 2
                    || SquareClass::BOTH.iter().all(|c| {
                        candidates
                            .iter()
                            .any(|x| x.k == 2 && x.delta_class == *c && x.weight == w1)
                    }),
            })
        } else {
            None
        };
        let predicted = if t % 2 == 1 && m >= 2 {
            let class = minus_square_class(&self.field);
            let w = candidates
                .iter()
                .find(|c| c.k == 2 && c.delta_class == class)
                .map(|c| c.weight.clone())
                .unwrap();
            Some(PredictedMinimum {
                k: 2,
                delta_class: class,
                weight: w.clone(),
                is_minimum: w == affine,
            })
        } else {
            None
        };
        let mut distinct: Vec<BigInt> = candidates.iter().map(|c| c.weight.clone()).collect();
        distinct.sort();
        distinct.dedup();
        Ok(MinDistance {
            q,
            m,
            t,
            affine,
            projective,
            candidates,
            distinct_nonzero_weights: distinct.len(),
            even,
            predicted,
        })
    }

    /// `h_k - e_k <= bound` on the rank-`2t` stratum of `S_m`, and
    /// `(v_+ - v_-)(2t, m) - bound`, which must be `>= 0` (and is in fact 0).
    pub fn bound_check(
        &self,
        k: usize,
        class: SquareClass,
        t_half: usize,
        m: usize,
    ) -> Result<BoundReport> {
        Self::check_km(k, m)?;
        if t_half == 0 || 2 * t_half > m {
            return Err(invalid(format!(
                "need 2 <= 2t <= m, got 2t = {}, m = {m}",
                2 * t_half
            )));
        }
        let q = self.q() as u64;
        let (split, source) = self.type_split(k, class, 2 * t_half, m)?;
        let h_minus_e = BigInt::from(split.h) - BigInt::from(split.e);
        let bound = difference_bound(q, t_half, m);
        let v_diff = hyp_minus_ell(q, t_half, m);
        let slack = &v_diff - &bound;
        Ok(BoundReport {
            q,
            m,
            t_half,
            k,
            delta_class: class,
            h: split.h,
            e: split.e,
            h_minus_e: h_minus_e.clone(),
            bound: bound.clone(),
            hyp_minus_ell: v_diff,
            slack: slack.clone(),
            inequality_holds: h_minus_e <= bound,
            slack_nonnegative: !slack.is_negative(),
            slack_is_zero: slack.is_zero(),
            source,
        })
    }

    /// Compares the two `k = 2` weights with `W_1` at odd rank bound `t`.
    pub fn conjecture_check(&self, t: usize, m: usize) -> Result<ConjectureReport> {
        if t % 2 == 0 || t >= m {
            return Err(invalid(format!("need odd t < m, got t = {t}, m = {m}")));
        }
        let below_class = minus_square_class(&self.field);
        let above_class = match below_class {
            SquareClass::Square => SquareClass::Nonsquare,
            SquareClass::Nonsquare => SquareClass::Square,
        };
        let w1 = self.weight_theorem(1, SquareClass::Square, t, m)?;
        let w2_below = self.weight_theorem(2, below_class, t, m)?;
        let w2_above = self.weight_theorem(2, above_class, t, m)?;
        let md = self.min_distance(t, m)?;
        let gap_below = &w1 - &w2_below;
        let gap_above = &w2_above - &w1;
        let ordered = w2_below < w1 && w1 < w2_above;
        let equal_gaps = gap_below == gap_above;
        let minimizers = md
            .candidates
            .iter()
            .filter(|c| c.weight == md.affine)
            .map(|c| (c.k, c.delta_class))
            .collect::<Vec<_>>();
        Ok(ConjectureReport {
            q: self.q() as u64,
            m,
            t,
            w1,
            w2_minus_delta_square: w2_below.clone(),
            w2_minus_delta_nonsquare: w2_above,
            delta_class_minus_delta_square: below_class,
            theta: if equal_gaps {
                Some(gap_below.clone())
            } else {
                None
            },
            gap_below,
            gap_above,
            ordered,
            equal_gaps,
            global_minimum: md.affine.clone(),
            is_global_minimum: w2_below == md.affine,
            minimizers,
            holds: ordered && equal_gaps && w2_below == md.affine,
        })
    }
}

/// Square class of the `delta` with `-delta` a square, i.e. the class of -1.
pub fn minus_square_class(field: &FieldSpec) -> SquareClass {
    if field.chi_minus_one() == 1 {
        SquareClass::Square
    } else {
        SquareClass::Nonsquare
    }
}

/// Closed form of `W_1(t, m)`. The even case carries a `q^{-1}` that always
/// clears; the result is checked to be integral.
pub fn weight_w1(q: u64, t: usize, m: usize) -> BigInt {
    let q32 = q as u32;
    let (ti, mm) = (t as i64, m - 1);
    let qm1 = rat(BigInt::from(q - 1));
    let head = qm1.clone() * qpow(q32, m as i64 - 1) * rat(cone_size(q, ti - 2, mm))
        + qm1.clone() * qpow(q32, ti - 1) * rat(rank_count(q, ti - 1, mm));
    let tail = if t % 2 == 1 {
        qm1 * qpow(q32, ti - 1) * rat(rank_count(q, ti, mm))
    } else {
        qm1 * (qpow(q32, ti - 1) - qpow(q32, -1)) * rat(rank_count(q, ti, mm))
    };
    to_int(head + tail, "W_1")
}

/// `q^{m-1} n_s(t-2, m-1) + q^{t-1} s(t-1, m-1) + (q^{t-1} - q^{-1}) s(t, m-1)`
/// for even `t`: the minimum distance of the projective code.
pub fn projective_distance_formula(q: u64, t: usize, m: usize) -> BigInt {
    let q32 = q as u32;
    let (ti, mm) = (t as i64, m - 1);
    let v = qpow(q32, m as i64 - 1) * rat(cone_size(q, ti - 2, mm))
        + qpow(q32, ti - 1) * rat(rank_count(q, ti - 1, mm))
        + (qpow(q32, ti - 1) - qpow(q32, -1)) * rat(rank_count(q, ti, mm));
    to_int(v, "projective distance formula")
}

/// Upper bound on `h_k - e_k` at rank `2t` in `S_m`:
/// `q prod_{i<2t-1}(q^{m-1} - q^i) / prod_{i<t-1}(q^{2t-2} - q^{2i})
///  + q^{2t} prod_{i<2t}(q^{m-1} - q^i) / prod_{i<t}(q^{2t} - q^{2i})`.
pub fn difference_bound(q: u64, t_half: usize, m: usize) -> BigInt {
    let qb = |e: usize| qpow_int(q as u32, e);
    let t = t_half;
    let num1: BigInt = (0..2 * t - 1).map(|i| qb(m - 1) - qb(i)).product();
    let den1: BigInt = (0..t - 1).map(|i| qb(2 * t - 2) - qb(2 * i)).product();
    let num2: BigInt = (0..2 * t).map(|i| qb(m - 1) - qb(i)).product();
    let den2: BigInt = (0..t).map(|i| qb(2 * t) - qb(2 * i)).product();
    let v = rat(BigInt::from(q)) * BigRational::new(num1, den1)
        + rat(qb(2 * t)) * BigRational::new(num2, den2);
    to_int(v, "difference bound")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WeightReport {
    pub q: u64,
    pub m: usize,
    pub t: usize,
    pub k: usize,
    pub delta_class: SquareClass,
    #[serde(serialize_with = "crate::json::serialize_big")]
    pub value: BigInt,
    #[serde(serialize_with = "serialize_method_map")]
    pub values: BTreeMap<Method, BigInt>,
    pub agree: bool,
}

fn serialize_method_map<S: serde::Serializer>(
    map: &BTreeMap<Method, BigInt>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    let mut obj = serde_json::Map::new();
    for (k, v) in map {
        obj.insert(k.as_str().to_string(), crate::json::big(v));
    }
    serde::Serialize::serialize(&obj, s)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Candidate {
    pub k: usize,
    pub delta_class: SquareClass,
    #[serde(serialize_with = "crate::json::serialize_big")]
    pub weight: BigInt,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EvenRankCheck {
    #[serde(serialize_with = "crate::json::serialize_big")]
    pub w1: BigInt,
    pub min_equals_w1: bool,
    /// The projective distance formula; it equals the affine distance
    /// divided by `q - 1`, i.e. it is the distance of the projective code.
    #[serde(serialize_with = "crate::json::serialize_big")]
    pub projective_formula: BigInt,
    pub projective_formula_matches: bool,
    pub w2_equals_w1: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PredictedMinimum {
    pub k: usize,
    pub delta_class: SquareClass,
    #[serde(serialize_with = "crate::json::serialize_big")]
    pub weight: BigInt,
    pub is_minimum: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MinDistance {
    pub q: u64,
    pub m: usize,
    pub t: usize,
    #[serde(serialize_with = "crate::json::serialize_big")]
    pub affine: BigInt,
    #[serde(serialize_with = "crate::json::serialize_big")]
    pub projective: BigInt,
    pub candidates: Vec<Candidate>,
    pub distinct_nonzero_weights: usize,
    pub even: Option<EvenRankCheck>,
    pub predicted: Option<PredictedMinimum>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundReport {
    pub q: u64,
    pub m: usize,
    pub t_half: usize,
    pub k: usize,
    pub delta_class: SquareClass,
    pub h: u128,
    pub e: u128,
    #[serde(serialize_with = "crate::json::serialize_big")]
    pub h_minus_e: BigInt,
    #[serde(serialize_with = "crate::json::serialize_big")]
    pub bound: BigInt,
    #[serde(serialize_with = "crate::json::serialize_big")]
    pub hyp_minus_ell: BigInt,
    #[serde(serialize_with = "crate::json::serialize_big")]
    pub slack: BigInt,
    pub inequality_holds: bool,
    pub slack_nonnegative: bool,
    pub slack_is_zero: bool,
    pub source: TallySource,
}

impl BoundReport {
    pub fn passes(&self) -> bool {
        self.inequality_holds && self.slack_nonnegative
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConjectureReport {
    pub q: u64,
    pub m: usize,
    pub t: usize,
    #[serde(serialize_with = "crate::json::serialize_big")]
    pub w1: BigInt,
    #[serde(serialize_with = "crate::json::serialize_big")]
    pub w2_minus_delta_square: BigInt,
    #[serde(serialize_with = "crate::json::serialize_big")]
    pub w2_minus_delta_nonsquare: BigInt,
    /// Class of `delta` for which `-delta` is a square.
    pub delta_class_minus_delta_square: SquareClass,
    #[serde(serialize_with = "crate::json::serialize_big")]
    pub gap_below: BigInt,
    #[serde(serialize_with = "crate::json::serialize_big")]
    pub gap_above: BigInt,
    #[serde(serialize_with = "serialize_opt_big")]
    pub theta: Option<BigInt>,
    pub ordered: bool,
    pub equal_gaps: bool,
    #[serde(serialize_with = "crate::json::serialize_big")]
    pub global_minimum: BigInt,
    pub is_global_minimum: bool,
    pub minimizers: Vec<(usize, SquareClass)>,
    pub holds: bool,
}

fn serialize_opt_big<S: serde::Serializer>(
    v: &Option<BigInt>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(b) => crate::json::serialize_big(b, s),
        None => s.serialize_none(),
    }
}

/// Converts an exact count to `u64` for callers that need machine integers.
pub fn to_u64(v: &BigInt) -> Result<u64> {
    v.to_u64()
        .ok_or_else(|| invalid(format!("{v} does not fit in 64 bits")))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn session(q: u64) -> Session {
        Session::new(FieldSpec::new(q).unwrap())
    }

    use SquareClass::{Nonsquare, Square};

    #[test]
    fn weight_examples() {
        let s = session(3);
        assert_eq!(
            s.weight_theorem(3, Square, 2, 3).unwrap(),
            BigInt::from(180)
        );
        assert_eq!(
            s.weight_theorem(1, Square, 3, 4).unwrap(),
            BigInt::from(14094)
        );
        assert_eq!(s.weight_w1(1, 3).unwrap(), BigInt::from(18));
        assert_eq!(s.weight_w1(2, 3).unwrap(), BigInt::from(162));
        assert_eq!(s.weight_w1(4, 5).unwrap(), BigInt::from(3424842));
        for k in 1..=3 {
            for c in SquareClass::BOTH {
                assert_eq!(
                    s.weight_theorem(k, c, 3, 3).unwrap(),
                    BigInt::from(729 - 243)
                );
            }
        }
        assert_eq!(
            s.restricted_weight_formula(1, Square, 1, 3).unwrap(),
            BigInt::from(18)
        );
        assert_eq!(
            s.restricted_weight_formula(1, Square, 4, 3).unwrap(),
            BigInt::from(0)
        );
    }

    #[test]
    fn difference_identity_examples() {
        let s = session(3);
        assert_eq!(
            s.weight_diff_identity(1, Square, 1, 3).unwrap(),
            BigInt::from(0)
        );
        assert_eq!(
            s.weight_diff_identity(3, Square, 1, 3).unwrap(),
            BigInt::from(18)
        );
        assert_eq!(
            s.weight_diff_identity(2, Nonsquare, 1, 4).unwrap(),
            BigInt::from(0)
        );
    }

    #[test]
    fn four_way_agreement_small() {
        for q in [3u64, 5] {
            let s = session(q);
            for m in 1..=3 {
                for t in 1..=m {
                    for k in 0..=m {
                        for c in SquareClass::BOTH {
                            let r = s.weight_report(k, c, t, m, true).unwrap();
                            assert!(r.agree, "{r:?}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn min_distance_examples() {
        let s = session(3);
        let d = s.min_distance(2, 3).unwrap();
        assert_eq!(d.affine, BigInt::from(162));
        assert_eq!(d.projective, BigInt::from(81));
        assert!(d.even.as_ref().unwrap().projective_formula_matches);
        let d = s.min_distance(1, 3).unwrap();
        assert_eq!(d.affine, BigInt::from(12));
        assert!(d.predicted.unwrap().is_minimum);
    }

    #[test]
    fn bound_is_tight_in_the_closed_form() {
        let s = session(3);
        let b = s.bound_check(0, Square, 1, 2).unwrap();
        assert!(b.passes());
        assert!(b.slack_is_zero);
        assert_eq!(difference_bound(3, 1, 2), BigInt::from(6));
    }

    #[test]
    fn conjecture_examples() {
        let s = session(3);
        let c = s.conjecture_check(1, 3).unwrap();
        assert_eq!(c.w2_minus_delta_square, BigInt::from(12));
        assert_eq!(c.w1, BigInt::from(18));
        assert_eq!(c.w2_minus_delta_nonsquare, BigInt::from(24));
        assert_eq!(c.theta, Some(BigInt::from(6)));
        assert!(c.holds);
        // q^4 (q-1)^2, confirmed by brute force
        let c = s.conjecture_check(3, 4).unwrap();
        assert_eq!(c.theta, Some(BigInt::from(324)));
    }
}

//! Fibers of the projection `A -> B` (delete the first row and column) on
//! the kernel of `f_k^delta` inside `S(2t, m)`, split into hyperbolic and
//! elliptic `A`.
//!
//! The census walks `B` over `S_{m-1}` and, for each `B`, every first row
//! `(z, y)`; all `(k, delta)` pairs are handled in the same pass.

use serde::Serialize;

use crate::error::{invalid, Result};
use crate::gf::{FieldSpec, SquareClass};
use crate::symmat::{classify_packed, packed_index, packed_len, Enumerator, RankDisc};

use super::Session;

/// Strata of `B` for a fixed rank bound `2t`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Stratum {
    LowHyperbolic,
    LowElliptic,
    TopHyperbolicZero,
    TopHyperbolicNonzero,
    TopEllipticZero,
    TopEllipticNonzero,
    OddZero,
    OddNonzero,
    Other,
}

const STRATA: [Stratum; 9] = [
    Stratum::LowHyperbolic,
    Stratum::LowElliptic,
    Stratum::TopHyperbolicZero,
    Stratum::TopHyperbolicNonzero,
    Stratum::TopEllipticZero,
    Stratum::TopEllipticNonzero,
    Stratum::OddZero,
    Stratum::OddNonzero,
    Stratum::Other,
];

impl Stratum {
    fn index(self) -> usize {
        STRATA.iter().position(|&s| s == self).unwrap()
    }

    pub fn describe(self) -> &'static str {
        match self {
            Stratum::LowHyperbolic => "rank 2t-2, hyperbolic B",
            Stratum::LowElliptic => "rank 2t-2, elliptic B",
            Stratum::TopHyperbolicZero => "rank 2t, hyperbolic B, f(B) = 0",
            Stratum::TopHyperbolicNonzero => "rank 2t, hyperbolic B, f(B) != 0",
            Stratum::TopEllipticZero => "rank 2t, elliptic B, f(B) = 0",
            Stratum::TopEllipticNonzero => "rank 2t, elliptic B, f(B) != 0",
            Stratum::OddZero => "rank 2t-1, f(B) = 0",
            Stratum::OddNonzero => "rank 2t-1, f(B) != 0",
            Stratum::Other => "other ranks",
        }
    }
}

fn stratum_of(rd: RankDisc, chi_minus_one: i8, t_half: usize, f_zero: bool) -> Stratum {
    let r = rd.rank as usize;
    let top = 2 * t_half;
    if r + 2 == top {
        if rd.is_hyperbolic(chi_minus_one) {
            Stratum::LowHyperbolic
        } else {
            Stratum::LowElliptic
        }
    } else if r == top {
        match (rd.is_hyperbolic(chi_minus_one), f_zero) {
            (true, true) => Stratum::TopHyperbolicZero,
            (true, false) => Stratum::TopHyperbolicNonzero,
            (false, true) => Stratum::TopEllipticZero,
            (false, false) => Stratum::TopEllipticNonzero,
        }
    } else if r + 1 == top {
        if f_zero {
            Stratum::OddZero
        } else {
            Stratum::OddNonzero
        }
    } else {
        Stratum::Other
    }
}

/// Which fiber quantity a check is about.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Quantity {
    /// `|phi_1^{-1}(B)|`: hyperbolic `A` over `B`.
    Hyperbolic,
    /// `|phi_2^{-1}(B)|`: elliptic `A` over `B`.
    Elliptic,
    /// `|phi_1^{-1}(B)| - |phi_2^{-1}(B)|`.
    Difference,
}

#[derive(Debug, Clone, Copy)]
struct Range {
    min: i64,
    max: i64,
}

impl Range {
    const EMPTY: Range = Range {
        min: i64::MAX,
        max: i64::MIN,
    };

    fn add(&mut self, v: i64) {
        self.min = self.min.min(v);
        self.max = self.max.max(v);
    }

    fn merge(&mut self, o: Range) {
        self.min = self.min.min(o.min);
        self.max = self.max.max(o.max);
    }
}

#[derive(Debug, Clone, Copy)]
struct Obs {
    matrices: u64,
    phi1: Range,
    phi2: Range,
    diff: Range,
}

impl Obs {
    const EMPTY: Obs = Obs {
        matrices: 0,
        phi1: Range::EMPTY,
        phi2: Range::EMPTY,
        diff: Range::EMPTY,
    };
}

/// One stratum assertion.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StratumCheck {
    pub stratum: Stratum,
    pub description: &'static str,
    pub quantity: Quantity,
    /// Number of `B` in the stratum.
    pub matrices: u64,
    pub expected: i64,
    /// Smallest and largest observed value over the stratum; `None` when it
    /// is empty.
    pub observed_min: Option<i64>,
    pub observed_max: Option<i64>,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FiberReport {
    pub q: u64,
    pub m: usize,
    pub t_half: usize,
    pub k: usize,
    pub delta_class: SquareClass,
    /// `h_k^delta(2t, m)` and `e_k^delta(2t, m)`, i.e. the fiber totals.
    pub h: u64,
    pub e: u64,
    pub checks: Vec<StratumCheck>,
}

impl FiberReport {
    pub fn passes(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

fn expectations(q: i64, t: usize, m: usize) -> Vec<(Stratum, Quantity, i64)> {
    let p = |e: usize| q.pow(e as u32);
    let low = p(m - 1) - p(2 * t - 2);
    let half = (q - 1) / 2 * p(t - 1);
    use Quantity::*;
    use Stratum::*;
    vec![
        (LowHyperbolic, Hyperbolic, low),
        (LowHyperbolic, Elliptic, 0),
        (LowElliptic, Hyperbolic, 0),
        (LowElliptic, Elliptic, low),
        (
            TopHyperbolicZero,
            Hyperbolic,
            p(2 * t - 1) + p(t) - p(t - 1),
        ),
        (TopHyperbolicZero, Elliptic, 0),
        (TopHyperbolicNonzero, Hyperbolic, p(2 * t - 1) - p(t - 1)),
        (TopHyperbolicNonzero, Elliptic, 0),
        (TopEllipticZero, Hyperbolic, 0),
        (TopEllipticZero, Elliptic, p(2 * t - 1) - p(t) + p(t - 1)),
        (TopEllipticNonzero, Hyperbolic, 0),
        (TopEllipticNonzero, Elliptic, p(2 * t - 1) + p(t - 1)),
        (OddZero, Hyperbolic, half * (p(t - 1) + 1)),
        (OddZero, Elliptic, half * (p(t - 1) - 1)),
        (OddNonzero, Difference, -p(t - 1)),
        (Other, Hyperbolic, 0),
        (Other, Elliptic, 0),
    ]
}

/// Per `(k, class)` observations: `[k - 1][class] -> (strata, h, e)`.
type Census = Vec<[(Vec<Obs>, u64, u64); 2]>;

fn empty_census(m: usize) -> Census {
    (0..m)
        .map(|_| {
            [
                (vec![Obs::EMPTY; STRATA.len()], 0, 0),
                (vec![Obs::EMPTY; STRATA.len()], 0, 0),
            ]
        })
        .collect()
}

fn run_census(session: &Session, t_half: usize, m: usize) -> Result<Census> {
    if t_half == 0 || 2 * t_half > m {
        return Err(invalid(format!(
            "need 2 <= 2t <= m, got 2t = {}, m = {m}",
            2 * t_half
        )));
    }
    let field: &FieldSpec = session.field();
    let q = field.order();
    let chi_m1 = field.chi_minus_one();
    let n = m - 1;
    let reps = [
        field.class_rep(SquareClass::Square).value(),
        field.class_rep(SquareClass::Nonsquare).value(),
    ];
    let target = 2 * t_half as u8;
    // Budget covers the q^m first rows visited per B as well.
    let size = crate::symmat::space_size(q, m);
    if size > session.budget() as u128 {
        return Err(crate::Error::BudgetExceeded {
            required: size,
            cap: session.budget(),
        });
    }
    Enumerator::new(field, n)
        .with_budget(u64::MAX)
        .with_workers(session.workers())
        .fold(
            || empty_census(m),
            |acc, b| {
                let rd_b = classify_packed(field, n, b);
                // g[k-1][c] = f_{k-1}^{delta_c}(B)
                let mut g = vec![[0u32; 2]; m];
                let mut prefix = 0u64;
                for k in 2..=m {
                    let d = b[packed_index(n, k - 2, k - 2)] as u64;
                    for c in 0..2 {
                        g[k - 1][c] = ((prefix + reps[c] as u64 * d) % q as u64) as u32;
                    }
                    prefix += d;
                }
                let mut phi = vec![[[0i64; 2]; 2]; m];
                let mut packed = vec![0u32; packed_len(m)];
                packed[m..].copy_from_slice(b);
                let mut row = vec![0u32; m];
                loop {
                    packed[..m].copy_from_slice(&row);
                    let rd = classify_packed(field, m, &packed);
                    if rd.rank == target {
                        let ty = if rd.is_hyperbolic(chi_m1) { 0 } else { 1 };
                        let z = row[0] as u64;
                        for (k1, gk) in g.iter().enumerate() {
                            for c in 0..2 {
                                let f = if k1 == 0 {
                                    reps[c] as u64 * z % q as u64
                                } else {
                                    (z + gk[c] as u64) % q as u64
                                };
                                if f == 0 {
                                    phi[k1][c][ty] += 1;
                                }
                            }
                        }
                    }
                    if !crate::symmat::increment_digits(&mut row, q) {
                        break;
                    }
                }
                for k1 in 0..m {
                    for c in 0..2 {
                        let f_zero = g[k1][c] == 0;
                        let s = stratum_of(rd_b, chi_m1, t_half, f_zero).index();
                        let [p1, p2] = phi[k1][c];
                        let (obs, h, e) = &mut acc[k1][c];
                        let o = &mut obs[s];
                        o.matrices += 1;
                        o.phi1.add(p1);
                        o.phi2.add(p2);
                        o.diff.add(p1 - p2);
                        *h += p1 as u64;
                        *e += p2 as u64;
                    }
                }
            },
            |mut x, y| {
                for (xa, ya) in x.iter_mut().zip(y) {
                    for (xc, yc) in xa.iter_mut().zip(ya) {
                        for (xo, yo) in xc.0.iter_mut().zip(yc.0) {
                            xo.matrices += yo.matrices;
                            xo.phi1.merge(yo.phi1);
                            xo.phi2.merge(yo.phi2);
                            xo.diff.merge(yo.diff);
                        }
                        xc.1 += yc.1;
                        xc.2 += yc.2;
                    }
                }
                x
            },
        )
}

fn build_report(
    session: &Session,
    k: usize,
    class: SquareClass,
    t_half: usize,
    m: usize,
    data: &(Vec<Obs>, u64, u64),
) -> FiberReport {
    let q = session.q() as i64;
    let checks = expectations(q, t_half, m)
        .into_iter()
        .map(|(stratum, quantity, expected)| {
            let o = data.0[stratum.index()];
            let range = match quantity {
                Quantity::Hyperbolic => o.phi1,
                Quantity::Elliptic => o.phi2,
                Quantity::Difference => o.diff,
            };
            let (observed_min, observed_max) = if o.matrices == 0 {
                (None, None)
            } else {
                (Some(range.min), Some(range.max))
            };
            StratumCheck {
                stratum,
                description: stratum.describe(),
                quantity,
                matrices: o.matrices,
                expected,
                observed_min,
                observed_max,
                pass: o.matrices == 0 || (range.min == expected && range.max == expected),
            }
        })
        .collect();
    FiberReport {
        q: q as u64,
        m,
        t_half,
        k,
        delta_class: class,
        h: data.1,
        e: data.2,
        checks,
    }
}

/// Fiber census for every `1 <= k <= m` and both classes of `delta`, in
/// `(k, class)` order.
pub fn fiber_census_all(session: &Session, t_half: usize, m: usize) -> Result<Vec<FiberReport>> {
    let census = run_census(session, t_half, m)?;
    let mut out = Vec::with_capacity(2 * m);
    for (k1, per_class) in census.iter().enumerate() {
        for (c, data) in per_class.iter().enumerate() {
            out.push(build_report(
                session,
                k1 + 1,
                SquareClass::BOTH[c],
                t_half,
                m,
                data,
            ));
        }
    }
    Ok(out)
}

/// Fiber census for one `(k, delta)`.
pub fn fiber_census(
    session: &Session,
    k: usize,
    class: SquareClass,
    t_half: usize,
    m: usize,
) -> Result<FiberReport> {
    if k == 0 || k > m {
        return Err(invalid(format!("need 1 <= k <= m, got k = {k}, m = {m}")));
    }
    let all = fiber_census_all(session, t_half, m)?;
    Ok(all
        .into_iter()
        .find(|r| r.k == k && r.delta_class == class)
        .expect("every (k, class) is reported"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::FieldSpec;

    #[test]
    fn small_census_passes() {
        let s = Session::new(FieldSpec::new(3).unwrap());
        let r = fiber_census(&s, 1, SquareClass::Square, 1, 2).unwrap();
        assert!(r.passes(), "{r:?}");
        let low = r
            .checks
            .iter()
            .find(|c| c.stratum == Stratum::LowHyperbolic && c.quantity == Quantity::Hyperbolic)
            .unwrap();
        assert_eq!(low.observed_min, Some(2));
        assert_eq!(low.matrices, 1);
    }

    #[test]
    fn totals_match_kernel_counts() {
        let s = Session::new(FieldSpec::new(3).unwrap());
        for r in fiber_census_all(&s, 1, 3).unwrap() {
            assert!(r.passes(), "{r:?}");
            let (split, _) = s.type_split(r.k, r.delta_class, 2, 3).unwrap();
            assert_eq!((r.h as u128, r.e as u128), (split.h, split.e));
        }
    }
}

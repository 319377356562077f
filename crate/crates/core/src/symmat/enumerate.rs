//! Exhaustive enumeration of `S_m` in lexicographic packed order.
//!
//! Matrix number `i` has packed digits equal to the base-`q` expansion of `i`
//! with the first packed entry most significant. Parallel folds split the
//! index range into a fixed number of contiguous chunks and merge the
//! per-chunk accumulators in chunk order, so results never depend on the
//! worker count.

use rayon::prelude::*;

use super::{classify_packed, packed_len, SymMatrix, MAX_M};
use crate::error::{invalid, Error, Result};
use crate::gf::FieldSpec;

/// Default cap on the number of matrices a single enumeration may visit.
pub const DEFAULT_BUDGET: u64 = 1 << 31;

const CHUNKS: u64 = 512;

/// Selection of matrices for [`Enumerator::iter`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnumMode {
    All,
    RankEq(usize),
    RankLe(usize),
}

impl EnumMode {
    fn accepts(self, rank: usize) -> bool {
        match self {
            EnumMode::All => true,
            EnumMode::RankEq(r) => rank == r,
            EnumMode::RankLe(t) => rank <= t,
        }
    }
}

/// `q^(m(m+1)/2)`, saturating at `u128::MAX`.
pub fn space_size(q: u32, m: usize) -> u128 {
    (q as u128)
        .checked_pow(packed_len(m) as u32)
        .unwrap_or(u128::MAX)
}

/// Enumeration of all symmetric `m x m` matrices over a field, subject to a
/// budget.
#[derive(Debug, Clone, Copy)]
pub struct Enumerator<'f> {
    field: &'f FieldSpec,
    m: usize,
    budget: u64,
    workers: Option<usize>,
}

impl<'f> Enumerator<'f> {
    pub fn new(field: &'f FieldSpec, m: usize) -> Enumerator<'f> {
        Enumerator {
            field,
            m,
            budget: DEFAULT_BUDGET,
            workers: None,
        }
    }

    pub fn with_budget(mut self, budget: u64) -> Self {
        self.budget = budget;
        self
    }

    /// Worker threads for [`Enumerator::fold`]; `None` uses the global pool.
    pub fn with_workers(mut self, workers: Option<usize>) -> Self {
        self.workers = workers;
        self
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn size(&self) -> u128 {
        space_size(self.field.order(), self.m)
    }

    /// Returns the number of matrices if it fits the budget.
    pub fn check_budget(&self) -> Result<u64> {
        if self.m > MAX_M {
            return Err(invalid(format!(
                "enumeration supports m <= {MAX_M}, got {}",
                self.m
            )));
        }
        let size = self.size();
        if size > self.budget as u128 {
            return Err(Error::BudgetExceeded {
                required: size,
                cap: self.budget,
            });
        }
        Ok(size as u64)
    }

    /// Sequential stream of matrices in lexicographic packed order.
    pub fn iter(&self, mode: EnumMode) -> Result<SymMatrixIter<'f>> {
        let total = self.check_budget()?;
        Ok(SymMatrixIter {
            field: self.field,
            m: self.m,
            mode,
            digits: vec![0; packed_len(self.m)],
            remaining: total,
        })
    }

    /// Parallel fold over the packed residues of every matrix.
    pub fn fold<T, I, V, M>(&self, init: I, visit: V, merge: M) -> Result<T>
    where
        T: Send,
        I: Fn() -> T + Sync + Send,
        V: Fn(&mut T, &[u32]) + Sync + Send,
        M: Fn(T, T) -> T,
    {
        self.fold_indexed(init, |acc, _, digits| visit(acc, digits), merge)
    }

    /// Like [`Enumerator::fold`], also passing the lexicographic index.
    pub fn fold_indexed<T, I, V, M>(&self, init: I, visit: V, merge: M) -> Result<T>
    where
        T: Send,
        I: Fn() -> T + Sync + Send,
        V: Fn(&mut T, u64, &[u32]) + Sync + Send,
        M: Fn(T, T) -> T,
    {
        let total = self.check_budget()?;
        let q = self.field.order();
        let len = packed_len(self.m);
        let chunks = CHUNKS.min(total).max(1);
        let chunk = total.div_ceil(chunks);
        let run = || -> Vec<T> {
            (0..chunks)
                .into_par_iter()
                .map(|c| {
                    let mut acc = init();
                    let start = c * chunk;
                    let end = total.min(start + chunk);
                    if start >= end {
                        return acc;
                    }
                    let mut digits = decode(start, q, len);
                    for idx in start..end {
                        visit(&mut acc, idx, &digits);
                        increment(&mut digits, q);
                    }
                    acc
                })
                .collect()
        };
        let parts = match self.workers {
            Some(n) => rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| invalid(format!("worker pool: {e}")))?
                .install(run),
            None => run(),
        };
        Ok(parts.into_iter().reduce(merge).unwrap_or_else(init))
    }
}

/// Base-`q` digits of `index`, most significant first.
pub(crate) fn decode(mut index: u64, q: u32, len: usize) -> Vec<u32> {
    let mut digits = vec![0u32; len];
    for d in digits.iter_mut().rev() {
        *d = (index % q as u64) as u32;
        index /= q as u64;
    }
    digits
}

/// Odometer step in lexicographic order. Returns false on wrap-around.
#[inline]
pub(crate) fn increment(digits: &mut [u32], q: u32) -> bool {
    for d in digits.iter_mut().rev() {
        *d += 1;
        if *d < q {
            return true;
        }
        *d = 0;
    }
    false
}

/// Iterator returned by [`Enumerator::iter`].
#[derive(Debug, Clone)]
pub struct SymMatrixIter<'f> {
    field: &'f FieldSpec,
    m: usize,
    mode: EnumMode,
    digits: Vec<u32>,
    remaining: u64,
}

impl Iterator for SymMatrixIter<'_> {
    type Item = SymMatrix;

    fn next(&mut self) -> Option<SymMatrix> {
        while self.remaining > 0 {
            self.remaining -= 1;
            let accept = match self.mode {
                EnumMode::All => true,
                mode => {
                    mode.accepts(classify_packed(self.field, self.m, &self.digits).rank as usize)
                }
            };
            let current = accept.then(|| SymMatrix::from_raw(self.m, &self.digits));
            increment(&mut self.digits, self.field.order());
            if current.is_some() {
                return current;
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::Fe;

    #[test]
    fn counts_small_spaces() {
        let f = FieldSpec::new(3).unwrap();
        let e = Enumerator::new(&f, 2);
        assert_eq!(e.iter(EnumMode::All).unwrap().count(), 27);
        assert_eq!(e.iter(EnumMode::RankEq(2)).unwrap().count(), 18);
        assert_eq!(e.iter(EnumMode::RankLe(1)).unwrap().count(), 9);
        let e3 = Enumerator::new(&f, 3);
        assert_eq!(e3.iter(EnumMode::RankEq(1)).unwrap().count(), 26);
    }

    #[test]
    fn order_is_lexicographic_and_unique() {
        let f = FieldSpec::new(3).unwrap();
        let all: Vec<_> = Enumerator::new(&f, 2)
            .iter(EnumMode::All)
            .unwrap()
            .collect();
        assert_eq!(all[0], SymMatrix::zero(2));
        assert_eq!(all[1].packed(), &[Fe(0), Fe(0), Fe(1)]);
        for w in all.windows(2) {
            assert!(w[0].packed() < w[1].packed());
        }
    }

    #[test]
    fn empty_matrix_space_has_one_element() {
        let f = FieldSpec::new(5).unwrap();
        let e = Enumerator::new(&f, 0);
        assert_eq!(e.iter(EnumMode::All).unwrap().count(), 1);
        let n = e.fold(|| 0u64, |c, _| *c += 1, |a, b| a + b).unwrap();
        assert_eq!(n, 1);
    }

    #[test]
    fn budget_is_enforced() {
        let f = FieldSpec::new(3).unwrap();
        let err = Enumerator::new(&f, 3)
            .with_budget(100)
            .check_budget()
            .unwrap_err();
        assert_eq!(
            err,
            Error::BudgetExceeded {
                required: 729,
                cap: 100
            }
        );
        assert!(Enumerator::new(&f, 9).check_budget().is_err());
    }

    #[test]
    fn fold_matches_iteration_for_any_worker_count() {
        let f = FieldSpec::new(5).unwrap();
        let seq: Vec<Vec<u32>> = Enumerator::new(&f, 2)
            .iter(EnumMode::All)
            .unwrap()
            .map(|a| a.raw())
            .collect();
        for workers in [None, Some(1), Some(3)] {
            let got = Enumerator::new(&f, 2)
                .with_workers(workers)
                .fold_indexed(
                    Vec::new,
                    |acc: &mut Vec<(u64, Vec<u32>)>, i, d| acc.push((i, d.to_vec())),
                    |mut a, b| {
                        a.extend(b);
                        a
                    },
                )
                .unwrap();
            assert_eq!(got.len(), seq.len());
            for (k, (i, d)) in got.iter().enumerate() {
                assert_eq!(*i, k as u64);
                assert_eq!(d, &seq[k]);
            }
        }
    }
}

//! Shared workloads for the benchmarks.

use symdet::spectrum::Session;
use symdet::symmat::{EnumMode, Enumerator};
use symdet::{FieldSpec, SymMatrix};

pub fn field(q: u64) -> FieldSpec {
    FieldSpec::new(q).expect("benchmark fields are odd primes")
}

/// Session with the tally of `S_{m-1}` already built, so that timing covers
/// only the formula layer.
pub fn warm_session(q: u64, m: usize) -> Session {
    let s = Session::new(field(q)).with_workers(Some(1));
    s.tally(m - 1).expect("tally fits the default budget");
    s
}

/// Every matrix of `S_m`, materialised.
pub fn all_matrices(field: &FieldSpec, m: usize) -> Vec<SymMatrix> {
    Enumerator::new(field, m)
        .iter(EnumMode::All)
        .expect("within budget")
        .collect()
}

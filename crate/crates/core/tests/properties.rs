use std::sync::OnceLock;

use proptest::prelude::*;
use symdet::codes::EvaluationPoints;
use symdet::quadform::classify;
use symdet::symmat::{canonical_diagonal, DEFAULT_BUDGET};
use symdet::{FieldSpec, Matrix, SymMatrix};

const PRIMES: [u64; 6] = [3, 5, 7, 11, 13, 101];

fn points() -> &'static (FieldSpec, EvaluationPoints) {
    static PTS: OnceLock<(FieldSpec, EvaluationPoints)> = OnceLock::new();
    PTS.get_or_init(|| {
        let f = FieldSpec::new(3).unwrap();
        let p = EvaluationPoints::new(&f, 3, DEFAULT_BUDGET).unwrap();
        (f, p)
    })
}

fn sym(field: &FieldSpec, m: usize, v: &[i64]) -> SymMatrix {
    let mut s = SymMatrix::zero(m);
    let mut it = v.iter();
    for i in 0..m {
        for j in i..m {
            s.set(i, j, field.elem(*it.next().unwrap()));
        }
    }
    s
}

fn dense(field: &FieldSpec, m: usize, v: &[i64]) -> Matrix {
    let mut p = Matrix::zero(m);
    for i in 0..m {
        for j in 0..m {
            p.set(i, j, field.elem(v[i * m + j]));
        }
    }
    p
}

proptest! {
    #[test]
    fn chi_is_multiplicative(qi in 0usize..PRIMES.len(), a in 1i64..1000, b in 1i64..1000) {
        let f = FieldSpec::new(PRIMES[qi]).unwrap();
        let (x, y) = (f.elem(a), f.elem(b));
        prop_assert_eq!(f.chi(f.mul(x, y)), f.chi(x) * f.chi(y));
    }

    #[test]
    fn field_inverse(qi in 0usize..PRIMES.len(), a in 1i64..1000) {
        let f = FieldSpec::new(PRIMES[qi]).unwrap();
        let x = f.elem(a);
        prop_assume!(!x.is_zero());
        prop_assert_eq!(f.mul(x, f.inv(x).unwrap()), f.elem(1));
    }

    #[test]
    fn classification_is_congruence_invariant(
        qi in 0usize..3,
        m in 1usize..=5,
        entries in prop::collection::vec(0i64..13, 15),
        p in prop::collection::vec(0i64..13, 25),
    ) {
        let f = FieldSpec::new(PRIMES[qi]).unwrap();
        let a = sym(&f, m, &entries);
        let p = dense(&f, m, &p);
        prop_assume!(p.is_invertible(&f));
        let b = a.congruent(&f, &p).unwrap();
        prop_assert_eq!(classify(&f, &a), classify(&f, &b));
        prop_assert_eq!(canonical_diagonal(&f, &a), canonical_diagonal(&f, &b));
    }

    #[test]
    fn weights_are_congruence_invariant(
        entries in prop::collection::vec(0i64..3, 6),
        p in prop::collection::vec(0i64..3, 9),
    ) {
        let (f, pts) = points();
        let a = sym(f, 3, &entries);
        let p = dense(f, 3, &p);
        prop_assume!(p.is_invertible(f));
        let b = a.congruent(f, &p).unwrap();
        prop_assert_eq!(pts.weights(f, &a), pts.weights(f, &b));
    }

    #[test]
    fn weights_depend_on_square_class_only(
        entries in prop::collection::vec(0i64..3, 6),
        c in 1i64..3,
    ) {
        // scaling one diagonal entry of the canonical form by c^2
        let (f, pts) = points();
        let a = sym(f, 3, &entries);
        let mut d = canonical_diagonal(f, &a);
        let r = classify(f, &a).rank;
        prop_assume!(r > 0);
        let c2 = f.mul(f.elem(c), f.elem(c));
        d.set(r - 1, r - 1, f.mul(d.get(r - 1, r - 1), c2));
        prop_assert_eq!(pts.weights(f, &a), pts.weights(f, &d));
    }

    #[test]
    fn affine_weight_is_q_minus_one_times_projective(
        entries in prop::collection::vec(0i64..3, 6),
    ) {
        let (f, pts) = points();
        let w = pts.weights(f, &sym(f, 3, &entries));
        for t in 0..=3 {
            prop_assert_eq!(w.affine[t], 2 * w.projective[t]);
        }
    }
}

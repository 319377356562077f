//! Closed forms checked against direct counts that share no code with them.

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use symdet::codes::{
    code_params, codeword_weight_bf, generator_matrix, restricted_weight_bf, row_rank,
    trace_pairing, CodeId,
};
use symdet::quadform::{
    classify, classify_by_zero_count, gamma, gamma_brute, lambda, lambda_brute,
};
use symdet::spectrum::Session;
use symdet::symmat::{census, EnumMode, Enumerator, DEFAULT_BUDGET};
use symdet::{FieldSpec, FormKind, SquareClass, SymMatrix, Variant};

fn random_sym(rng: &mut ChaCha8Rng, field: &FieldSpec, m: usize) -> SymMatrix {
    let mut f = SymMatrix::zero(m);
    for i in 0..m {
        for j in i..m {
            f.set(i, j, field.elem(rng.gen_range(0..field.order() as i64)));
        }
    }
    f
}

#[test]
fn rank_census_by_gaussian_elimination() {
    for (q, m) in [(3u64, 1usize), (3, 2), (3, 3), (5, 2), (5, 3), (7, 2)] {
        let field = FieldSpec::new(q).unwrap();
        let mut counts = vec![0u64; m + 1];
        for a in Enumerator::new(&field, m).iter(EnumMode::All).unwrap() {
            counts[a.to_dense().rank(&field)] += 1;
        }
        let c = census(q, m);
        for r in 0..=m {
            assert_eq!(BigInt::from(counts[r]), c.s[r], "q={q} m={m} r={r}");
        }
    }
}

#[test]
fn small_type_counts() {
    // 2x2 symmetric matrices of rank 2 over F_3 split 12 hyperbolic, 6 elliptic
    let c = census(3, 2);
    assert_eq!(c.v_plus[1], BigInt::from(12));
    assert_eq!(c.v_minus[1], BigInt::from(6));
    let field = FieldSpec::new(3).unwrap();
    let (mut hyp, mut ell) = (0, 0);
    for a in Enumerator::new(&field, 2).iter(EnumMode::All).unwrap() {
        match classify_by_zero_count(&field, &a) {
            FormKind::Hyperbolic => hyp += 1,
            FormKind::Elliptic => ell += 1,
            _ => {}
        }
    }
    assert_eq!((hyp, ell), (12, 6));
}

#[test]
fn zero_count_type_matches_discriminant_type() {
    for (q, m) in [(3u64, 3usize), (5, 3), (7, 2)] {
        let field = FieldSpec::new(q).unwrap();
        for a in Enumerator::new(&field, m).iter(EnumMode::All).unwrap() {
            assert_eq!(
                classify_by_zero_count(&field, &a),
                classify(&field, &a).kind
            );
        }
    }
}

#[test]
fn lambda_and_gamma_on_every_small_matrix() {
    for (q, m) in [(3u64, 3usize), (7, 2), (11, 2)] {
        let field = FieldSpec::new(q).unwrap();
        for b in Enumerator::new(&field, m).iter(EnumMode::All).unwrap() {
            assert_eq!(lambda(&field, &b), BigInt::from(lambda_brute(&field, &b)));
            for alpha in field.units() {
                assert_eq!(
                    gamma(&field, &b, alpha).unwrap(),
                    BigInt::from(gamma_brute(&field, &b, alpha).unwrap())
                );
            }
        }
    }
}

#[test]
fn gamma_rejects_zero_alpha() {
    let field = FieldSpec::new(3).unwrap();
    let b = SymMatrix::identity(2);
    assert!(gamma(&field, &b, field.elem(0)).is_err());
    assert!(gamma_brute(&field, &b, field.elem(0)).is_err());
}

#[test]
fn trace_pairing_matches_dense_product() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for q in [3u64, 5, 7] {
        let field = FieldSpec::new(q).unwrap();
        for _ in 0..200 {
            let m = rng.gen_range(1..=5);
            let f = random_sym(&mut rng, &field, m);
            let a = random_sym(&mut rng, &field, m);
            let prod = f.to_dense().mul(&field, &a.to_dense()).unwrap();
            let tr = (0..m).fold(field.elem(0), |s, i| field.add(s, prod.get(i, i)));
            assert_eq!(trace_pairing(&field, &f, &a).unwrap(), tr);
        }
    }
}

#[test]
fn codeword_weights_match_formula() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for (q, m) in [(3u64, 3usize), (5, 2), (5, 3)] {
        let field = FieldSpec::new(q).unwrap();
        let session = Session::new(field.clone());
        for _ in 0..20 {
            let f = random_sym(&mut rng, &field, m);
            let cls = classify(&field, &f);
            for t in 1..=m {
                let id = CodeId::new(q, m, t, Variant::Affine).unwrap();
                let w = codeword_weight_bf(&field, &f, &id, DEFAULT_BUDGET).unwrap();
                let expected = match cls.delta_class {
                    None => BigInt::from(0),
                    Some(c) => session.weight_theorem(cls.rank, c, t, m).unwrap(),
                };
                assert_eq!(BigInt::from(w), expected, "q={q} m={m} t={t} F={f:?}");
                let pid = CodeId::new(q, m, t, Variant::Projective).unwrap();
                let pw = codeword_weight_bf(&field, &f, &pid, DEFAULT_BUDGET).unwrap();
                assert_eq!(w, (q - 1) * pw);
            }
        }
    }
}

#[test]
fn restricted_weights_match_formula() {
    let session = Session::new(FieldSpec::new(3).unwrap());
    for m in 1..=4 {
        for k in 1..=m {
            for class in SquareClass::BOTH {
                for r in 0..=m {
                    assert_eq!(
                        BigInt::from(
                            restricted_weight_bf(session.field(), k, class, r, m, DEFAULT_BUDGET)
                                .unwrap()
                        ),
                        session.restricted_weight_formula(k, class, r, m).unwrap(),
                        "m={m} k={k} r={r}"
                    );
                }
            }
        }
    }
}

#[test]
fn generator_matrix_has_full_rank() {
    let field = FieldSpec::new(3).unwrap();
    for m in 1..=3 {
        for t in 1..=m {
            for variant in [Variant::Affine, Variant::Projective] {
                let id = CodeId::new(3, m, t, variant).unwrap();
                let p = code_params(&id);
                let g = generator_matrix(&field, &id, DEFAULT_BUDGET).unwrap();
                assert_eq!(g.len(), p.k);
                assert_eq!(BigInt::from(g[0].len()), p.n);
                assert_eq!(row_rank(&field, &g), p.k);
            }
        }
    }
}

#[test]
fn known_parameters() {
    let p = code_params(&CodeId::new(3, 3, 1, Variant::Projective).unwrap());
    assert_eq!((p.n, p.k), (BigInt::from(13), 6));
    let s = Session::new(FieldSpec::new(3).unwrap());
    assert_eq!(
        s.weight_theorem(3, SquareClass::Square, 2, 3).unwrap(),
        BigInt::from(180)
    );
}

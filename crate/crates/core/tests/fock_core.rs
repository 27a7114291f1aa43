mod common;

use common::{c, max_dev, trunc};
use nhfock::fock::{
    apply, build_ladder, commutator, embed_mode, exp_action, generator_norm, inner, matrix_exponential,
    normalize, vec_norm, FockOperator, FockState, Modes, OperatorJson, StateJson, Truncation,
};
use nhfock::phase_space::{canonical_frame, displacement_generator};
use nhfock::{Error, Operator};
use proptest::prelude::*;

fn fact(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

#[test]
fn ladder_entries() {
    let a = build_ladder::<f64>(3).unwrap();
    assert_eq!(a.get(0, 1), c(1.0, 0.0));
    assert!((a.get(1, 2).re - 1.41421356).abs() < 1e-8);
    let nonzero = a.entries().iter().filter(|v| v.norm() != 0.0).count();
    assert_eq!(nonzero, 2);
    assert!(matches!(build_ladder::<f64>(1), Err(Error::InvalidDimension(_))));
}

#[test]
fn ladder_lowers_one_to_zero() {
    let a = build_ladder::<f64>(2).unwrap();
    let one = FockState::basis(a.trunc().with_n_eff(2).unwrap(), Modes::One, 1, 0).unwrap();
    assert_eq!(apply(&a, &one).unwrap(), vec![c(1.0, 0.0), c(0.0, 0.0)]);
}

#[test]
fn defect_confined_to_top_level() {
    for n in [4, 7, 32] {
        let a = build_ladder::<f64>(n).unwrap();
        let k = commutator(&a, &a.adjoint()).unwrap();
        for i in 0..n {
            for j in 0..n {
                let want = match (i == j, i == n - 1) {
                    (false, _) => 0.0,
                    (true, false) => 1.0,
                    (true, true) => -((n - 1) as f64),
                };
                if i == j {
                    assert!((k.get(i, j) - c(want, 0.0)).norm() <= 4.0 * f64::EPSILON * n as f64);
                } else {
                    assert_eq!(k.get(i, j), c(0.0, 0.0));
                }
            }
        }
        let low = k.project_low(n - 1);
        assert!(low.low_block_dev_from_scalar(c(1.0, 0.0), n - 1) <= 4.0 * f64::EPSILON * n as f64);
    }
}

#[test]
fn embedding_of_distinct_modes_commutes() {
    let a = build_ladder::<f64>(6).unwrap();
    let a1 = embed_mode(&a, 1).unwrap();
    let a2dag = embed_mode(&a.adjoint(), 2).unwrap();
    let k = commutator(&a1, &a2dag).unwrap();
    assert_eq!(k.max_abs_entry(), 0.0);

    let id = FockOperator::<f64>::identity(*a.trunc(), Modes::One);
    let id2 = embed_mode(&id, 1).unwrap();
    assert_eq!(id2, FockOperator::identity(*a.trunc(), Modes::Two));

    let a2 = embed_mode(&a, 2).unwrap();
    let t = *a.trunc();
    let v = FockState::basis(t, Modes::Two, 1, 1).unwrap();
    let out = apply(&(&a1 * &a2), &v).unwrap();
    assert_eq!(out, FockState::vacuum(t, Modes::Two).into_amplitudes());
    assert!(embed_mode(&a, 3).is_err());
    assert!(embed_mode(&a1, 1).is_err());
}

#[test]
fn canonical_commutator_on_low_block() {
    let t = trunc(12, 10);
    let can = canonical_frame::<f64>(t, 1.0).unwrap();
    let k = commutator(&can.x1, &can.p1).unwrap();
    assert!(k.project_low(10).low_block_dev_from_scalar(c(0.0, 1.0), 10) <= 1e-12);
    assert!(commutator(&can.x1, &can.x1).unwrap().max_abs_entry() == 0.0);
    assert!(commutator(&can.x1, &can.p1.with_trunc(trunc(12, 6)).unwrap()).is_ok());
    let other = canonical_frame::<f64>(trunc(8, 4), 1.0).unwrap();
    assert!(matches!(commutator(&can.x1, &other.x1), Err(Error::InvalidDimension(_))));
}

#[test]
fn exponential_closed_forms() {
    let t = trunc(2, 2);
    let zero = FockOperator::<f64>::zeros(t, Modes::One);
    assert_eq!(matrix_exponential(&zero).unwrap(), FockOperator::identity(t, Modes::One));

    let th = 0.83f64;
    let g = FockOperator::from_entries(t, Modes::One, vec![c(0.0, 0.0), c(th, 0.0), c(-th, 0.0), c(0.0, 0.0)])
        .unwrap();
    let r = matrix_exponential(&g).unwrap();
    let want = [th.cos(), th.sin(), -th.sin(), th.cos()];
    for (k, w) in want.iter().enumerate() {
        assert!((r.get(k / 2, k % 2) - c(*w, 0.0)).norm() < 1e-15);
    }
}

#[test]
fn displaced_vacuum_amplitudes() {
    let a = build_ladder::<f64>(32).unwrap();
    let z = c(0.5, 0.0);
    let u = matrix_exponential(&displacement_generator(z, &a)).unwrap();
    let col: Vec<_> = (0..32).map(|n| u.get(n, 0)).collect();
    let pre = (-0.5 * z.norm_sqr()).exp();
    let want: Vec<_> = (0..32).map(|n| z.powi(n as i32) * (pre / fact(n).sqrt())).collect();
    assert!(max_dev(&col, &want) <= 1e-10);
}

#[test]
fn generator_cap() {
    let a = build_ladder::<f64>(32).unwrap();
    let g = displacement_generator(c(8.0, 0.0), &a);
    assert!(generator_norm(&g) > 50.0);
    assert!(matches!(matrix_exponential(&g), Err(Error::GeneratorTooLarge { .. })));
}

#[test]
fn projection_examples() {
    let t = trunc(5, 3);
    let id = FockOperator::<f64>::identity(t, Modes::Two);
    let p = id.project_low(3);
    for i in 0..25 {
        let (n1, n2) = (i / 5, i % 5);
        let want = if n1 < 3 && n2 < 3 { 1.0 } else { 0.0 };
        assert_eq!(p.get(i, i), c(want, 0.0));
    }
    assert_eq!(FockOperator::<f64>::zeros(t, Modes::Two).project_low(3).max_abs_entry(), 0.0);
}

#[test]
fn state_algebra() {
    let t = Truncation::default();
    let vac = FockState::<f64>::vacuum(t, Modes::Two);
    assert_eq!(vac.inner(&vac).unwrap(), c(1.0, 0.0));
    let a = build_ladder::<f64>(32).unwrap().with_trunc(t).unwrap();
    let a1dag = embed_mode(&a.adjoint(), 1).unwrap();
    assert_eq!(apply(&a1dag, &vac).unwrap(), FockState::basis(t, Modes::Two, 1, 0).unwrap().into_amplitudes());

    let v = exp_action(&displacement_generator(c(0.3, 0.0), &a), &FockState::vacuum(t, Modes::One).into_amplitudes())
        .unwrap();
    assert!((inner(&v, &v).unwrap() - c(1.0, 0.0)).norm() <= 1e-12);

    let phi = vec![c(0.0, 1.0), c(0.0, 0.0)];
    let psi = vec![c(1.0, 0.0), c(0.0, 0.0)];
    assert_eq!(inner(&phi, &psi).unwrap(), c(0.0, -1.0));
    assert!(matches!(normalize(vec![c(0.0, 0.0); 3]), Err(Error::ZeroState)));
    assert!((vec_norm(&normalize(vec![c(3.0, 4.0), c(0.0, 0.0)]).unwrap()) - 1.0).abs() < 1e-15);
}

#[test]
fn tail_check_rejects_high_levels() {
    let t = trunc(8, 4);
    assert!(matches!(
        FockState::<f64>::basis(t, Modes::Two, 5, 0),
        Err(Error::TruncationOverflow { .. })
    ));
    assert!(matches!(
        FockState::<f64>::basis(t, Modes::Two, 0, 4),
        Err(Error::TruncationOverflow { .. })
    ));
    assert!(FockState::<f64>::basis(t, Modes::Two, 3, 3).is_ok());
    assert!(Truncation::new(8, 9, 1e-8).is_err());
    assert!(Truncation::new(8, 4, 1.0).is_err());
}

#[test]
fn json_roundtrips() {
    let a = build_ladder::<f64>(4).unwrap();
    let j: OperatorJson = serde_json::from_str(&serde_json::to_string(&a.to_json()).unwrap()).unwrap();
    assert_eq!(FockOperator::from_json(&j).unwrap(), a);
    let s = FockState::<f64>::basis(*a.trunc(), Modes::One, 1, 0).unwrap();
    let j: StateJson = serde_json::from_str(&serde_json::to_string(&s.to_json()).unwrap()).unwrap();
    assert_eq!(j.indexing, "mode1-major");
    assert_eq!(FockState::from_json(&j).unwrap(), s);
}

#[test]
fn single_precision_ladder() {
    let a = build_ladder::<f32>(8).unwrap();
    let k = commutator(&a, &a.adjoint()).unwrap().project_low(7);
    assert!(k.low_block_dev_from_scalar(nhfock::C::new(1.0f32, 0.0), 7) < 1e-5);
}

fn random_matrix(n: usize) -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), n * n)
}

fn op_from(t: Truncation, modes: Modes, raw: &[(f64, f64)]) -> Operator {
    FockOperator::from_entries(t, modes, raw.iter().map(|&(a, b)| c(a, b)).collect()).unwrap()
}

fn anti_hermitian(t: Truncation, modes: Modes, raw: &[(f64, f64)], norm: f64) -> Operator {
    let m = op_from(t, modes, raw);
    let g = (&m - &m.adjoint()).scale_real(0.5);
    let gn = generator_norm(&g);
    if gn == 0.0 {
        g
    } else {
        g.scale_real(norm / gn)
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn adjoint_is_an_involution(raw in random_matrix(9)) {
        let a = op_from(trunc(3, 3), Modes::Two, &random_matrix_pad(&raw, 81));
        prop_assert_eq!(a.adjoint().adjoint(), a);
    }

    #[test]
    fn exponential_of_anti_hermitian_is_unitary(raw in random_matrix(8), norm in 0.0f64..10.0) {
        let g = anti_hermitian(trunc(8, 8), Modes::One, &raw, norm);
        let w = matrix_exponential(&g).unwrap();
        prop_assert!(common::unitarity_dev(&w) <= 1e-10);
    }

    #[test]
    fn exponential_splits_over_commuting_pieces(x in random_matrix(4), y in random_matrix(4), s in -1.5f64..1.5) {
        let t = trunc(4, 4);
        let gx = embed_mode(&anti_hermitian(t, Modes::One, &x, 3.0), 1).unwrap();
        let gy = embed_mode(&anti_hermitian(t, Modes::One, &y, 3.0), 2).unwrap();
        let lhs = matrix_exponential(&(&gx + &gy)).unwrap();
        let rhs = &matrix_exponential(&gx).unwrap() * &matrix_exponential(&gy).unwrap();
        prop_assert!(lhs.max_abs_diff(&rhs).unwrap() <= 1e-10);

        // commuting multiples of one generator, general path
        let h = anti_hermitian(t, Modes::One, &x, 4.0);
        let lhs = matrix_exponential(&h).unwrap();
        let rhs = &matrix_exponential(&h.scale_real(s)).unwrap() * &matrix_exponential(&h.scale_real(1.0 - s)).unwrap();
        prop_assert!(lhs.max_abs_diff(&rhs).unwrap() <= 1e-10);
    }

    #[test]
    fn projection_is_idempotent(raw in random_matrix(5), k in 1usize..=5) {
        let a = op_from(trunc(5, 5), Modes::Two, &random_matrix_pad(&raw, 625));
        let once = a.project_low(k);
        prop_assert_eq!(once.project_low(k), once);
    }

    #[test]
    fn exp_action_matches_matrix(raw in random_matrix(6), norm in 0.0f64..12.0, v in random_matrix(6)) {
        let t = trunc(6, 6);
        let g = anti_hermitian(t, Modes::One, &raw, norm);
        let w = matrix_exponential(&g).unwrap();
        let x: Vec<_> = v.iter().take(6).map(|&(a, b)| c(a, b)).collect();
        let got = exp_action(&g, &x).unwrap();
        prop_assert!(max_dev(&got, &w.apply_to(&x).unwrap()) <= 1e-11);
    }
}

/// Tile a short random sample to `len` entries with index-dependent phases.
fn random_matrix_pad(raw: &[(f64, f64)], len: usize) -> Vec<(f64, f64)> {
    (0..len)
        .map(|k| {
            let (a, b) = raw[k % raw.len()];
            let s = ((k * 7919) % 13) as f64 / 13.0 - 0.5;
            (a + s, b - s)
        })
        .collect()
}

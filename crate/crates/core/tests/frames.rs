mod common;

use common::{c, conj_dev, flat_frame, params, trunc, unitarity_dev};
use nhfock::deformation::{Branch, DeformationParams, Kind};
use nhfock::fock::{build_ladder, commutator, FockOperator, Modes};
use nhfock::phase_space::{
    bogoliubov_coefficients, displacement_u, mix_s, s_generator, squeeze_v, t_squeeze_magnitude, resolved_levels,
    two_mode_squeeze_t, Caps, FrameOptions, EDGE_TOL,
};
use nhfock::{Error, Frame, Operator};

/// Deformation values computed directly from the hyperbolic and
/// trigonometric closed forms.
fn f_direct(kind: Kind, branch: Branch, kappa: f64, tau: f64, t: f64) -> f64 {
    let x = t / tau;
    let (ch, sh) = match branch {
        Branch::NhPlus => (x.cosh(), x.sinh()),
        Branch::NhMinus => (x.cos(), x.sin()),
        Branch::Flat => {
            return match kind {
                Kind::K1 => kappa,
                Kind::K2 => kappa * t * t,
                Kind::K3 => kappa * t.powi(4),
            }
        }
    };
    match kind {
        Kind::K1 => kappa * ch * ch,
        Kind::K2 => kappa * tau * tau * sh * sh,
        Kind::K3 => 4.0 * kappa * tau.powi(4) * (ch - 1.0).powi(2),
    }
}

#[test]
fn vacuum_position_dispersion() {
    let fr = flat_frame(1.0, trunc(8, 4));
    let x1sq = &fr.canonical.x1 * &fr.canonical.x1;
    assert!((x1sq.get(0, 0) - c(0.5, 0.0)).norm() < 1e-15);
    assert_eq!(commutator(&fr.canonical.x1, &fr.canonical.x2).unwrap().max_abs_entry(), 0.0);
}

#[test]
fn deformed_algebra_across_kinds_and_branches() {
    let tr = nhfock::Truncation::default();
    let n = tr.n_eff;
    let ts: Vec<f64> = (0..10).map(|k| 0.15 + 0.13 * k as f64).collect();
    for kind in Kind::ALL {
        for branch in Branch::ALL {
            let p = DeformationParams::new(kind, branch, 0.8, 1.3, 1.0).unwrap();
            for &t in &ts {
                let fr = Frame::build(&p, tr, t).unwrap();
                let f = f_direct(kind, branch, 0.8, 1.3, t);
                assert!((fr.f_t - f).abs() <= 1e-12 * f.max(1.0));
                let xx = commutator(&fr.x1bar, &fr.x2bar).unwrap();
                assert!(xx.low_block_dev_from_scalar(c(0.0, f), n) <= 1e-9);
                let xp = commutator(&fr.x1bar, &fr.p1bar).unwrap();
                assert!(xp.low_block_dev_from_scalar(c(0.0, 1.0), n) <= 1e-9);
                let xp12 = commutator(&fr.x1bar, &fr.p2bar).unwrap();
                assert!(xp12.low_block_dev_from_scalar(c(0.0, 0.0), n) <= 1e-9);
                let pp = commutator(&fr.p1bar, &fr.p2bar).unwrap();
                assert!(pp.low_block_dev_from_scalar(c(0.0, 0.0), n) <= 1e-12);
                assert_eq!(fr.x1bar.hermitian_deviation(), 0.0);
                assert_eq!(fr.x2bar.hermitian_deviation(), 0.0);
            }
        }
    }
}

#[test]
fn commutative_limit_restores_canonical_positions() {
    let p = params(Kind::K2, Branch::Flat, 1.0);
    let fr = Frame::build(&p, trunc(6, 3), 0.0).unwrap();
    assert_eq!(fr.x1bar, fr.canonical.x1);
    assert_eq!(fr.x2bar, fr.canonical.x2);
    assert_eq!(fr.d, fr.a1);
}

#[test]
fn ladders_and_circular_frame() {
    let tr = trunc(16, 10);
    let fr = flat_frame(1.7, tr);
    assert!(fr.a1.max_abs_diff(&fr.canonical.a1).unwrap() <= 1e-12);
    assert!(fr.a2.max_abs_diff(&fr.canonical.a2).unwrap() <= 1e-12);
    let one = c(1.0, 0.0);
    let k = commutator(&fr.a1, &fr.a1dag).unwrap();
    assert!(k.low_block_dev_from_scalar(one, 10) <= 1e-12);
    assert!(commutator(&fr.a1, &fr.a2).unwrap().max_abs_entry() <= 1e-12);

    let sum = &fr.aplus + &fr.aminus;
    assert!(sum.max_abs_diff(&fr.a1.scale_real(2f64.sqrt())).unwrap() <= 1e-12);
    assert!(commutator(&fr.aminus, &fr.aminus_dag).unwrap().low_block_dev_from_scalar(one, 10) <= 1e-12);
    assert!(commutator(&fr.aplus, &fr.aplus_dag).unwrap().low_block_dev_from_scalar(one, 10) <= 1e-12);
    assert!(commutator(&fr.aplus, &fr.aminus_dag).unwrap().low_block_dev_from_scalar(c(0.0, 0.0), 10) <= 1e-12);
    let n_pm = &(&fr.aplus_dag * &fr.aplus) + &(&fr.aminus_dag * &fr.aminus);
    let n_12 = &(&fr.a1dag * &fr.a1) + &(&fr.a2dag * &fr.a2);
    assert!(n_pm.low_block_diff(&n_12, 10).unwrap() <= 1e-12);
}

#[test]
fn bogoliubov_and_de_frames() {
    let tr = nhfock::Truncation::default();
    let one = c(1.0, 0.0);
    let zero = c(0.0, 0.0);
    for kappa in [0.4, 1.0, 2.0, 3.1] {
        let fr = flat_frame(kappa, tr);
        let (ch, sh) = bogoliubov_coefficients(kappa, 1.0);
        assert!((ch * ch - sh * sh - 1.0).abs() < 1e-14);
        let r = 0.5 * (2.0 / kappa).ln();
        assert!((ch - r.cosh()).abs() < 1e-14 && (sh - r.sinh()).abs() < 1e-14);

        let bg = fr.bogoliubov().unwrap();
        assert!(bg.b.max_abs_diff(&fr.b_from_positions().unwrap()).unwrap() <= 1e-10);
        assert!(bg.bdag.max_abs_diff(&bg.b.adjoint()).unwrap() == 0.0);
        assert!(bg.cdag.max_abs_diff(&bg.c.adjoint()).unwrap() == 0.0);
        let n = 12;
        assert!(commutator(&bg.b, &bg.bdag).unwrap().low_block_dev_from_scalar(one, n) <= 1e-9);
        assert!(commutator(&bg.c, &bg.cdag).unwrap().low_block_dev_from_scalar(one, n) <= 1e-9);
        assert!(commutator(&bg.b, &bg.c).unwrap().low_block_dev_from_scalar(zero, n) <= 1e-9);
        assert!(commutator(&bg.b, &bg.cdag).unwrap().low_block_dev_from_scalar(zero, n) <= 1e-9);

        assert!(fr.d.max_abs_diff(&fr.d_from_positions()).unwrap() <= 1e-12);
        assert!(fr.ddag.max_abs_diff(&fr.d.adjoint()).unwrap() == 0.0);
        assert!(fr.edag.max_abs_diff(&fr.e.adjoint()).unwrap() == 0.0);
        assert!(commutator(&fr.d, &fr.ddag).unwrap().low_block_dev_from_scalar(one, n) <= 1e-9);
        assert!(commutator(&fr.e, &fr.edag).unwrap().low_block_dev_from_scalar(one, n) <= 1e-9);
    }
    let fr = flat_frame(2.0, tr);
    assert_eq!(fr.bogoliubov().unwrap().b, fr.aminus);
}

#[test]
fn bogoliubov_absent_below_guard() {
    let p = params(Kind::K1, Branch::NhMinus, 1.0);
    let fr = Frame::build(&p, trunc(6, 3), std::f64::consts::FRAC_PI_2).unwrap();
    assert!(fr.f_t < p.f_min());
    assert!(matches!(fr.bogoliubov(), Err(Error::DeformationVanishes { .. })));
    assert!(matches!(two_mode_squeeze_t(&fr), Err(Error::DeformationVanishes { .. })));
    assert!(!fr.operators().iter().any(|(k, _)| *k == "b"));
}

#[test]
fn displacement_conjugation() {
    let a = build_ladder::<f64>(32).unwrap();
    let caps = Caps::for_levels(32);
    let id = FockOperator::identity(*a.trunc(), Modes::One);
    assert!(displacement_u(c(0.0, 0.0), &a, &caps).unwrap().max_abs_diff(&id).unwrap() == 0.0);
    for z in [c(0.7, 0.0), c(-0.4, 0.9), c(0.0, -1.2)] {
        let u = displacement_u(z, &a, &caps).unwrap();
        let n = resolved_levels(&u, 16, EDGE_TOL);
        assert!(n >= 2);
        assert!(conj_dev(&u.adjoint(), &a, &u, &(&a + &id.scale(z)), n) <= 1e-9);
        let back = displacement_u(-z, &a, &caps).unwrap();
        assert!((&u * &back).max_abs_diff(&id).unwrap() <= 1e-10);
        assert!(unitarity_dev(&u) <= 1e-10);
    }
    assert!(matches!(
        displacement_u(c(3.5, 0.0), &a, &caps),
        Err(Error::DisplacementTooLarge { .. })
    ));
}

/// `a_ξ = (x̂/sqrt ξ + i sqrt ξ p̂)/sqrt(2ħ)` from the quadratures.
fn a_xi(a: &Operator, xi: f64) -> Operator {
    let s = 0.5f64.sqrt();
    let x = (a + &a.adjoint()).scale_real(s);
    let p = (a - &a.adjoint()).scale(c(0.0, -s));
    x.lin_comb(c(1.0 / xi.sqrt(), 0.0), &p, c(0.0, xi.sqrt()))
        .unwrap()
        .scale_real(s)
}

#[test]
fn squeeze_conjugation() {
    let a = build_ladder::<f64>(32).unwrap();
    let caps = Caps::for_levels(32);
    let id = FockOperator::identity(*a.trunc(), Modes::One);
    assert_eq!(squeeze_v(1.0, &a, &caps).unwrap(), id);
    for xi in [0.5, 2.0, 1.5] {
        let v = squeeze_v(xi, &a, &caps).unwrap();
        let n = resolved_levels(&v, 16, EDGE_TOL);
        assert!(n >= 4);
        let target = a_xi(&a, xi);
        assert!(conj_dev(&v, &a, &v.adjoint(), &target, n) <= 1e-9);
        let k = commutator(&target, &target.adjoint()).unwrap();
        assert!(k.low_block_dev_from_scalar(c(1.0, 0.0), 16) <= 1e-12);
        assert!(unitarity_dev(&v) <= 1e-10);
    }
    // inside the caps but beyond what 32 levels resolve
    assert_eq!(resolved_levels(&squeeze_v(4.0, &a, &caps).unwrap(), 16, EDGE_TOL), 1);
    assert!(matches!(squeeze_v(5.0, &a, &caps), Err(Error::SqueezeTooLarge { .. })));
    assert!(matches!(squeeze_v(0.2, &a, &caps), Err(Error::SqueezeTooLarge { .. })));
}

#[test]
fn two_mode_squeeze_conjugation() {
    let tr = nhfock::Truncation::default();
    let fr = flat_frame(2.0, tr);
    assert_eq!(
        two_mode_squeeze_t(&fr).unwrap(),
        FockOperator::identity(tr, Modes::Two)
    );
    for kappa in [1.0, 1.5, 4.0] {
        let fr = flat_frame(kappa, tr);
        let t = two_mode_squeeze_t(&fr).unwrap();
        let td = t.adjoint();
        assert!(t_squeeze_magnitude(&fr).unwrap().abs() <= fr.caps.r_cap);
        let n = resolved_levels(&t, 16, EDGE_TOL);
        assert!(n >= 4);
        let bg = fr.bogoliubov().unwrap();
        assert!(conj_dev(&t, &fr.aminus, &td, &bg.b, n) <= 1e-8);
        assert!(conj_dev(&t, &fr.aplus, &td, &bg.c, n) <= 1e-8);
        assert!(conj_dev(&t, &fr.aminus_dag, &td, &bg.bdag, n) <= 1e-8);
        assert!(conj_dev(&t, &fr.aplus_dag, &td, &bg.cdag, n) <= 1e-8);
        assert!(unitarity_dev(&t) <= 1e-10);
    }
    let strong = two_mode_squeeze_t(&flat_frame(0.5, tr)).unwrap();
    assert_eq!(resolved_levels(&strong, 16, EDGE_TOL), 1);
    let too_small = flat_frame(0.05, tr);
    assert!(matches!(two_mode_squeeze_t(&too_small), Err(Error::SqueezeTooLarge { .. })));
}

#[test]
fn mixing_conjugation() {
    let tr = trunc(20, 10);
    let flat = Frame::with_f_value(&params(Kind::K1, Branch::Flat, 1.0), tr, 0.0).unwrap();
    assert_eq!(mix_s(&flat).unwrap(), FockOperator::identity(tr, Modes::Two));
    for f in [1.0, 0.6] {
        let fr = Frame::with_f_value(&params(Kind::K1, Branch::Flat, 1.0), tr, f).unwrap();
        let g = s_generator(&fr);
        assert!((&g + &g.adjoint()).max_abs_entry() <= 1e-12);
        let s = mix_s(&fr).unwrap();
        let sd = s.adjoint();
        let n = resolved_levels(&s, 10, EDGE_TOL);
        assert!(n >= 2);
        assert!(conj_dev(&s, &fr.a1, &sd, &fr.d, n) <= 1e-8);
        assert!(conj_dev(&s, &fr.a2, &sd, &fr.e, n) <= 1e-8);
        assert!(unitarity_dev(&s) <= 1e-10);
    }
}

#[test]
fn flipped_epsilon_negates_the_commutator() {
    let p = params(Kind::K1, Branch::Flat, 1.0);
    let opts = FrameOptions {
        epsilon12: -1.0,
        ..FrameOptions::default()
    };
    let fr = Frame::build_with(&p, trunc(12, 8), 0.0, &opts).unwrap();
    let xx = commutator(&fr.x1bar, &fr.x2bar).unwrap();
    assert!(xx.low_block_dev_from_scalar(c(0.0, -1.0), 8) <= 1e-12);
}

#[test]
fn frame_json_lists_every_operator() {
    let fr = flat_frame(1.0, trunc(4, 2));
    let j = fr.to_json();
    assert_eq!(j.operators.len(), 20);
    assert_eq!(j.operators["x1bar"].dim, 16);
}

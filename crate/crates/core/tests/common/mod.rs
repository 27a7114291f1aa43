#![allow(dead_code)]

use nhfock::deformation::{Branch, DeformationParams, Kind};
use nhfock::{Frame, Operator, Truncation, C};

pub fn params(kind: Kind, branch: Branch, kappa: f64) -> DeformationParams {
    DeformationParams::new(kind, branch, kappa, 1.0, 1.0).unwrap()
}

pub fn flat_frame(kappa: f64, trunc: Truncation) -> Frame {
    Frame::build(&params(Kind::K1, Branch::Flat, kappa), trunc, 0.0).unwrap()
}

pub fn trunc(n_levels: usize, n_eff: usize) -> Truncation {
    Truncation::new(n_levels, n_eff, 1e-8).unwrap()
}

pub fn max_dev(a: &[C<f64>], b: &[C<f64>]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Low block of `l m r` against the low block of `target`.
pub fn conj_dev(l: &Operator, m: &Operator, r: &Operator, target: &Operator, n: usize) -> f64 {
    let lhs = nhfock::fock::sandwich_low_block(l, m, r, n).unwrap();
    max_dev(&lhs, &target.low_block(n))
}

pub fn unitarity_dev(w: &Operator) -> f64 {
    let id = Operator::identity(*w.trunc(), w.modes());
    (w * &w.adjoint()).max_abs_diff(&id).unwrap()
}

pub fn c(re: f64, im: f64) -> C<f64> {
    C::new(re, im)
}

//! Expectation values, dispersions and the generalized Heisenberg bound
//! `Δ_A Δ_B ≥ ½ |⟨C⟩|` with `i C = [A, B]`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{inner, vec_norm, FockOperator, FockState};
use crate::phase_space::PhaseFrame;
use crate::scalar::{Real, C};

/// Largest `|A − A†|` entry accepted as Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-10;
/// Relative gap `|product − bound| / bound` below which a pair counts as
/// saturated.
pub const SATURATION_REL_TOL: f64 = 1e-6;
/// Tolerance on the balance identity `Δ_A² + ξ² Δ_B² = ξ ⟨C⟩`.
pub const BALANCE_TOL: f64 = 1e-7;

fn check_dims<T: Real>(a: &FockOperator<T>, psi: &FockState<T>) -> Result<()> {
    if a.dim() != psi.dim() {
        return Err(Error::InvalidDimension(format!(
            "operator dimension {} does not match state dimension {}",
            a.dim(),
            psi.dim()
        )));
    }
    Ok(())
}

fn check_hermitian<T: Real>(a: &FockOperator<T>) -> Result<()> {
    let deviation = a.hermitian_deviation();
    if deviation > HERMITIAN_TOL {
        return Err(Error::NonHermitianOperator { deviation });
    }
    Ok(())
}

/// `⟨ψ|A|ψ⟩`.
pub fn expectation<T: Real>(a: &FockOperator<T>, psi: &FockState<T>) -> Result<C<T>> {
    check_dims(a, psi)?;
    inner(psi.amplitudes(), &a.apply_to(psi.amplitudes())?)
}

/// `(A − ⟨A⟩) ψ` and the real mean `⟨A⟩`.
fn centered<T: Real>(a: &FockOperator<T>, psi: &FockState<T>) -> Result<(Vec<C<T>>, T)> {
    let mut v = a.apply_to(psi.amplitudes())?;
    let mean = inner(psi.amplitudes(), &v)?.re;
    for (x, y) in v.iter_mut().zip(psi.amplitudes()) {
        *x -= *y * mean;
    }
    Ok((v, mean))
}

/// `Δ = sqrt(⟨A²⟩ − ⟨A⟩²)` for Hermitian `A`.
pub fn dispersion<T: Real>(a: &FockOperator<T>, psi: &FockState<T>) -> Result<f64> {
    check_dims(a, psi)?;
    check_hermitian(a)?;
    let (v, _) = centered(a, psi)?;
    // ‖(A − ⟨A⟩)ψ‖² equals ⟨A²⟩ − ⟨A⟩² for Hermitian A
    let var = vec_norm(&v).powi(2);
    Ok(var.max(0.0).sqrt())
}

/// Signed `⟨C⟩` with `i C = [A, B]`.
pub fn commutator_mean<T: Real>(a: &FockOperator<T>, b: &FockOperator<T>, psi: &FockState<T>) -> Result<f64> {
    check_dims(a, psi)?;
    check_dims(b, psi)?;
    check_hermitian(a)?;
    check_hermitian(b)?;
    let av = a.apply_to(psi.amplitudes())?;
    let bv = b.apply_to(psi.amplitudes())?;
    // ⟨[A, B]⟩ = ⟨Aψ|Bψ⟩ − ⟨Bψ|Aψ⟩ = 2i Im⟨Aψ|Bψ⟩
    Ok(2.0 * inner(&av, &bv)?.im.as_f64())
}

/// `½ |⟨C⟩|`.
pub fn heisenberg_bound<T: Real>(a: &FockOperator<T>, b: &FockOperator<T>, psi: &FockState<T>) -> Result<f64> {
    Ok(0.5 * commutator_mean(a, b, psi)?.abs())
}

/// Outcome of the first-order saturation test.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConditionCheck {
    /// `‖(A − ⟨A⟩)ψ + iξ (B − ⟨B⟩)ψ‖`.
    pub residual: f64,
    /// `|Δ_A² + ξ² Δ_B² − ξ ⟨C⟩|`.
    pub balance_defect: f64,
}

impl ConditionCheck {
    /// Residual within `tol` and balance identity within [`BALANCE_TOL`].
    pub fn holds(&self, tol: f64) -> bool {
        self.residual <= tol && self.balance_defect <= BALANCE_TOL
    }
}

pub fn saturation_condition_residual<T: Real>(
    a: &FockOperator<T>,
    b: &FockOperator<T>,
    xi: f64,
    psi: &FockState<T>,
) -> Result<ConditionCheck> {
    if !(xi > 0.0 && xi.is_finite()) {
        return Err(Error::InvalidParameter(format!("xi = {xi} must be positive")));
    }
    check_dims(a, psi)?;
    check_dims(b, psi)?;
    check_hermitian(a)?;
    check_hermitian(b)?;
    let (va, _) = centered(a, psi)?;
    let (vb, _) = centered(b, psi)?;
    let ixi = C::new(T::zero(), T::of(xi));
    let sum: Vec<C<T>> = va.iter().zip(&vb).map(|(x, y)| *x + ixi * *y).collect();
    let var_a = vec_norm(&va).powi(2);
    let var_b = vec_norm(&vb).powi(2);
    let c_mean = 2.0 * inner(&va, &vb)?.im.as_f64();
    Ok(ConditionCheck {
        residual: vec_norm(&sum),
        balance_defect: (var_a + xi * xi * var_b - xi * c_mean).abs(),
    })
}

/// The three deformed relations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Pair {
    #[serde(rename = "x1x2")]
    X1X2,
    #[serde(rename = "x1p1")]
    X1P1,
    #[serde(rename = "x2p2")]
    X2P2,
}

impl Pair {
    pub const ALL: [Pair; 3] = [Pair::X1X2, Pair::X1P1, Pair::X2P2];

    pub fn id(self) -> &'static str {
        match self {
            Pair::X1X2 => "x1x2",
            Pair::X1P1 => "x1p1",
            Pair::X2P2 => "x2p2",
        }
    }

    pub fn parse(s: &str) -> Option<Pair> {
        Pair::ALL.into_iter().find(|p| p.id() == s)
    }

    pub fn operators<T: Real>(self, frame: &PhaseFrame<T>) -> (&FockOperator<T>, &FockOperator<T>) {
        match self {
            Pair::X1X2 => (&frame.x1bar, &frame.x2bar),
            Pair::X1P1 => (&frame.x1bar, &frame.p1bar),
            Pair::X2P2 => (&frame.x2bar, &frame.p2bar),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairRecord {
    pub pair: Pair,
    pub delta_a: f64,
    pub delta_b: f64,
    pub product: f64,
    pub bound: f64,
    /// `product − bound`.
    pub residual: f64,
    /// `2 Δ_A² / ⟨C⟩`.
    pub xi_estimate: f64,
    pub saturated: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SaturationReport {
    pub t: f64,
    pub f_t: f64,
    pub pairs: Vec<PairRecord>,
}

impl SaturationReport {
    pub const CSV_HEADER: [&'static str; 9] = [
        "t",
        "f",
        "pair",
        "delta_a",
        "delta_b",
        "product",
        "bound",
        "residual",
        "xi_estimate",
    ];

    pub fn record(&self, pair: Pair) -> Option<&PairRecord> {
        self.pairs.iter().find(|r| r.pair == pair)
    }
}

pub fn pair_record<T: Real>(pair: Pair, psi: &FockState<T>, frame: &PhaseFrame<T>) -> Result<PairRecord> {
    let (a, b) = pair.operators(frame);
    let delta_a = dispersion(a, psi)?;
    let delta_b = dispersion(b, psi)?;
    let c_mean = commutator_mean(a, b, psi)?;
    let product = delta_a * delta_b;
    let bound = 0.5 * c_mean.abs();
    let residual = product - bound;
    Ok(PairRecord {
        pair,
        delta_a,
        delta_b,
        product,
        bound,
        residual,
        xi_estimate: 2.0 * delta_a * delta_a / c_mean,
        saturated: residual.abs() <= SATURATION_REL_TOL * bound,
    })
}

pub fn saturation_report<T: Real>(psi: &FockState<T>, frame: &PhaseFrame<T>) -> Result<SaturationReport> {
    let pairs = Pair::ALL
        .iter()
        .map(|&p| pair_record(p, psi, frame))
        .collect::<Result<Vec<_>>>()?;
    Ok(SaturationReport {
        t: frame.t,
        f_t: frame.f_t,
        pairs,
    })
}

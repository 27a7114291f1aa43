//! State families: number bases, coherent and squeezed states, the
//! `b`-sector vacuum and the three families saturating the deformed
//! uncertainty relations.
//!
//! Exponentials are applied to vectors with [`exp_action`]; no state
//! constructor forms a dense unitary. Prefactors such as `e^{-|z|²/2}` are
//! replaced by a final numerical normalization.

use num_complex::Complex64;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::deformation::DeformationParams;
use crate::error::{Error, Result};
use crate::fock::{exp_action, FockOperator, FockState, Modes, Truncation};
use crate::phase_space::{
    check_xi, displacement_generator, s_generator, squeeze_generator, t_generator, Caps, PhaseFrame,
};
use crate::scalar::{re, Real, C};

/// Parameters of a saturating state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateRequest {
    pub z: Complex64,
    pub xi: f64,
    /// `n₊` for the position family, `n₂` for the `(x̄₁, p̄₁)` family, `n₁`
    /// for the `(x̄₂, p̄₂)` family.
    pub spectator: usize,
    pub t: f64,
    pub params: DeformationParams,
}

impl Default for StateRequest {
    fn default() -> Self {
        StateRequest {
            z: Complex64::new(0.0, 0.0),
            xi: 1.0,
            spectator: 0,
            t: 0.0,
            params: DeformationParams::default(),
        }
    }
}

/// The three saturating families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    /// Saturates `Δx̄₁ Δx̄₂ ≥ f/2`.
    Xx,
    /// Saturates `Δx̄₁ Δp̄₁ ≥ ħ/2`.
    X1p1,
    /// Saturates `Δx̄₂ Δp̄₂ ≥ ħ/2`.
    X2p2,
}

impl Family {
    pub const ALL: [Family; 3] = [Family::Xx, Family::X1p1, Family::X2p2];
}

fn one<T: Real>() -> C<T> {
    re(T::one())
}

fn to_t<T: Real>(z: Complex64) -> C<T> {
    C::new(T::of(z.re), T::of(z.im))
}

fn check_z(z: Complex64, caps: &Caps) -> Result<()> {
    if z.norm() > caps.z_cap {
        return Err(Error::DisplacementTooLarge {
            z: z.norm(),
            cap: caps.z_cap,
        });
    }
    Ok(())
}

fn check_spectator(n: usize, trunc: &Truncation) -> Result<()> {
    if n >= trunc.n_eff {
        return Err(Error::TruncationOverflow {
            tail: 1.0,
            n_eff: trunc.n_eff,
            tol: trunc.tail_tol,
        });
    }
    Ok(())
}

/// Apply `op` `n` times and divide by `sqrt(n!)`.
fn raise<T: Real>(op: &FockOperator<T>, mut v: Vec<C<T>>, n: usize) -> Result<Vec<C<T>>> {
    for k in 1..=n {
        v = op.apply_to(&v)?;
        let s = T::of(1.0 / (k as f64).sqrt());
        v.iter_mut().for_each(|x| *x = *x * s);
    }
    Ok(v)
}

fn vacuum_amps<T: Real>(trunc: &Truncation, modes: Modes) -> Vec<C<T>> {
    let mut v = vec![C::zero(); modes.dim(trunc.n_levels)];
    v[0] = one();
    v
}

/// Number state `|n1, n2⟩` in the mode-ladder basis. Requires
/// `n1 + n2 < n_eff`.
pub fn fock_basis_state<T: Real>(n1: usize, n2: usize, trunc: Truncation) -> Result<FockState<T>> {
    if n1 + n2 >= trunc.n_eff {
        return Err(Error::TruncationOverflow {
            tail: 1.0,
            n_eff: trunc.n_eff,
            tol: trunc.tail_tol,
        });
    }
    FockState::basis(trunc, Modes::Two, n1, n2)
}

/// `(a₊†)^{n₊} (a₋†)^{n₋} / sqrt(n₊! n₋!) |0, 0⟩`. Requires `n₊ + n₋ < n_eff`.
pub fn pm_basis_state<T: Real>(nplus: usize, nminus: usize, frame: &PhaseFrame<T>) -> Result<FockState<T>> {
    let trunc = frame.trunc;
    if nplus + nminus >= trunc.n_eff {
        return Err(Error::TruncationOverflow {
            tail: 1.0,
            n_eff: trunc.n_eff,
            tol: trunc.tail_tol,
        });
    }
    let v = raise(&frame.aminus_dag, vacuum_amps(&trunc, Modes::Two), nminus)?;
    let v = raise(&frame.aplus_dag, v, nplus)?;
    FockState::new(v, trunc, Modes::Two)
}

/// Coherent state `U(z)|0⟩` for the lowering operator `a` (single- or
/// two-mode).
pub fn coherent_state<T: Real>(z: Complex64, a: &FockOperator<T>, caps: &Caps) -> Result<FockState<T>> {
    check_z(z, caps)?;
    let trunc = *a.trunc();
    let v = exp_action(&displacement_generator(z, a), &vacuum_amps(&trunc, a.modes()))?;
    FockState::new(v, trunc, a.modes())
}

/// Squeezed coherent state `|z, ξ⟩ = V(ξ) U(z) |0⟩`.
pub fn squeezed_coherent<T: Real>(z: Complex64, xi: f64, a: &FockOperator<T>, caps: &Caps) -> Result<FockState<T>> {
    check_z(z, caps)?;
    check_xi(xi, caps)?;
    let trunc = *a.trunc();
    let v = exp_action(&displacement_generator(z, a), &vacuum_amps(&trunc, a.modes()))?;
    let v = exp_action(&squeeze_generator(xi, a)?, &v)?;
    FockState::new(v, trunc, a.modes())
}

/// Means `(α, β) = (⟨x̂⟩, ⟨p̂⟩)` encoded by `z = (α/sqrt ξ + i β sqrt ξ)/sqrt(2ħ)`.
pub fn means_from_z(z: Complex64, xi: f64, hbar: f64) -> (f64, f64) {
    let s = (2.0 * hbar).sqrt();
    (s * xi.sqrt() * z.re, s * z.im / xi.sqrt())
}

/// Vacuum of `b(t)` with no `c` excitation: `T(t)|0, 0⟩`.
pub fn b_vacuum<T: Real>(frame: &PhaseFrame<T>) -> Result<FockState<T>> {
    b_vacuum_excited(frame, 0)
}

/// `(c†)ⁿ / sqrt(n!) T(t)|0, 0⟩`, still annihilated by `b(t)`.
pub fn b_vacuum_excited<T: Real>(frame: &PhaseFrame<T>, n_c: usize) -> Result<FockState<T>> {
    check_spectator(n_c, &frame.trunc)?;
    let g = t_generator(frame)?;
    let v = exp_action(&g, &vacuum_amps(&frame.trunc, Modes::Two))?;
    let v = raise(&frame.bogoliubov()?.cdag, v, n_c)?;
    FockState::new(v, frame.trunc, Modes::Two)
}

/// `T(t) V₋(ξ) e^{z a₋†} |n₊, 0⟩` (normalized), built in the frame.
pub fn xx_state_in<T: Real>(frame: &PhaseFrame<T>, z: Complex64, xi: f64, nplus: usize) -> Result<FockState<T>> {
    check_z(z, &frame.caps)?;
    check_xi(xi, &frame.caps)?;
    check_spectator(nplus, &frame.trunc)?;
    let t_gen = t_generator(frame)?;
    let v = raise(&frame.aplus_dag, vacuum_amps(&frame.trunc, Modes::Two), nplus)?;
    let v = exp_action(&frame.aminus_dag.scale(to_t(z)), &v)?;
    let v = exp_action(&squeeze_generator(xi, &frame.aminus)?, &v)?;
    let v = exp_action(&t_gen, &v)?;
    FockState::new(v, frame.trunc, Modes::Two)
}

/// The same family built from the Bogoliubov operators directly:
/// `e^{¼ ln ξ (b†² − b²)} e^{z b†} (c†)^{n₊}/sqrt(n₊!) |0⟩_b`.
pub fn xx_state_via_b<T: Real>(frame: &PhaseFrame<T>, z: Complex64, xi: f64, nplus: usize) -> Result<FockState<T>> {
    check_z(z, &frame.caps)?;
    check_xi(xi, &frame.caps)?;
    let vac = b_vacuum_excited(frame, nplus)?;
    let bg = frame.bogoliubov()?;
    let v = exp_action(&bg.bdag.scale(to_t(z)), vac.amplitudes())?;
    let sq = (&(&bg.bdag * &bg.bdag) - &(&bg.b * &bg.b)).scale_real(T::of(0.25 * xi.ln()));
    let v = exp_action(&sq, &v)?;
    FockState::new(v, frame.trunc, Modes::Two)
}

/// `S(t) V₁(ξ) e^{z a₁†} |0, n₂⟩` (normalized), built in the frame.
pub fn x1p1_state_in<T: Real>(frame: &PhaseFrame<T>, z: Complex64, xi: f64, n2: usize) -> Result<FockState<T>> {
    check_z(z, &frame.caps)?;
    check_xi(xi, &frame.caps)?;
    check_spectator(n2, &frame.trunc)?;
    let v = FockState::<T>::basis(frame.trunc, Modes::Two, 0, n2)?.into_amplitudes();
    let v = exp_action(&frame.a1dag.scale(to_t(z)), &v)?;
    let v = exp_action(&squeeze_generator(xi, &frame.a1)?, &v)?;
    let v = exp_action(&s_generator(frame), &v)?;
    FockState::new(v, frame.trunc, Modes::Two)
}

/// `S†(t) V₂(ξ) e^{z a₂†} |n₁, 0⟩` (normalized), built in the frame.
///
/// The spectator occupies mode 1 so that the squeeze and displacement act
/// on mode 2 alone; this is the image of the `(x̄₁, p̄₁)` family under the
/// mode exchange with `f → −f`.
pub fn x2p2_state_in<T: Real>(frame: &PhaseFrame<T>, z: Complex64, xi: f64, n1: usize) -> Result<FockState<T>> {
    check_z(z, &frame.caps)?;
    check_xi(xi, &frame.caps)?;
    check_spectator(n1, &frame.trunc)?;
    let v = FockState::<T>::basis(frame.trunc, Modes::Two, n1, 0)?.into_amplitudes();
    let v = exp_action(&frame.a2dag.scale(to_t(z)), &v)?;
    let v = exp_action(&squeeze_generator(xi, &frame.a2)?, &v)?;
    let v = exp_action(&(-&s_generator(frame)), &v)?;
    FockState::new(v, frame.trunc, Modes::Two)
}

pub fn saturating_state_in<T: Real>(
    family: Family,
    frame: &PhaseFrame<T>,
    z: Complex64,
    xi: f64,
    spectator: usize,
) -> Result<FockState<T>> {
    match family {
        Family::Xx => xx_state_in(frame, z, xi, spectator),
        Family::X1p1 => x1p1_state_in(frame, z, xi, spectator),
        Family::X2p2 => x2p2_state_in(frame, z, xi, spectator),
    }
}

pub fn xx_saturating_state<T: Real>(req: &StateRequest, trunc: Truncation) -> Result<FockState<T>> {
    let frame = PhaseFrame::build(&req.params, trunc, req.t)?;
    xx_state_in(&frame, req.z, req.xi, req.spectator)
}

pub fn x1p1_saturating_state<T: Real>(req: &StateRequest, trunc: Truncation) -> Result<FockState<T>> {
    let frame = PhaseFrame::build(&req.params, trunc, req.t)?;
    x1p1_state_in(&frame, req.z, req.xi, req.spectator)
}

pub fn x2p2_saturating_state<T: Real>(req: &StateRequest, trunc: Truncation) -> Result<FockState<T>> {
    let frame = PhaseFrame::build(&req.params, trunc, req.t)?;
    x2p2_state_in(&frame, req.z, req.xi, req.spectator)
}

pub fn saturating_state<T: Real>(family: Family, req: &StateRequest, trunc: Truncation) -> Result<FockState<T>> {
    let frame = PhaseFrame::build(&req.params, trunc, req.t)?;
    saturating_state_in(family, &frame, req.z, req.xi, req.spectator)
}

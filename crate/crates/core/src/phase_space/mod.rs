//! Operator frames of the deformed phase space at a fixed time `t`.
//!
//! Canonical pairs `(x̂ᵢ, p̂ᵢ)` on two modes are deformed into
//! `x̄ᵢ = x̂ᵢ − (f/2ħ) εᵢⱼ p̂ⱼ`, `p̄ᵢ = p̂ᵢ` with `ε₁₂ = +1`, so that
//! `[x̄₁, x̄₂] = i f(t)`. On top of these sit the mode ladders `aᵢ(t)`, the
//! circular ladders `a±(t)`, the Bogoliubov pair `(b, c)` spanned by the
//! deformed positions, and the `(d, e)` pair adapted to `(x̄₁, p̄₁)`.

mod action;
mod caps;
mod unitaries;

use std::collections::BTreeMap;

pub use action::UnitaryAction;
pub use caps::{resolved_levels, Caps, EDGE_TOL};
pub use unitaries::{
    displacement_generator, displacement_u, mix_s, s_generator, squeeze_generator, squeeze_v, t_generator,
    t_squeeze_magnitude, two_mode_squeeze_t,
};
pub(crate) use unitaries::check_xi;

use crate::deformation::DeformationParams;
use crate::error::{Error, Result};
use crate::fock::{embed_mode, ladder, FockOperator, OperatorJson, Truncation};
use crate::scalar::{re, Real, C};

/// Canonical two-mode operators; `A₁`, `A₂` are the embedded lowering
/// operators.
#[derive(Debug, Clone)]
pub struct CanonicalFrame<T: Real = f64> {
    pub hbar: f64,
    pub x1: FockOperator<T>,
    pub x2: FockOperator<T>,
    pub p1: FockOperator<T>,
    pub p2: FockOperator<T>,
    pub a1: FockOperator<T>,
    pub a2: FockOperator<T>,
}

/// `x̂ᵢ = sqrt(ħ/2)(Aᵢ + Aᵢ†)`, `p̂ᵢ = −i sqrt(ħ/2)(Aᵢ − Aᵢ†)`.
pub fn canonical_frame<T: Real>(trunc: Truncation, hbar: f64) -> Result<CanonicalFrame<T>> {
    if !(hbar > 0.0 && hbar.is_finite()) {
        return Err(Error::InvalidParameter(format!("hbar = {hbar} must be positive")));
    }
    let a = ladder::<T>(trunc)?;
    let a1 = embed_mode(&a, 1)?;
    let a2 = embed_mode(&a, 2)?;
    let s = T::of((hbar / 2.0).sqrt());
    let (x1, p1) = quadratures(&a1, s);
    let (x2, p2) = quadratures(&a2, s);
    Ok(CanonicalFrame {
        hbar,
        x1,
        x2,
        p1,
        p2,
        a1,
        a2,
    })
}

fn quadratures<T: Real>(a: &FockOperator<T>, s: T) -> (FockOperator<T>, FockOperator<T>) {
    let ad = a.adjoint();
    let x = (a + &ad).scale_real(s);
    let p = (a - &ad).scale(C::new(T::zero(), -s));
    (x, p)
}

/// Frame construction knobs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameOptions {
    /// Sign of `ε₁₂`. Only `+1` is physical; `-1` exists to exercise the
    /// verification suite.
    pub epsilon12: f64,
    pub caps: Option<Caps>,
}

impl Default for FrameOptions {
    fn default() -> Self {
        FrameOptions {
            epsilon12: 1.0,
            caps: None,
        }
    }
}

/// Deformed positions and momenta.
#[derive(Debug, Clone)]
pub struct DeformedPositions<T: Real = f64> {
    pub x1bar: FockOperator<T>,
    pub x2bar: FockOperator<T>,
    pub p1bar: FockOperator<T>,
    pub p2bar: FockOperator<T>,
}

pub fn deformed_positions<T: Real>(can: &CanonicalFrame<T>, f: f64, epsilon12: f64) -> DeformedPositions<T> {
    let k = T::of(f / (2.0 * can.hbar) * epsilon12);
    DeformedPositions {
        x1bar: &can.x1 - &can.p2.scale_real(k),
        x2bar: &can.x2 + &can.p1.scale_real(k),
        p1bar: can.p1.clone(),
        p2bar: can.p2.clone(),
    }
}

#[derive(Debug, Clone)]
pub struct ModeLadders<T: Real = f64> {
    pub a1: FockOperator<T>,
    pub a2: FockOperator<T>,
    pub a1dag: FockOperator<T>,
    pub a2dag: FockOperator<T>,
}

/// `aᵢ(t) = (1/sqrt(2ħ)) [x̄ᵢ + (i δᵢⱼ + (f/2ħ) εᵢⱼ) p̄ⱼ]` and the
/// corresponding creation operators, built term by term.
pub fn mode_ladders<T: Real>(pos: &DeformedPositions<T>, f: f64, hbar: f64, epsilon12: f64) -> ModeLadders<T> {
    let norm = T::of(1.0 / (2.0 * hbar).sqrt());
    let k = re(T::of(f / (2.0 * hbar) * epsilon12));
    let i = C::new(T::zero(), T::one());
    let one = re(T::one());
    let build = |x: &FockOperator<T>, p_same: &FockOperator<T>, p_other: &FockOperator<T>, sign_i: C<T>, eps: C<T>| {
        let s = x.lin_comb(one, p_same, sign_i).unwrap();
        s.lin_comb(one, p_other, eps).unwrap().scale_real(norm)
    };
    ModeLadders {
        a1: build(&pos.x1bar, &pos.p1bar, &pos.p2bar, i, k),
        a2: build(&pos.x2bar, &pos.p2bar, &pos.p1bar, i, -k),
        a1dag: build(&pos.x1bar, &pos.p1bar, &pos.p2bar, -i, k),
        a2dag: build(&pos.x2bar, &pos.p2bar, &pos.p1bar, -i, -k),
    }
}

#[derive(Debug, Clone)]
pub struct CircularLadders<T: Real = f64> {
    pub aplus: FockOperator<T>,
    pub aminus: FockOperator<T>,
    pub aplus_dag: FockOperator<T>,
    pub aminus_dag: FockOperator<T>,
}

/// `a± = (a₁ ∓ i a₂)/sqrt(2)`, `a±† = (a₁† ± i a₂†)/sqrt(2)`.
pub fn circular_ladders<T: Real>(l: &ModeLadders<T>) -> CircularLadders<T> {
    let h = T::of(std::f64::consts::FRAC_1_SQRT_2);
    let one = re(h);
    let i = C::new(T::zero(), h);
    CircularLadders {
        aplus: l.a1.lin_comb(one, &l.a2, -i).unwrap(),
        aminus: l.a1.lin_comb(one, &l.a2, i).unwrap(),
        aplus_dag: l.a1dag.lin_comb(one, &l.a2dag, i).unwrap(),
        aminus_dag: l.a1dag.lin_comb(one, &l.a2dag, -i).unwrap(),
    }
}

#[derive(Debug, Clone)]
pub struct BogoliubovFrame<T: Real = f64> {
    pub b: FockOperator<T>,
    pub bdag: FockOperator<T>,
    pub c: FockOperator<T>,
    pub cdag: FockOperator<T>,
}

/// Coefficients `(cosh r, sinh r) = sqrt(ħ/2f) (1 ± f/2ħ)` with
/// `r = ½ ln(2ħ/f)`.
pub fn bogoliubov_coefficients(f: f64, hbar: f64) -> (f64, f64) {
    let pre = (hbar / (2.0 * f)).sqrt();
    let h = f / (2.0 * hbar);
    (pre * (1.0 + h), pre * (1.0 - h))
}

pub fn bogoliubov_frame<T: Real>(
    circ: &CircularLadders<T>,
    params: &DeformationParams,
    f: f64,
) -> Result<BogoliubovFrame<T>> {
    if f < params.f_min() {
        return Err(Error::DeformationVanishes {
            f,
            f_min: params.f_min(),
        });
    }
    let (ch, sh) = bogoliubov_coefficients(f, params.hbar);
    let (ch, sh) = (re(T::of(ch)), re(T::of(sh)));
    Ok(BogoliubovFrame {
        b: circ.aminus.lin_comb(ch, &circ.aplus_dag, sh)?,
        bdag: circ.aminus_dag.lin_comb(ch, &circ.aplus, sh)?,
        c: circ.aplus.lin_comb(ch, &circ.aminus_dag, sh)?,
        cdag: circ.aplus_dag.lin_comb(ch, &circ.aminus, sh)?,
    })
}

#[derive(Debug, Clone)]
pub struct DeFrame<T: Real = f64> {
    pub d: FockOperator<T>,
    pub ddag: FockOperator<T>,
    pub e: FockOperator<T>,
    pub edag: FockOperator<T>,
}

/// `d = a₁ + (if/4ħ)(a₂ − a₂†)`, `e = a₂ + (if/4ħ)(a₁ − a₁†)`.
pub fn d_e_frame<T: Real>(l: &ModeLadders<T>, f: f64, hbar: f64) -> DeFrame<T> {
    let k = C::new(T::zero(), T::of(f / (4.0 * hbar)));
    let one = re(T::one());
    let p2 = &l.a2 - &l.a2dag;
    let p1 = &l.a1 - &l.a1dag;
    DeFrame {
        d: l.a1.lin_comb(one, &p2, k).unwrap(),
        ddag: l.a1dag.lin_comb(one, &p2, k).unwrap(),
        e: l.a2.lin_comb(one, &p1, k).unwrap(),
        edag: l.a2dag.lin_comb(one, &p1, k).unwrap(),
    }
}

/// Every operator frame at one time.
#[derive(Debug, Clone)]
pub struct PhaseFrame<T: Real = f64> {
    pub t: f64,
    pub params: DeformationParams,
    pub f_t: f64,
    pub trunc: Truncation,
    pub caps: Caps,
    pub epsilon12: f64,
    pub canonical: CanonicalFrame<T>,
    pub x1bar: FockOperator<T>,
    pub x2bar: FockOperator<T>,
    pub p1bar: FockOperator<T>,
    pub p2bar: FockOperator<T>,
    pub a1: FockOperator<T>,
    pub a2: FockOperator<T>,
    pub a1dag: FockOperator<T>,
    pub a2dag: FockOperator<T>,
    pub aplus: FockOperator<T>,
    pub aminus: FockOperator<T>,
    pub aplus_dag: FockOperator<T>,
    pub aminus_dag: FockOperator<T>,
    /// Present only when `f(t) ≥ f_min`.
    pub bogoliubov: Option<BogoliubovFrame<T>>,
    pub d: FockOperator<T>,
    pub ddag: FockOperator<T>,
    pub e: FockOperator<T>,
    pub edag: FockOperator<T>,
}

impl<T: Real> PhaseFrame<T> {
    pub fn build(params: &DeformationParams, trunc: Truncation, t: f64) -> Result<Self> {
        Self::build_with(params, trunc, t, &FrameOptions::default())
    }

    pub fn build_with(params: &DeformationParams, trunc: Truncation, t: f64, opts: &FrameOptions) -> Result<Self> {
        params.validate()?;
        trunc.validate()?;
        Self::assemble(params, trunc, t, params.f_value(t), opts)
    }

    /// Frame with an explicit deformation value, bypassing `f(t)`. Negative
    /// values are allowed; the Bogoliubov pair is then absent.
    pub fn with_f_value(params: &DeformationParams, trunc: Truncation, f: f64) -> Result<Self> {
        params.validate()?;
        trunc.validate()?;
        Self::assemble(params, trunc, f64::NAN, f, &FrameOptions::default())
    }

    fn assemble(params: &DeformationParams, trunc: Truncation, t: f64, f: f64, opts: &FrameOptions) -> Result<Self> {
        let hbar = params.hbar;
        let canonical = canonical_frame::<T>(trunc, hbar)?;
        let pos = deformed_positions(&canonical, f, opts.epsilon12);
        let lad = mode_ladders(&pos, f, hbar, opts.epsilon12);
        let circ = circular_ladders(&lad);
        let bogoliubov = if f >= params.f_min() {
            Some(bogoliubov_frame(&circ, params, f)?)
        } else {
            None
        };
        let de = d_e_frame(&lad, f, hbar);
        Ok(PhaseFrame {
            t,
            params: *params,
            f_t: f,
            trunc,
            caps: opts.caps.unwrap_or_else(|| Caps::for_levels(trunc.n_levels)),
            epsilon12: opts.epsilon12,
            canonical,
            x1bar: pos.x1bar,
            x2bar: pos.x2bar,
            p1bar: pos.p1bar,
            p2bar: pos.p2bar,
            a1: lad.a1,
            a2: lad.a2,
            a1dag: lad.a1dag,
            a2dag: lad.a2dag,
            aplus: circ.aplus,
            aminus: circ.aminus,
            aplus_dag: circ.aplus_dag,
            aminus_dag: circ.aminus_dag,
            bogoliubov,
            d: de.d,
            ddag: de.ddag,
            e: de.e,
            edag: de.edag,
        })
    }

    pub fn hbar(&self) -> f64 {
        self.params.hbar
    }

    /// The Bogoliubov pair, or `DeformationVanishes`.
    pub fn bogoliubov(&self) -> Result<&BogoliubovFrame<T>> {
        self.bogoliubov.as_ref().ok_or(Error::DeformationVanishes {
            f: self.f_t,
            f_min: self.params.f_min(),
        })
    }

    /// `b` written through the deformed positions, `(x̄₁ + i x̄₂)/sqrt(2f)`.
    pub fn b_from_positions(&self) -> Result<FockOperator<T>> {
        self.bogoliubov()?;
        let s = T::of(1.0 / (2.0 * self.f_t).sqrt());
        self.x1bar.lin_comb(re(s), &self.x2bar, C::new(T::zero(), s))
    }

    /// `d` written through `(x̄₁ + i p̄₁)/sqrt(2ħ)`.
    pub fn d_from_positions(&self) -> FockOperator<T> {
        let s = T::of(1.0 / (2.0 * self.hbar()).sqrt());
        self.x1bar
            .lin_comb(re(s), &self.p1bar, C::new(T::zero(), s))
            .expect("frame operators share one dimension")
    }

    /// All operators by name, for serialization.
    pub fn operators(&self) -> Vec<(&'static str, &FockOperator<T>)> {
        let mut ops = vec![
            ("x1bar", &self.x1bar),
            ("x2bar", &self.x2bar),
            ("p1bar", &self.p1bar),
            ("p2bar", &self.p2bar),
            ("a1", &self.a1),
            ("a2", &self.a2),
            ("a1dag", &self.a1dag),
            ("a2dag", &self.a2dag),
            ("aplus", &self.aplus),
            ("aminus", &self.aminus),
            ("aplus_dag", &self.aplus_dag),
            ("aminus_dag", &self.aminus_dag),
        ];
        if let Some(b) = &self.bogoliubov {
            ops.extend([("b", &b.b), ("bdag", &b.bdag), ("c", &b.c), ("cdag", &b.cdag)]);
        }
        ops.extend([("d", &self.d), ("ddag", &self.ddag), ("e", &self.e), ("edag", &self.edag)]);
        ops
    }

    pub fn to_json(&self) -> FrameJson {
        FrameJson {
            t: self.t,
            f_t: self.f_t,
            params: self.params,
            operators: self.operators().into_iter().map(|(k, v)| (k.to_string(), v.to_json())).collect(),
        }
    }
}

#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct FrameJson {
    pub t: f64,
    pub f_t: f64,
    pub params: DeformationParams,
    pub operators: BTreeMap<String, OperatorJson>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::deformation::{Branch, Kind};
    use crate::fock::commutator;

    fn frame(f_kappa: f64) -> PhaseFrame {
        let p = DeformationParams::new(Kind::K1, Branch::Flat, f_kappa, 1.0, 1.0).unwrap();
        PhaseFrame::build(&p, Truncation::new(12, 8, 1e-8).unwrap(), 0.0).unwrap()
    }

    #[test]
    fn deformed_commutator_on_low_block() {
        let fr = frame(0.7);
        let c = commutator(&fr.x1bar, &fr.x2bar).unwrap();
        assert!(c.low_block_dev_from_scalar(C::new(0.0, 0.7), 10) < 1e-12);
        assert_eq!(fr.x1bar.hermitian_deviation(), 0.0);
        assert_eq!(fr.x2bar.hermitian_deviation(), 0.0);
    }

    #[test]
    fn mode_ladders_equal_canonical() {
        let fr = frame(1.3);
        assert!(fr.a1.max_abs_diff(&fr.canonical.a1).unwrap() < 1e-12);
        assert!(fr.a2dag.max_abs_diff(&fr.canonical.a2.adjoint()).unwrap() < 1e-12);
    }

    #[test]
    fn f_equal_two_hbar_makes_b_equal_aminus() {
        let fr = frame(2.0);
        let b = fr.bogoliubov().unwrap();
        assert_eq!(b.b.max_abs_diff(&fr.aminus).unwrap(), 0.0);
    }

    #[test]
    fn vanishing_deformation_drops_bogoliubov() {
        let p = DeformationParams::new(Kind::K2, Branch::NhPlus, 1.0, 1.0, 1.0).unwrap();
        let fr = PhaseFrame::<f64>::build(&p, Truncation::new(6, 3, 1e-8).unwrap(), 0.0).unwrap();
        assert!(fr.bogoliubov.is_none());
        assert!(matches!(fr.b_from_positions(), Err(Error::DeformationVanishes { .. })));
        assert_eq!(fr.d.max_abs_diff(&fr.a1).unwrap(), 0.0);
    }
}

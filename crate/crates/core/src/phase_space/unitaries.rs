use super::{Caps, PhaseFrame};
use crate::error::{Error, Result};
use crate::fock::{matrix_exponential, FockOperator};
use crate::scalar::{Real, C};

/// `z a† − z̄ a`.
pub fn displacement_generator<T: Real>(z: C<f64>, a: &FockOperator<T>) -> FockOperator<T> {
    let zt = C::new(T::of(z.re), T::of(z.im));
    a.adjoint()
        .lin_comb(zt, a, -zt.conj())
        .expect("adjoint has the same dimension")
}

/// Displacement `U(z) = exp(z a† − z̄ a)`.
pub fn displacement_u<T: Real>(z: C<f64>, a: &FockOperator<T>, caps: &Caps) -> Result<FockOperator<T>> {
    if z.norm() > caps.z_cap {
        return Err(Error::DisplacementTooLarge {
            z: z.norm(),
            cap: caps.z_cap,
        });
    }
    matrix_exponential(&displacement_generator(z, a))
}

/// `−¼ ln ξ (a² − a†²)`.
pub fn squeeze_generator<T: Real>(xi: f64, a: &FockOperator<T>) -> Result<FockOperator<T>> {
    if !(xi > 0.0 && xi.is_finite()) {
        return Err(Error::InvalidParameter(format!("xi = {xi} must be positive")));
    }
    let ad = a.adjoint();
    let k = T::of(-0.25 * xi.ln());
    Ok((&(a * a) - &(&ad * &ad)).scale_real(k))
}

/// Squeeze `V(ξ) = exp(−¼ ln ξ (a² − a†²))`.
pub fn squeeze_v<T: Real>(xi: f64, a: &FockOperator<T>, caps: &Caps) -> Result<FockOperator<T>> {
    check_xi(xi, caps)?;
    matrix_exponential(&squeeze_generator(xi, a)?)
}

pub(crate) fn check_xi(xi: f64, caps: &Caps) -> Result<()> {
    if !(xi > 0.0 && xi.is_finite()) {
        return Err(Error::InvalidParameter(format!("xi = {xi} must be positive")));
    }
    if xi < caps.xi_min || xi > caps.xi_max {
        let cap = 0.25 * if xi < caps.xi_min { 1.0 / caps.xi_min } else { caps.xi_max }.ln();
        return Err(Error::SqueezeTooLarge {
            r: 0.25 * xi.ln().abs(),
            cap,
        });
    }
    Ok(())
}

/// Squeeze magnitude `r = ½ ln(2ħ/f)` of `T(t)`, after the `f_min` and cap
/// checks.
pub fn t_squeeze_magnitude<T: Real>(frame: &PhaseFrame<T>) -> Result<f64> {
    frame.bogoliubov()?;
    let r = 0.5 * (2.0 * frame.hbar() / frame.f_t).ln();
    if r.abs() > frame.caps.r_cap {
        return Err(Error::SqueezeTooLarge {
            r: r.abs(),
            cap: frame.caps.r_cap,
        });
    }
    Ok(r)
}

/// `½ ln(2ħ/f) (a₊ a₋ − a₊† a₋†)`.
pub fn t_generator<T: Real>(frame: &PhaseFrame<T>) -> Result<FockOperator<T>> {
    let r = t_squeeze_magnitude(frame)?;
    let g = &(&frame.aplus * &frame.aminus) - &(&frame.aplus_dag * &frame.aminus_dag);
    Ok(g.scale_real(T::of(r)))
}

/// Two-mode squeeze `T(t)` carrying `(a₋, a₊)` to `(b, c)`.
pub fn two_mode_squeeze_t<T: Real>(frame: &PhaseFrame<T>) -> Result<FockOperator<T>> {
    matrix_exponential(&t_generator(frame)?)
}

/// `(if/4ħ)(a₁ − a₁†)(a₂ − a₂†)`.
pub fn s_generator<T: Real>(frame: &PhaseFrame<T>) -> FockOperator<T> {
    let k = C::new(T::zero(), T::of(frame.f_t / (4.0 * frame.hbar())));
    let g = &(&frame.a1 - &frame.a1dag) * &(&frame.a2 - &frame.a2dag);
    g.scale(k)
}

/// Mixing unitary `S(t)` carrying `(a₁, a₂)` to `(d, e)`.
pub fn mix_s<T: Real>(frame: &PhaseFrame<T>) -> Result<FockOperator<T>> {
    matrix_exponential(&s_generator(frame))
}

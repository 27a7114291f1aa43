use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::operator::FockOperator;
use super::truncation::{levels_of, Modes, Truncation};
use crate::error::{Error, Result};
use crate::scalar::{re, Real, C};

/// Normalized pure state over the truncated number basis.
///
/// Every constructor normalizes and then rejects states whose population at
/// or above `n_eff` in either mode exceeds `tail_tol`.
#[derive(Debug, Clone, PartialEq)]
pub struct FockState<T: Real = f64> {
    amplitudes: Vec<C<T>>,
    trunc: Truncation,
    modes: Modes,
}

impl<T: Real> FockState<T> {
    /// Normalize `amplitudes` and run the tail check.
    pub fn new(amplitudes: Vec<C<T>>, trunc: Truncation, modes: Modes) -> Result<Self> {
        let n = modes.dim(trunc.n_levels);
        if amplitudes.len() != n {
            return Err(Error::InvalidDimension(format!(
                "expected {n} amplitudes, got {}",
                amplitudes.len()
            )));
        }
        let state = FockState {
            amplitudes: normalize(amplitudes)?,
            trunc,
            modes,
        };
        let tail = state.tail_population();
        if tail > trunc.tail_tol {
            return Err(Error::TruncationOverflow {
                tail,
                n_eff: trunc.n_eff,
                tol: trunc.tail_tol,
            });
        }
        Ok(state)
    }

    /// Number state `|n1, n2⟩` (`n2` ignored for a single mode).
    pub fn basis(trunc: Truncation, modes: Modes, n1: usize, n2: usize) -> Result<Self> {
        let n = trunc.n_levels;
        if n1 >= n || (modes == Modes::Two && n2 >= n) {
            return Err(Error::InvalidDimension(format!(
                "level ({n1}, {n2}) outside {n} levels"
            )));
        }
        let mut amps = vec![C::zero(); modes.dim(n)];
        let idx = match modes {
            Modes::One => n1,
            Modes::Two => n1 * n + n2,
        };
        amps[idx] = re(T::one());
        Self::new(amps, trunc, modes)
    }

    pub fn vacuum(trunc: Truncation, modes: Modes) -> Self {
        Self::basis(trunc, modes, 0, 0).expect("vacuum is always admissible")
    }

    pub fn amplitudes(&self) -> &[C<T>] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<C<T>> {
        self.amplitudes
    }

    pub fn trunc(&self) -> &Truncation {
        &self.trunc
    }

    pub fn modes(&self) -> Modes {
        self.modes
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn norm(&self) -> f64 {
        vec_norm(&self.amplitudes)
    }

    /// Population at or above `n_eff`, maximized over modes.
    pub fn tail_population(&self) -> f64 {
        tail_population(&self.amplitudes, self.modes, &self.trunc)
    }

    /// `⟨self|other⟩`, conjugate-linear in `self`.
    pub fn inner(&self, other: &Self) -> Result<C<T>> {
        inner(&self.amplitudes, &other.amplitudes)
    }

    /// Exchange the two modes: `|n1, n2⟩ → |n2, n1⟩`.
    pub fn mode_swap(&self) -> Self {
        if self.modes == Modes::One {
            return self.clone();
        }
        let n = self.trunc.n_levels;
        let mut amps = vec![C::zero(); self.dim()];
        for n1 in 0..n {
            for n2 in 0..n {
                amps[n2 * n + n1] = self.amplitudes[n1 * n + n2];
            }
        }
        FockState {
            amplitudes: amps,
            ..self.clone()
        }
    }

    pub fn to_json(&self) -> StateJson {
        StateJson {
            dim: self.dim(),
            n_levels: self.trunc.n_levels,
            indexing: "mode1-major".into(),
            trunc: self.trunc,
            norm: self.norm(),
            amplitudes: self
                .amplitudes
                .iter()
                .map(|v| [v.re.as_f64(), v.im.as_f64()])
                .collect(),
        }
    }

    pub fn from_json(j: &StateJson) -> Result<Self> {
        let modes = if j.dim == j.n_levels {
            Modes::One
        } else {
            Modes::Two
        };
        let amps = j.amplitudes.iter().map(|p| C::new(T::of(p[0]), T::of(p[1]))).collect();
        Self::new(amps, j.trunc, modes)
    }
}

/// Serialized state: `{dim, n_levels, indexing, trunc, norm, amplitudes}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StateJson {
    pub dim: usize,
    pub n_levels: usize,
    pub indexing: String,
    pub trunc: Truncation,
    pub norm: f64,
    pub amplitudes: Vec<[f64; 2]>,
}

/// `A ψ` as raw amplitudes.
pub fn apply<T: Real>(a: &FockOperator<T>, psi: &FockState<T>) -> Result<Vec<C<T>>> {
    a.apply_to(psi.amplitudes())
}

pub fn inner<T: Real>(phi: &[C<T>], psi: &[C<T>]) -> Result<C<T>> {
    if phi.len() != psi.len() {
        return Err(Error::InvalidDimension(format!(
            "vector lengths differ: {} vs {}",
            phi.len(),
            psi.len()
        )));
    }
    Ok(phi.iter().zip(psi).fold(C::zero(), |acc, (a, b)| acc + a.conj() * b))
}

pub fn vec_norm<T: Real>(v: &[C<T>]) -> f64 {
    v.iter().map(|x| x.norm_sqr().as_f64()).sum::<f64>().sqrt()
}

/// Rescale to unit norm.
pub fn normalize<T: Real>(mut v: Vec<C<T>>) -> Result<Vec<C<T>>> {
    let n = vec_norm(&v);
    if n == 0.0 || !n.is_finite() {
        return Err(Error::ZeroState);
    }
    let inv = T::of(1.0 / n);
    for x in &mut v {
        *x = *x * inv;
    }
    Ok(v)
}

pub(crate) fn tail_population<T: Real>(v: &[C<T>], modes: Modes, trunc: &Truncation) -> f64 {
    let total: f64 = v.iter().map(|x| x.norm_sqr().as_f64()).sum();
    if total == 0.0 {
        return 0.0;
    }
    let (mut t1, mut t2) = (0.0f64, 0.0f64);
    for (i, x) in v.iter().enumerate() {
        let (n1, n2) = levels_of(modes, trunc.n_levels, i);
        let p = x.norm_sqr().as_f64();
        if n1 >= trunc.n_eff {
            t1 += p;
        }
        if modes == Modes::Two && n2 >= trunc.n_eff {
            t2 += p;
        }
    }
    t1.max(t2) / total
}

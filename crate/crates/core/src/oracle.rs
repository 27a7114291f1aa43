//! Variational oracle: minimize `Δ_A Δ_B` over unit vectors supported on the
//! low block, independently of any analytic state construction.
//!
//! The objective is `F(x) = Var_A(ψ) Var_B(ψ)` with `ψ = x/‖x‖` and `x` the
//! real and imaginary parts of the low-block amplitudes. Minimization is
//! limited-memory BFGS on the unit sphere (tangent-projected gradients,
//! normalization as retraction, Armijo backtracking), restarted from seeded
//! random points.

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{low_indices, FockOperator, FockState};
use crate::scalar::{Real, C};
use crate::uncertainty::{dispersion, heisenberg_bound};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MinimizeConfig {
    pub n_eff: usize,
    pub max_iters: usize,
    /// Converged once an accepted step lowers the objective by less than
    /// this fraction.
    pub step_tol: f64,
    pub restarts: usize,
    pub rng_seed: u64,
}

impl Default for MinimizeConfig {
    fn default() -> Self {
        MinimizeConfig {
            n_eff: 12,
            max_iters: 5000,
            step_tol: 1e-10,
            restarts: 8,
            rng_seed: 0,
        }
    }
}

impl MinimizeConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_eff < 2 {
            return Err(Error::InvalidParameter(format!("n_eff = {} must be at least 2", self.n_eff)));
        }
        if self.restarts < 1 {
            return Err(Error::InvalidParameter("restarts must be at least 1".into()));
        }
        if self.max_iters < 1 {
            return Err(Error::InvalidParameter("max_iters must be at least 1".into()));
        }
        if !(self.step_tol >= 0.0) {
            return Err(Error::InvalidParameter(format!("step_tol = {} must be nonnegative", self.step_tol)));
        }
        Ok(())
    }
}

/// Smooth real objective of a real parameter vector.
pub trait SmoothObjective: Sync {
    fn n_params(&self) -> usize;
    fn value(&self, x: &[f64]) -> f64;
    fn gradient(&self, x: &[f64]) -> Vec<f64>;
}

/// `Var_A · Var_B` of the normalized low-block state encoded by `x`.
///
/// `x[2k]`, `x[2k+1]` are the real and imaginary parts of the amplitude at
/// the `k`-th low-block index. Operators act on the full truncated space.
pub struct ProductObjective<'a, T: Real = f64> {
    a: &'a FockOperator<T>,
    b: &'a FockOperator<T>,
    support: Vec<usize>,
}

struct Moments<T> {
    var_a: f64,
    var_b: f64,
    /// `2 ∂F/∂ψ̄` restricted to the support, before tangent projection.
    grad: Option<Vec<C<T>>>,
}

impl<'a, T: Real> ProductObjective<'a, T> {
    pub fn new(a: &'a FockOperator<T>, b: &'a FockOperator<T>, n_block: usize) -> Result<Self> {
        if a.dim() != b.dim() || a.modes() != b.modes() {
            return Err(Error::InvalidDimension("operators differ in dimension".into()));
        }
        for op in [a, b] {
            let deviation = op.hermitian_deviation();
            if deviation > crate::uncertainty::HERMITIAN_TOL {
                return Err(Error::NonHermitianOperator { deviation });
            }
        }
        let n_levels = a.trunc().n_levels;
        if n_block > n_levels {
            return Err(Error::InvalidDimension(format!(
                "search block {n_block} exceeds {n_levels} levels"
            )));
        }
        Ok(ProductObjective {
            a,
            b,
            support: low_indices(a.modes(), n_levels, n_block),
        })
    }

    pub fn support(&self) -> &[usize] {
        &self.support
    }

    /// Full-space unit vector for parameters `x`.
    pub fn embed(&self, x: &[f64]) -> Vec<C<T>> {
        let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        let mut full = vec![C::zero(); self.a.dim()];
        for (k, &i) in self.support.iter().enumerate() {
            full[i] = C::new(T::of(x[2 * k] / norm), T::of(x[2 * k + 1] / norm));
        }
        full
    }

    fn moments(&self, psi: &[C<T>], with_grad: bool) -> Moments<T> {
        let side = |op: &FockOperator<T>| {
            let u = op.apply_to(psi).expect("dimension checked");
            let mean = psi.iter().zip(&u).fold(C::<T>::zero(), |s, (p, q)| s + p.conj() * q).re;
            let sq: T = u.iter().fold(T::zero(), |s, v| s + v.norm_sqr());
            let var = (sq - mean * mean).max(T::zero());
            let g = with_grad.then(|| {
                let uu = op.apply_to(&u).expect("dimension checked");
                let two_m = mean + mean;
                self.support.iter().map(|&i| uu[i] - u[i] * two_m).collect::<Vec<_>>()
            });
            (var, g)
        };
        let (va, ga) = side(self.a);
        let (vb, gb) = side(self.b);
        let grad = match (ga, gb) {
            (Some(ga), Some(gb)) => {
                let two = T::of(2.0);
                Some(ga.iter().zip(&gb).map(|(x, y)| (*x * vb + *y * va) * two).collect())
            }
            _ => None,
        };
        Moments {
            var_a: va.as_f64(),
            var_b: vb.as_f64(),
            grad,
        }
    }
}

impl<'a, T: Real> SmoothObjective for ProductObjective<'a, T> {
    fn n_params(&self) -> usize {
        2 * self.support.len()
    }

    fn value(&self, x: &[f64]) -> f64 {
        let m = self.moments(&self.embed(x), false);
        m.var_a * m.var_b
    }

    fn gradient(&self, x: &[f64]) -> Vec<f64> {
        let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        let psi = self.embed(x);
        let g = self.moments(&psi, true).grad.expect("gradient requested");
        let mut out: Vec<f64> = g.iter().flat_map(|v| [v.re.as_f64(), v.im.as_f64()]).collect();
        // F is invariant under x → s x: remove the radial part and rescale
        let unit: Vec<f64> = x.iter().map(|v| v / norm).collect();
        let radial: f64 = out.iter().zip(&unit).map(|(g, u)| g * u).sum();
        for (g, u) in out.iter_mut().zip(&unit) {
            *g = (*g - radial * u) / norm;
        }
        out
    }
}

/// Result of one minimization.
#[derive(Debug, Clone)]
pub struct MinimizeResult<T: Real = f64> {
    pub state: FockState<T>,
    /// `Δ_A Δ_B` at the minimizer.
    pub value: f64,
    /// `½|⟨C⟩|` at the minimizer.
    pub bound: f64,
    /// Iterations used by the winning restart.
    pub iterations: usize,
    pub restart: usize,
    pub seed: u64,
    pub converged: bool,
}

#[derive(Debug, Clone)]
struct RunOutcome {
    x: Vec<f64>,
    value: f64,
    iterations: usize,
    converged: bool,
}

const MEMORY: usize = 10;

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn normalized(mut v: Vec<f64>) -> Vec<f64> {
    let n = dot(&v, &v).sqrt();
    v.iter_mut().for_each(|x| *x /= n);
    v
}

fn project(g: &mut [f64], x: &[f64]) {
    let r = dot(g, x);
    g.iter_mut().zip(x).for_each(|(g, x)| *g -= r * x);
}

/// L-BFGS on the unit sphere from the starting point `x0`.
fn run_lbfgs(obj: &dyn SmoothObjective, x0: Vec<f64>, max_iters: usize, step_tol: f64) -> RunOutcome {
    let mut x = normalized(x0);
    let mut f = obj.value(&x);
    let mut g = obj.gradient(&x);
    project(&mut g, &x);
    let mut hist: Vec<(Vec<f64>, Vec<f64>, f64)> = Vec::with_capacity(MEMORY);
    for iter in 1..=max_iters {
        let gnorm = dot(&g, &g).sqrt();
        if gnorm == 0.0 || !gnorm.is_finite() {
            return RunOutcome { x, value: f, iterations: iter - 1, converged: gnorm == 0.0 };
        }
        // two-loop recursion
        let mut d: Vec<f64> = g.iter().map(|v| -v).collect();
        let mut alphas = Vec::with_capacity(hist.len());
        for (s, y, rho) in hist.iter().rev() {
            let a = rho * dot(s, &d);
            d.iter_mut().zip(y).for_each(|(d, y)| *d -= a * y);
            alphas.push(a);
        }
        if let Some((s, y, _)) = hist.last() {
            let gamma = dot(s, y) / dot(y, y);
            d.iter_mut().for_each(|v| *v *= gamma);
        } else {
            d.iter_mut().for_each(|v| *v /= gnorm);
        }
        for ((s, y, rho), a) in hist.iter().zip(alphas.into_iter().rev()) {
            let b = rho * dot(y, &d);
            d.iter_mut().zip(s).for_each(|(d, s)| *d += (a - b) * s);
        }
        project(&mut d, &x);
        let mut slope = dot(&g, &d);
        if !(slope < 0.0) {
            hist.clear();
            d = g.iter().map(|v| -v / gnorm).collect();
            slope = -gnorm;
        }
        // Armijo backtracking along the retraction
        let mut step = 1.0;
        let mut accepted = None;
        for _ in 0..60 {
            let trial = normalized(x.iter().zip(&d).map(|(x, d)| x + step * d).collect());
            let ft = obj.value(&trial);
            if ft <= f + 1e-4 * step * slope {
                accepted = Some((trial, ft));
                break;
            }
            step *= 0.5;
        }
        let Some((x_new, f_new)) = accepted else {
            // no decrease representable: stationary to working precision
            return RunOutcome { x, value: f, iterations: iter, converged: true };
        };
        let mut g_new = obj.gradient(&x_new);
        project(&mut g_new, &x_new);
        let s: Vec<f64> = x_new.iter().zip(&x).map(|(a, b)| a - b).collect();
        let y: Vec<f64> = g_new.iter().zip(&g).map(|(a, b)| a - b).collect();
        let sy = dot(&s, &y);
        if sy > 1e-16 * dot(&s, &s).sqrt() * dot(&y, &y).sqrt() && sy > 0.0 {
            if hist.len() == MEMORY {
                hist.remove(0);
            }
            hist.push((s, y, 1.0 / sy));
        }
        let decrease = (f - f_new) / f.abs().max(f64::MIN_POSITIVE);
        x = x_new;
        g = g_new;
        f = f_new;
        if decrease <= step_tol {
            return RunOutcome { x, value: f, iterations: iter, converged: true };
        }
    }
    RunOutcome { x, value: f, iterations: max_iters, converged: false }
}

fn start_point(seed: u64, restart: usize, n: usize) -> Vec<f64> {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(restart as u64);
    (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect()
}

/// Local minimum of `Δ_A Δ_B` over unit vectors on the `n_eff` low block,
/// best over seeded restarts (run in parallel, selected deterministically).
pub fn minimize_product<T: Real>(
    a: &FockOperator<T>,
    b: &FockOperator<T>,
    cfg: &MinimizeConfig,
) -> Result<MinimizeResult<T>> {
    cfg.validate()?;
    let obj = ProductObjective::new(a, b, cfg.n_eff)?;
    let n = obj.n_params();
    let runs: Vec<RunOutcome> = (0..cfg.restarts)
        .into_par_iter()
        .map(|r| run_lbfgs(&obj, start_point(cfg.rng_seed, r, n), cfg.max_iters, cfg.step_tol))
        .collect();
    if runs.iter().all(|r| !r.converged) {
        return Err(Error::NoConvergence {
            max_iters: cfg.max_iters,
            restarts: cfg.restarts,
        });
    }
    let (restart, best) = runs
        .iter()
        .enumerate()
        .filter(|(_, r)| r.converged)
        .min_by(|(i, x), (j, y)| x.value.total_cmp(&y.value).then(i.cmp(j)))
        .expect("at least one converged restart");
    let trunc = *a.trunc();
    let full = obj.embed(&best.x);
    // the search block may extend past the operators' trusted cutoff
    let state_trunc = trunc.with_n_eff(trunc.n_eff.max(cfg.n_eff))?;
    let state = FockState::new(full, state_trunc, a.modes())?;
    let value = dispersion(a, &state)? * dispersion(b, &state)?;
    let bound = heisenberg_bound(a, b, &state)?;
    Ok(MinimizeResult {
        state,
        value,
        bound,
        iterations: best.iterations,
        restart,
        seed: cfg.rng_seed,
        converged: best.converged,
    })
}

/// Max deviation `‖g_fd − g‖_∞ / ‖g‖_∞` between the analytic gradient and
/// central differences with step `h`.
pub fn fd_gradient_check(obj: &dyn SmoothObjective, point: &[f64], h: f64) -> Result<f64> {
    if !(1e-7..=1e-3).contains(&h) {
        return Err(Error::InvalidParameter(format!("h = {h} must lie in [1e-7, 1e-3]")));
    }
    if point.len() != obj.n_params() {
        return Err(Error::InvalidDimension(format!(
            "point has {} coordinates, objective expects {}",
            point.len(),
            obj.n_params()
        )));
    }
    let g = obj.gradient(point);
    let mut x = point.to_vec();
    let mut worst = 0.0f64;
    for k in 0..x.len() {
        let x0 = x[k];
        x[k] = x0 + h;
        let fp = obj.value(&x);
        x[k] = x0 - h;
        let fm = obj.value(&x);
        x[k] = x0;
        worst = worst.max(((fp - fm) / (2.0 * h) - g[k]).abs());
    }
    let scale = g.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    Ok(if scale > 0.0 { worst / scale } else { worst })
}

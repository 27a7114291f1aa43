//! Matrix exponential and exponential action.
//!
//! Dense exponentials use Padé approximants with scaling and squaring
//! (Higham 2005). Two-mode generators of the form `X ⊗ 1 + 1 ⊗ Y` are
//! detected and exponentiated factor by factor. `exp_action` applies
//! `exp(G)` to a vector through a scaled Taylor series and never forms the
//! matrix exponential.

use num_traits::Zero;

use super::matrix::{Csr, Dense, Storage};
use super::operator::{kron, FockOperator};
use super::truncation::Modes;
use crate::error::{Error, Result};
use crate::scalar::{re, Real, C};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpmOptions {
    /// Largest admissible generator norm, measured as `sqrt(|G|_1 |G|_inf)`.
    pub norm_cap: f64,
}

impl Default for ExpmOptions {
    fn default() -> Self {
        ExpmOptions { norm_cap: 50.0 }
    }
}

/// Norm used for the generator cap: `sqrt(|G|_1 |G|_inf)`, an upper bound
/// on the spectral norm.
pub fn generator_norm<T: Real>(g: &FockOperator<T>) -> f64 {
    (g.norm_one() * g.norm_inf()).sqrt()
}

pub fn matrix_exponential<T: Real>(g: &FockOperator<T>) -> Result<FockOperator<T>> {
    matrix_exponential_with(g, &ExpmOptions::default())
}

pub fn matrix_exponential_with<T: Real>(g: &FockOperator<T>, opts: &ExpmOptions) -> Result<FockOperator<T>> {
    if !g.is_finite() {
        return Err(Error::InvalidParameter("generator has non-finite entries".into()));
    }
    let norm = generator_norm(g);
    if norm > opts.norm_cap {
        return Err(Error::GeneratorTooLarge {
            norm,
            cap: opts.norm_cap,
        });
    }
    if g.modes() == Modes::Two {
        if let Some((x, y)) = split_kronecker_sum(g) {
            let ex = FockOperator::from_storage(Storage::Dense(expm_dense(&x)), *g.trunc(), Modes::One);
            let ey = FockOperator::from_storage(Storage::Dense(expm_dense(&y)), *g.trunc(), Modes::One);
            return kron(&ex, &ey);
        }
    }
    Ok(FockOperator::from_storage(
        Storage::Dense(expm_dense(&g.storage)),
        *g.trunc(),
        g.modes(),
    ))
}

/// Decompose `G = X ⊗ 1 + 1 ⊗ Y` if it has that form (to round-off).
fn split_kronecker_sum<T: Real>(g: &FockOperator<T>) -> Option<(Storage<T>, Storage<T>)> {
    let n = g.trunc().n_levels;
    let idx = |a: usize, b: usize| a * n + b;
    let mut x = Dense::zeros(n);
    let mut y = Dense::zeros(n);
    for i in 0..n {
        for j in 0..n {
            if i != j {
                x.data[i * n + j] = g.get(idx(i, 0), idx(j, 0));
                y.data[i * n + j] = g.get(idx(0, i), idx(0, j));
            }
        }
    }
    for k in 0..n {
        y.data[k * n + k] = g.get(idx(0, k), idx(0, k));
    }
    let y00 = y.data[0];
    for k in 0..n {
        x.data[k * n + k] = g.get(idx(k, 0), idx(k, 0)) - y00;
    }
    let id = Csr::identity(n);
    let xs = csr_of(&x);
    let ys = csr_of(&y);
    let sum = Csr::kron(&xs, &id).axpby(re(T::one()), &Csr::kron(&id, &ys), re(T::one()));
    let scale = g.max_abs_entry().max(f64::MIN_POSITIVE);
    let tol = 64.0 * T::epsilon().as_f64() * scale;
    let recon = FockOperator::from_storage(Storage::Sparse(sum), *g.trunc(), Modes::Two);
    match recon.max_abs_diff(g) {
        Ok(d) if d <= tol => Some((Storage::Sparse(xs), Storage::Sparse(ys))),
        _ => None,
    }
}

fn csr_of<T: Real>(d: &Dense<T>) -> Csr<T> {
    let mut trip = Vec::new();
    for i in 0..d.n {
        for (j, &v) in d.row(i).iter().enumerate() {
            if !v.is_zero() {
                trip.push((i, j, v));
            }
        }
    }
    Csr::from_triplets(d.n, trip)
}

const PADE3: [f64; 4] = [120.0, 60.0, 12.0, 1.0];
const PADE5: [f64; 6] = [30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0];
const PADE7: [f64; 8] = [17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0, 1512.0, 56.0, 1.0];
const PADE9: [f64; 10] = [
    17643225600.0,
    8821612800.0,
    2075673600.0,
    302702400.0,
    30270240.0,
    2162160.0,
    110880.0,
    3960.0,
    90.0,
    1.0,
];
const PADE13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];
const THETA: [(usize, f64); 4] = [
    (3, 1.495585217958292e-2),
    (5, 2.539398330063230e-1),
    (7, 9.504178996162932e-1),
    (9, 2.097847961257068e0),
];
const THETA13: f64 = 5.371920351148152;

fn one_norm<T: Real>(a: &Storage<T>) -> f64 {
    let mut cols = vec![0.0f64; a.n()];
    a.for_each_entry(|_, j, v| cols[j] += v.norm().as_f64());
    cols.into_iter().fold(0.0, f64::max)
}

/// `sum_k c_k P_k + c_id I`.
fn combo<T: Real>(terms: &[(f64, &Storage<T>)], c_id: f64) -> Storage<T> {
    let n = terms[0].1.n();
    let mut out = Storage::Sparse(Csr::identity(n)).map(|v| v * T::of(c_id));
    for &(c, m) in terms {
        out = out.axpby(re(T::one()), m, re(T::of(c)));
    }
    out
}

// Powers stay sparse for banded generators, so only the solve and the
// squarings run on dense matrices.
fn pade_low<T: Real>(a: &Storage<T>, b: &[f64]) -> (Storage<T>, Storage<T>) {
    let a2 = a.matmul(a);
    let mut powers = vec![a2.clone()];
    let m = b.len() - 1;
    for _ in 1..m / 2 {
        let next = powers.last().unwrap().matmul(&a2);
        powers.push(next);
    }
    // powers[k] = A^(2k+2)
    let odd: Vec<(f64, &Storage<T>)> = (0..m / 2).map(|k| (b[2 * k + 3], &powers[k])).collect();
    let even: Vec<(f64, &Storage<T>)> = (0..m / 2).map(|k| (b[2 * k + 2], &powers[k])).collect();
    let u = a.matmul(&combo(&odd, b[1]));
    let v = combo(&even, b[0]);
    (u, v)
}

fn pade13<T: Real>(a: &Storage<T>) -> (Storage<T>, Storage<T>) {
    let b = &PADE13;
    let a2 = a.matmul(a);
    let a4 = a2.matmul(&a2);
    let a6 = a4.matmul(&a2);
    let inner_u = a6.matmul(&combo(&[(b[13], &a6), (b[11], &a4), (b[9], &a2)], 0.0));
    let u = a.matmul(&combo(
        &[(1.0, &inner_u), (b[7], &a6), (b[5], &a4), (b[3], &a2)],
        b[1],
    ));
    let inner_v = a6.matmul(&combo(&[(b[12], &a6), (b[10], &a4), (b[8], &a2)], 0.0));
    let v = combo(&[(1.0, &inner_v), (b[6], &a6), (b[4], &a4), (b[2], &a2)], b[0]);
    (u, v)
}

pub(crate) fn expm_dense<T: Real>(a: &Storage<T>) -> Dense<T> {
    let norm = one_norm(a);
    if norm == 0.0 {
        return Dense::identity(a.n());
    }
    let (scaled, s, pade) = match THETA.iter().find(|(_, th)| norm <= *th) {
        Some(&(m, _)) => (a.clone(), 0u32, m),
        None => {
            let s = (norm / THETA13).log2().ceil().max(0.0) as u32;
            let f = T::of(0.5f64.powi(s as i32));
            (a.map(|v| v * f), s, 13)
        }
    };
    let (u, v) = match pade {
        3 => pade_low(&scaled, &PADE3),
        5 => pade_low(&scaled, &PADE5),
        7 => pade_low(&scaled, &PADE7),
        9 => pade_low(&scaled, &PADE9),
        _ => pade13(&scaled),
    };
    let p = v.axpby(re(T::one()), &u, re(T::one())).to_dense();
    let q = v.axpby(re(T::one()), &u, re(-T::one())).to_dense();
    let mut r = q.solve(&p).expect("Padé denominator is nonsingular for scaled generators");
    for _ in 0..s {
        r = r.matmul(&r);
    }
    r
}

/// `exp(G) v` without forming `exp(G)`.
///
/// The series is split into `s = ceil(|G|_1)` steps so each step has unit
/// norm, and every step is summed until the terms fall below round-off.
pub fn exp_action<T: Real>(g: &FockOperator<T>, v: &[C<T>]) -> Result<Vec<C<T>>> {
    if v.len() != g.dim() {
        return Err(Error::InvalidDimension(format!(
            "vector length {} does not match operator dimension {}",
            v.len(),
            g.dim()
        )));
    }
    if !g.is_finite() {
        return Err(Error::InvalidParameter("generator has non-finite entries".into()));
    }
    let norm = g.norm_one();
    let steps = norm.ceil().max(1.0) as usize;
    let inv_steps = T::of(1.0 / steps as f64);
    let eps = T::epsilon();
    let n = v.len();
    let mut out = v.to_vec();
    let mut term = vec![C::zero(); n];
    let mut next = vec![C::zero(); n];
    for _ in 0..steps {
        term.copy_from_slice(&out);
        let mut prev_small = false;
        for k in 1..=60usize {
            g.storage.matvec(&term, &mut next);
            let f = inv_steps / T::of(k as f64);
            let mut tnorm = T::zero();
            let mut anorm = T::zero();
            for ((t, &x), o) in term.iter_mut().zip(&next).zip(out.iter_mut()) {
                *t = x * f;
                *o += *t;
                tnorm += t.norm_sqr();
                anorm += o.norm_sqr();
            }
            let small = tnorm <= eps * eps * anorm;
            if small && prev_small {
                break;
            }
            prev_small = small;
        }
    }
    Ok(out)
}

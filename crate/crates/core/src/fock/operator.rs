use std::ops::{Add, Mul, Neg, Sub};

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::matrix::{Csr, Dense, Storage};
use super::truncation::{low_indices, Modes, Truncation};
use crate::error::{Error, Result};
use crate::scalar::{re, Real, C};

/// Square complex matrix on the truncated one- or two-mode Fock space.
///
/// Polynomials in ladder operators are kept sparse internally; products
/// with exponentials are dense. The storage choice is invisible through
/// the public API.
#[derive(Debug, Clone)]
pub struct FockOperator<T: Real = f64> {
    pub(crate) storage: Storage<T>,
    trunc: Truncation,
    modes: Modes,
}

impl<T: Real> FockOperator<T> {
    pub(crate) fn from_storage(storage: Storage<T>, trunc: Truncation, modes: Modes) -> Self {
        debug_assert_eq!(storage.n(), modes.dim(trunc.n_levels));
        FockOperator {
            storage: storage.normalized(),
            trunc,
            modes,
        }
    }

    pub fn zeros(trunc: Truncation, modes: Modes) -> Self {
        let n = modes.dim(trunc.n_levels);
        Self::from_storage(Storage::Sparse(Csr::zeros(n)), trunc, modes)
    }

    pub fn identity(trunc: Truncation, modes: Modes) -> Self {
        let n = modes.dim(trunc.n_levels);
        Self::from_storage(Storage::Sparse(Csr::identity(n)), trunc, modes)
    }

    /// Build from row-major entries.
    pub fn from_entries(trunc: Truncation, modes: Modes, entries: Vec<C<T>>) -> Result<Self> {
        let n = modes.dim(trunc.n_levels);
        if entries.len() != n * n {
            return Err(Error::InvalidDimension(format!(
                "expected {} entries for a {n}x{n} operator, got {}",
                n * n,
                entries.len()
            )));
        }
        if entries.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::InvalidParameter("operator entries must be finite".into()));
        }
        Ok(Self::from_storage(Storage::Dense(Dense { n, data: entries }), trunc, modes))
    }

    /// Build from `(row, col, value)` triplets; duplicates are summed.
    pub fn from_triplets(trunc: Truncation, modes: Modes, triplets: Vec<(usize, usize, C<T>)>) -> Result<Self> {
        let n = modes.dim(trunc.n_levels);
        if let Some(&(i, j, _)) = triplets.iter().find(|(i, j, _)| *i >= n || *j >= n) {
            return Err(Error::InvalidDimension(format!("entry ({i}, {j}) outside {n}x{n}")));
        }
        Ok(Self::from_storage(Storage::Sparse(Csr::from_triplets(n, triplets)), trunc, modes))
    }

    pub fn dim(&self) -> usize {
        self.storage.n()
    }

    pub fn trunc(&self) -> &Truncation {
        &self.trunc
    }

    pub fn modes(&self) -> Modes {
        self.modes
    }

    /// Same matrix, relabelled with a different trusted cutoff.
    pub fn with_trunc(mut self, trunc: Truncation) -> Result<Self> {
        if trunc.n_levels != self.trunc.n_levels {
            return Err(Error::InvalidDimension(format!(
                "cannot relabel {} levels as {}",
                self.trunc.n_levels, trunc.n_levels
            )));
        }
        trunc.validate()?;
        self.trunc = trunc;
        Ok(self)
    }

    pub fn get(&self, i: usize, j: usize) -> C<T> {
        self.storage.get(i, j)
    }

    /// Dense row-major copy of all entries.
    pub fn entries(&self) -> Vec<C<T>> {
        self.storage.to_dense().data
    }

    pub fn is_dense(&self) -> bool {
        self.storage.is_dense()
    }

    pub fn is_finite(&self) -> bool {
        let mut ok = true;
        self.storage.for_each_entry(|_, _, v| ok &= v.re.is_finite() && v.im.is_finite());
        ok
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.dim() != other.dim() || self.modes != other.modes {
            return Err(Error::InvalidDimension(format!(
                "operator dimensions differ: {} vs {}",
                self.dim(),
                other.dim()
            )));
        }
        Ok(())
    }

    fn wrap(&self, storage: Storage<T>) -> Self {
        Self::from_storage(storage, self.trunc, self.modes)
    }

    pub fn adjoint(&self) -> Self {
        self.wrap(self.storage.adjoint())
    }

    pub fn scale(&self, s: C<T>) -> Self {
        self.wrap(self.storage.map(|v| v * s))
    }

    pub fn scale_real(&self, s: T) -> Self {
        self.scale(re(s))
    }

    /// `alpha * self + beta * other`.
    pub fn lin_comb(&self, alpha: C<T>, other: &Self, beta: C<T>) -> Result<Self> {
        self.check_same(other)?;
        Ok(self.wrap(self.storage.axpby(alpha, &other.storage, beta)))
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.lin_comb(C::new(T::one(), T::zero()), other, C::new(T::one(), T::zero()))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.lin_comb(C::new(T::one(), T::zero()), other, C::new(-T::one(), T::zero()))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(self.wrap(self.storage.matmul(&other.storage)))
    }

    /// Matrix-vector product.
    pub fn apply_to(&self, v: &[C<T>]) -> Result<Vec<C<T>>> {
        if v.len() != self.dim() {
            return Err(Error::InvalidDimension(format!(
                "vector length {} does not match operator dimension {}",
                v.len(),
                self.dim()
            )));
        }
        let mut out = vec![C::zero(); v.len()];
        self.storage.matvec(v, &mut out);
        Ok(out)
    }

    pub fn max_abs_entry(&self) -> f64 {
        let mut m = 0.0f64;
        self.storage.for_each_entry(|_, _, v| m = m.max(v.norm().as_f64()));
        m
    }

    /// Max-entry deviation `max |self - other|`.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        Ok(self.try_sub(other)?.max_abs_entry())
    }

    /// Max-entry deviation from the conjugate transpose.
    pub fn hermitian_deviation(&self) -> f64 {
        let d = match &self.storage {
            Storage::Sparse(s) => Storage::Sparse(s.axpby(re(T::one()), &s.adjoint(), re(-T::one()))),
            Storage::Dense(d) => Storage::Dense(d.axpby(re(T::one()), &d.adjoint(), re(-T::one()))),
        };
        let mut m = 0.0f64;
        d.for_each_entry(|_, _, v| m = m.max(v.norm().as_f64()));
        m
    }

    /// Maximum absolute column sum.
    pub fn norm_one(&self) -> f64 {
        let mut cols = vec![0.0f64; self.dim()];
        self.storage.for_each_entry(|_, j, v| cols[j] += v.norm().as_f64());
        cols.into_iter().fold(0.0, f64::max)
    }

    /// Maximum absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        let mut rows = vec![0.0f64; self.dim()];
        self.storage.for_each_entry(|i, _, v| rows[i] += v.norm().as_f64());
        rows.into_iter().fold(0.0, f64::max)
    }

    pub fn trace(&self) -> C<T> {
        (0..self.dim()).fold(C::zero(), |acc, i| acc + self.get(i, i))
    }

    /// `P A P` with `P` projecting every mode onto levels `< n_eff`.
    pub fn project_low(&self, n_eff: usize) -> Self {
        let keep = self.low_mask(n_eff);
        let n = self.dim();
        let mut trip = Vec::new();
        self.storage.for_each_entry(|i, j, v| {
            if keep[i] && keep[j] && !v.is_zero() {
                trip.push((i, j, v));
            }
        });
        self.wrap(Storage::Sparse(Csr::from_triplets(n, trip)))
    }

    fn low_mask(&self, n_block: usize) -> Vec<bool> {
        let mut keep = vec![false; self.dim()];
        for i in low_indices(self.modes, self.trunc.n_levels, n_block) {
            keep[i] = true;
        }
        keep
    }

    /// Row-major entries of the low block (levels `< n_block` in every mode).
    pub fn low_block(&self, n_block: usize) -> Vec<C<T>> {
        let idx = low_indices(self.modes, self.trunc.n_levels, n_block);
        let mut out = Vec::with_capacity(idx.len() * idx.len());
        for &i in &idx {
            for &j in &idx {
                out.push(self.get(i, j));
            }
        }
        out
    }

    /// Max-entry deviation between two operators restricted to the low block.
    pub fn low_block_diff(&self, other: &Self, n_block: usize) -> Result<f64> {
        self.check_same(other)?;
        Ok(max_diff(&self.low_block(n_block), &other.low_block(n_block)))
    }

    /// Max-entry deviation of the low block from `s * identity`.
    pub fn low_block_dev_from_scalar(&self, s: C<T>, n_block: usize) -> f64 {
        let idx = low_indices(self.modes, self.trunc.n_levels, n_block);
        let mut m = 0.0f64;
        for (p, &i) in idx.iter().enumerate() {
            for (q, &j) in idx.iter().enumerate() {
                let target = if p == q { s } else { C::zero() };
                m = m.max((self.get(i, j) - target).norm().as_f64());
            }
        }
        m
    }
}

impl<T: Real> PartialEq for FockOperator<T> {
    /// Entrywise equality of the represented matrices.
    fn eq(&self, other: &Self) -> bool {
        if self.dim() != other.dim() || self.modes != other.modes || self.trunc != other.trunc {
            return false;
        }
        match (&self.storage, &other.storage) {
            (Storage::Dense(a), Storage::Dense(b)) => a.data == b.data,
            _ => {
                let mut same = true;
                self.storage.for_each_entry(|i, j, v| same &= other.get(i, j) == v);
                other.storage.for_each_entry(|i, j, v| same &= self.get(i, j) == v);
                same
            }
        }
    }
}

pub(crate) fn max_diff<T: Real>(a: &[C<T>], b: &[C<T>]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (*x - *y).norm().as_f64())
        .fold(0.0, f64::max)
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $inner:ident) => {
        impl<'a, T: Real> $tr<&'a FockOperator<T>> for &'a FockOperator<T> {
            type Output = FockOperator<T>;

            /// Panics on dimension mismatch; use the `try_` method to handle it.
            fn $method(self, rhs: &'a FockOperator<T>) -> FockOperator<T> {
                self.$inner(rhs).expect("operator dimensions differ")
            }
        }
    };
}

forward_binop!(Add, add, try_add);
forward_binop!(Sub, sub, try_sub);
forward_binop!(Mul, mul, try_mul);

impl<T: Real> Neg for &FockOperator<T> {
    type Output = FockOperator<T>;

    fn neg(self) -> FockOperator<T> {
        self.scale_real(-T::one())
    }
}

/// Single-mode lowering operator with the default trusted cutoff.
pub fn build_ladder<T: Real>(n_levels: usize) -> Result<FockOperator<T>> {
    if n_levels < 2 {
        return Err(Error::InvalidDimension(format!("n_levels = {n_levels} must be at least 2")));
    }
    ladder(Truncation::with_levels(n_levels)?)
}

/// Single-mode lowering operator on the given truncation.
pub fn ladder<T: Real>(trunc: Truncation) -> Result<FockOperator<T>> {
    let n = trunc.n_levels;
    if n < 2 {
        return Err(Error::InvalidDimension(format!("n_levels = {n} must be at least 2")));
    }
    let trip = (0..n - 1)
        .map(|k| (k, k + 1, re(T::of(((k + 1) as f64).sqrt()))))
        .collect();
    FockOperator::from_triplets(trunc, Modes::One, trip)
}

/// Embed a single-mode operator on mode 1 (first tensor factor) or mode 2.
pub fn embed_mode<T: Real>(op: &FockOperator<T>, mode: usize) -> Result<FockOperator<T>> {
    if op.modes() != Modes::One {
        return Err(Error::InvalidDimension("embed_mode expects a single-mode operator".into()));
    }
    let n = op.trunc().n_levels;
    let id = Csr::<T>::identity(n);
    let storage = match (&op.storage, mode) {
        (Storage::Sparse(s), 1) => Storage::Sparse(Csr::kron(s, &id)),
        (Storage::Sparse(s), 2) => Storage::Sparse(Csr::kron(&id, s)),
        (Storage::Dense(d), 1) => Storage::Sparse(Csr::kron(&dense_to_csr(d), &id)),
        (Storage::Dense(d), 2) => Storage::Sparse(Csr::kron(&id, &dense_to_csr(d))),
        _ => return Err(Error::InvalidParameter(format!("mode must be 1 or 2, got {mode}"))),
    };
    Ok(FockOperator::from_storage(storage, *op.trunc(), Modes::Two))
}

/// Kronecker product `a ⊗ b` of two single-mode operators.
pub fn kron<T: Real>(a: &FockOperator<T>, b: &FockOperator<T>) -> Result<FockOperator<T>> {
    if a.modes() != Modes::One || b.modes() != Modes::One || a.dim() != b.dim() {
        return Err(Error::InvalidDimension("kron expects two single-mode operators of equal size".into()));
    }
    let storage = match (&a.storage, &b.storage) {
        (Storage::Sparse(x), Storage::Sparse(y)) => Storage::Sparse(Csr::kron(x, y)),
        (x, y) => Storage::Dense(Dense::kron(&x.to_dense(), &y.to_dense())),
    };
    Ok(FockOperator::from_storage(storage, *a.trunc(), Modes::Two))
}

fn dense_to_csr<T: Real>(d: &Dense<T>) -> Csr<T> {
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

/// `[A, B] = AB - BA`.
pub fn commutator<T: Real>(a: &FockOperator<T>, b: &FockOperator<T>) -> Result<FockOperator<T>> {
    a.try_mul(b)?.try_sub(&b.try_mul(a)?)
}

/// Low block of `L M R`, computed from the needed rows of `L` and columns
/// of `R` only.
pub fn sandwich_low_block<T: Real>(
    l: &FockOperator<T>,
    m: &FockOperator<T>,
    r: &FockOperator<T>,
    n_block: usize,
) -> Result<Vec<C<T>>> {
    l.check_same(m)?;
    m.check_same(r)?;
    let idx = low_indices(l.modes(), l.trunc().n_levels, n_block);
    let n = l.dim();
    let mut out = vec![C::zero(); idx.len() * idx.len()];
    let mut col = vec![C::zero(); n];
    let mut mcol = vec![C::zero(); n];
    for (q, &j) in idx.iter().enumerate() {
        for (k, c) in col.iter_mut().enumerate() {
            *c = r.get(k, j);
        }
        m.storage.matvec(&col, &mut mcol);
        for (p, &i) in idx.iter().enumerate() {
            let mut s = C::zero();
            match &l.storage {
                Storage::Dense(d) => {
                    for (&a, &b) in d.row(i).iter().zip(&mcol) {
                        s += a * b;
                    }
                }
                Storage::Sparse(sp) => {
                    let (cols, vals) = sp.row(i);
                    for (&k, &a) in cols.iter().zip(vals) {
                        s += a * mcol[k];
                    }
                }
            }
            out[p * idx.len() + q] = s;
        }
    }
    Ok(out)
}

/// JSON encoding `{dim, trunc, entries}` with row-major `[re, im]` pairs.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OperatorJson {
    pub dim: usize,
    pub trunc: Truncation,
    pub entries: Vec<[f64; 2]>,
}

impl<T: Real> FockOperator<T> {
    pub fn to_json(&self) -> OperatorJson {
        OperatorJson {
            dim: self.dim(),
            trunc: self.trunc,
            entries: self
                .entries()
                .into_iter()
                .map(|v| [v.re.as_f64(), v.im.as_f64()])
                .collect(),
        }
    }

    pub fn from_json(j: &OperatorJson) -> Result<Self> {
        let modes = if j.dim == j.trunc.n_levels {
            Modes::One
        } else if j.dim == j.trunc.two_mode_dim() {
            Modes::Two
        } else {
            return Err(Error::InvalidDimension(format!(
                "dim {} is neither n_levels nor n_levels^2 for n_levels = {}",
                j.dim, j.trunc.n_levels
            )));
        };
        let entries = j.entries.iter().map(|p| C::new(T::of(p[0]), T::of(p[1]))).collect();
        Self::from_entries(j.trunc, modes, entries)
    }
}

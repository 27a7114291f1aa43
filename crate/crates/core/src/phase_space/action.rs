use std::collections::HashMap;

use num_traits::Zero;

use crate::error::Result;
use crate::fock::{exp_action, inner, levels_of, low_indices, FockOperator, Modes};
use crate::scalar::{Real, C};

/// `W = exp(G)` known only through its action on low-block basis vectors.
///
/// Gives the same resolved block and conjugated low blocks as the dense
/// unitary, at the cost of one exponential action per basis vector touched.
pub struct UnitaryAction<'a, T: Real = f64> {
    g: &'a FockOperator<T>,
    gd: FockOperator<T>,
    fwd: HashMap<usize, Vec<C<T>>>,
    back: HashMap<usize, Vec<C<T>>>,
}

impl<'a, T: Real> UnitaryAction<'a, T> {
    pub fn new(g: &'a FockOperator<T>) -> Self {
        UnitaryAction {
            g,
            gd: g.adjoint(),
            fwd: HashMap::new(),
            back: HashMap::new(),
        }
    }

    fn basis(&self, j: usize) -> Vec<C<T>> {
        let mut e = vec![C::zero(); self.g.dim()];
        e[j] = C::new(T::one(), T::zero());
        e
    }

    /// `W e_j`.
    pub fn forward(&mut self, j: usize) -> Result<&[C<T>]> {
        if !self.fwd.contains_key(&j) {
            let v = exp_action(self.g, &self.basis(j))?;
            self.fwd.insert(j, v);
        }
        Ok(&self.fwd[&j])
    }

    /// `W† e_j`.
    pub fn backward(&mut self, j: usize) -> Result<&[C<T>]> {
        if !self.back.contains_key(&j) {
            let v = exp_action(&self.gd, &self.basis(j))?;
            self.back.insert(j, v);
        }
        Ok(&self.back[&j])
    }

    /// Same rule as [`super::resolved_levels`].
    pub fn resolved_levels(&mut self, n_max: usize, edge_tol: f64) -> Result<usize> {
        let nl = self.g.trunc().n_levels;
        let modes = self.g.modes();
        let on_top = |k: usize| {
            let (a, b) = levels_of(modes, nl, k);
            a == nl - 1 || (modes == Modes::Two && b == nl - 1)
        };
        let top: Vec<usize> = (0..self.g.dim()).filter(|&k| on_top(k)).collect();
        let mut n = 1;
        while n < n_max.min(nl) {
            let next = n + 1;
            let fresh: Vec<usize> = low_indices(modes, nl, next)
                .into_iter()
                .filter(|&j| {
                    let (a, b) = levels_of(modes, nl, j);
                    a == n || (modes == Modes::Two && b == n)
                })
                .collect();
            let mut ok = true;
            for j in fresh {
                let f = top.iter().map(|&k| self.forward(j).map(|v| v[k].norm_sqr().as_f64()));
                let edge_f = f.collect::<Result<Vec<_>>>()?.into_iter().fold(0.0, f64::max);
                let b = top.iter().map(|&k| self.backward(j).map(|v| v[k].norm_sqr().as_f64()));
                let edge_b = b.collect::<Result<Vec<_>>>()?.into_iter().fold(0.0, f64::max);
                if edge_f.max(edge_b) > edge_tol {
                    ok = false;
                    break;
                }
            }
            if !ok {
                break;
            }
            n = next;
        }
        Ok(n)
    }

    /// Row-major low block of `W M W†`, from `⟨W† e_i| M |W† e_j⟩`.
    pub fn conjugate_low_block(&mut self, m: &FockOperator<T>, n_block: usize) -> Result<Vec<C<T>>> {
        let idx = low_indices(self.g.modes(), self.g.trunc().n_levels, n_block);
        let mut images = Vec::with_capacity(idx.len());
        for &j in &idx {
            let y = self.backward(j)?.to_vec();
            images.push((m.apply_to(&y)?, y));
        }
        let mut out = vec![C::zero(); idx.len() * idx.len()];
        for (p, (_, yi)) in images.iter().enumerate() {
            for (q, (my, _)) in images.iter().enumerate() {
                out[p * idx.len() + q] = inner(yi, my)?;
            }
        }
        Ok(out)
    }

    /// `max |⟨W† e_i | W† e_j⟩ − δ_ij|` over the low block.
    pub fn unitarity_defect(&mut self, n_block: usize) -> Result<f64> {
        let idx = low_indices(self.g.modes(), self.g.trunc().n_levels, n_block);
        let mut cols = Vec::with_capacity(idx.len());
        for &j in &idx {
            cols.push(self.backward(j)?.to_vec());
        }
        let mut worst = 0.0f64;
        for (p, u) in cols.iter().enumerate() {
            for (q, v) in cols.iter().enumerate() {
                let d = if p == q { 1.0 } else { 0.0 };
                let g = inner(u, v)?;
                worst = worst.max((C::new(g.re.as_f64(), g.im.as_f64()) - C::new(d, 0.0)).norm());
            }
        }
        Ok(worst)
    }
}

use serde::{Deserialize, Serialize};

use crate::fock::{levels_of, low_indices, FockOperator, Modes};
use crate::scalar::Real;

/// Parameter caps that keep displaced and squeezed states inside the
/// truncation.
///
/// A state obtained from levels `< n` by a squeeze of magnitude `r` and a
/// displacement `z` stays resolved as long as
/// `e^{2|r|} (|z| + sqrt(n))² ≤ n_levels / 4`. The defaults are calibrated
/// at 32 levels and scale with the truncation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Caps {
    pub z_cap: f64,
    pub xi_min: f64,
    pub xi_max: f64,
    pub r_cap: f64,
}

impl Caps {
    pub fn for_levels(n_levels: usize) -> Caps {
        let s = n_levels as f64 / 32.0;
        Caps {
            z_cap: 3.0 * s.sqrt(),
            xi_min: 0.25 / s,
            xi_max: 4.0 * s,
            r_cap: 1.5 + 0.5 * s.ln(),
        }
    }
}

/// Default edge population accepted by [`resolved_levels`].
pub const EDGE_TOL: f64 = 1e-10;

/// Largest block size `n ≤ n_max` on which identities conjugated by the
/// unitary `w` are resolved by the truncation.
///
/// A block is resolved when, for every basis vector `e_j` in it, both
/// `w e_j` and `w† e_j` put at most `edge_tol` population on the top level of
/// either mode. Conjugation errors scale like that edge population. Never
/// below 1.
pub fn resolved_levels<T: Real>(w: &FockOperator<T>, n_max: usize, edge_tol: f64) -> usize {
    let nl = w.trunc().n_levels;
    let modes = w.modes();
    let top: Vec<usize> = (0..w.dim())
        .filter(|&k| {
            let (a, b) = levels_of(modes, nl, k);
            a == nl - 1 || (modes == Modes::Two && b == nl - 1)
        })
        .collect();
    let edge = |j: usize| {
        top.iter()
            .map(|&k| w.get(k, j).norm_sqr().as_f64().max(w.get(j, k).norm_sqr().as_f64()))
            .fold(0.0, f64::max)
    };
    let mut n = 1;
    while n < n_max.min(nl) {
        let next = n + 1;
        // basis vectors added when the block grows from n to n + 1 levels
        let fresh = low_indices(modes, nl, next)
            .into_iter()
            .filter(|&j| {
                let (a, b) = levels_of(modes, nl, j);
                a == n || (modes == Modes::Two && b == n)
            })
            .collect::<Vec<_>>();
        if fresh.iter().any(|&j| edge(j) > edge_tol) {
            break;
        }
        n = next;
    }
    n
}

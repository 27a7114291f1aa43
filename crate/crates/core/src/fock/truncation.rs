use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Finite cutoff of the per-mode Fock ladder.
///
/// `n_levels` is the number of retained levels per mode. Operator identities
/// are only asserted on the trusted subspace of levels `< n_eff`, and states
/// may carry at most `tail_tol` population at or above `n_eff` in either mode.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Truncation {
    pub n_levels: usize,
    pub n_eff: usize,
    pub tail_tol: f64,
}

impl Default for Truncation {
    fn default() -> Self {
        Truncation {
            n_levels: 32,
            n_eff: 16,
            tail_tol: 1e-8,
        }
    }
}

impl Truncation {
    pub fn new(n_levels: usize, n_eff: usize, tail_tol: f64) -> Result<Self> {
        let t = Truncation {
            n_levels,
            n_eff,
            tail_tol,
        };
        t.validate()?;
        Ok(t)
    }

    /// Truncation with the default trusted fraction (half the levels).
    pub fn with_levels(n_levels: usize) -> Result<Self> {
        Self::new(n_levels, (n_levels / 2).max(1), 1e-8)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_levels == 0 {
            return Err(Error::InvalidDimension("n_levels must be positive".into()));
        }
        if self.n_eff == 0 || self.n_eff > self.n_levels {
            return Err(Error::InvalidDimension(format!(
                "n_eff = {} must lie in 1..={}",
                self.n_eff, self.n_levels
            )));
        }
        if !(0.0..1.0).contains(&self.tail_tol) {
            return Err(Error::InvalidParameter(format!(
                "tail_tol = {} must lie in [0, 1)",
                self.tail_tol
            )));
        }
        Ok(())
    }

    /// Dimension of the two-mode space.
    pub fn two_mode_dim(&self) -> usize {
        self.n_levels * self.n_levels
    }

    pub fn with_n_eff(mut self, n_eff: usize) -> Result<Self> {
        self.n_eff = n_eff;
        self.validate()?;
        Ok(self)
    }
}

/// Number of bosonic modes an operator or state acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Modes {
    One,
    Two,
}

impl Modes {
    pub fn dim(self, n_levels: usize) -> usize {
        match self {
            Modes::One => n_levels,
            Modes::Two => n_levels * n_levels,
        }
    }
}

/// Basis indices of the low block (levels `< n_block` in every mode), in
/// ascending order. Two-mode indices are `n1 * n_levels + n2`.
pub fn low_indices(modes: Modes, n_levels: usize, n_block: usize) -> Vec<usize> {
    let nb = n_block.min(n_levels);
    match modes {
        Modes::One => (0..nb).collect(),
        Modes::Two => (0..nb)
            .flat_map(|n1| (0..nb).map(move |n2| n1 * n_levels + n2))
            .collect(),
    }
}

/// Occupation numbers of a basis index.
#[inline]
pub fn levels_of(modes: Modes, n_levels: usize, index: usize) -> (usize, usize) {
    match modes {
        Modes::One => (index, 0),
        Modes::Two => (index / n_levels, index % n_levels),
    }
}

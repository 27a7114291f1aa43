//! Time-dependent deformation functions `f(t)` of the Newton–Hooke
//! noncommutative space-times and their flat (`τ → ∞`) limits.
//!
//! | kind | NH₊ / NH₋                      | flat   |
//! |------|--------------------------------|--------|
//! | K1   | `κ C±²(t/τ)`                   | `κ`    |
//! | K2   | `κ τ² S±²(t/τ)`                | `κ t²` |
//! | K3   | `4κ τ⁴ (C±(t/τ) − 1)²`         | `κ t⁴` |
//!
//! with `C± = cosh / cos` and `S± = sinh / sin`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Ratio of the `f_min` guard to `ħ`.
pub const F_MIN_FACTOR: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Kind {
    K1,
    K2,
    K3,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Branch {
    #[serde(rename = "NHplus")]
    NhPlus,
    #[serde(rename = "NHminus")]
    NhMinus,
    Flat,
}

impl Kind {
    pub const ALL: [Kind; 3] = [Kind::K1, Kind::K2, Kind::K3];
}

impl Branch {
    pub const ALL: [Branch; 3] = [Branch::NhPlus, Branch::NhMinus, Branch::Flat];
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DeformationParams {
    pub kind: Kind,
    pub branch: Branch,
    pub kappa: f64,
    #[serde(default = "one")]
    pub tau: f64,
    #[serde(default = "one")]
    pub hbar: f64,
}

impl Default for DeformationParams {
    fn default() -> Self {
        DeformationParams {
            kind: Kind::K1,
            branch: Branch::Flat,
            kappa: 1.0,
            tau: 1.0,
            hbar: 1.0,
        }
    }
}

impl DeformationParams {
    pub fn new(kind: Kind, branch: Branch, kappa: f64, tau: f64, hbar: f64) -> Result<Self> {
        let p = DeformationParams {
            kind,
            branch,
            kappa,
            tau,
            hbar,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::InvalidParameter(format!("{name} = {v} must be positive and finite")))
            }
        };
        positive("kappa", self.kappa)?;
        positive("hbar", self.hbar)?;
        if self.branch != Branch::Flat {
            positive("tau", self.tau)?;
        }
        Ok(())
    }

    /// Deformation `f(t)`.
    pub fn f_value(&self, t: f64) -> f64 {
        match self.branch {
            Branch::Flat => self.flat_value(t),
            Branch::NhPlus | Branch::NhMinus => {
                let x = t / self.tau;
                let plus = self.branch == Branch::NhPlus;
                match self.kind {
                    Kind::K1 => {
                        let c = if plus { x.cosh() } else { x.cos() };
                        self.kappa * c * c
                    }
                    Kind::K2 => {
                        let s = if plus { x.sinh() } else { x.sin() };
                        self.kappa * self.tau.powi(2) * s * s
                    }
                    Kind::K3 => {
                        // C - 1 = ±2 S²(x/2), free of cancellation near t = 0
                        let h = if plus { (0.5 * x).sinh() } else { (0.5 * x).sin() };
                        16.0 * self.kappa * self.tau.powi(4) * h.powi(4)
                    }
                }
            }
        }
    }

    /// Flat-branch value `κ`, `κ t²` or `κ t⁴`.
    pub fn flat_value(&self, t: f64) -> f64 {
        match self.kind {
            Kind::K1 => self.kappa,
            Kind::K2 => self.kappa * t * t,
            Kind::K3 => self.kappa * t.powi(4),
        }
    }

    /// `|f(t) − f_flat(t)|` for the same kind and scale.
    pub fn flat_limit_residual(&self, t: f64) -> f64 {
        (self.f_value(t) - self.flat_value(t)).abs()
    }

    /// Smallest admissible `f` for constructions that divide by `f`.
    pub fn f_min(&self) -> f64 {
        F_MIN_FACTOR * self.hbar
    }

    pub fn with_branch(mut self, branch: Branch) -> Self {
        self.branch = branch;
        self
    }

    pub fn with_tau(mut self, tau: f64) -> Self {
        self.tau = tau;
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn p(kind: Kind, branch: Branch) -> DeformationParams {
        DeformationParams::new(kind, branch, 1.0, 1.0, 1.0).unwrap()
    }

    #[test]
    fn point_values() {
        assert_eq!(p(Kind::K1, Branch::NhPlus).f_value(0.0), 1.0);
        for b in Branch::ALL {
            assert_eq!(p(Kind::K2, b).f_value(0.0), 0.0);
            assert_eq!(p(Kind::K3, b).f_value(0.0), 0.0);
        }
        assert!((p(Kind::K3, Branch::NhMinus).f_value(PI) - 16.0).abs() < 1e-12);
        assert!(p(Kind::K1, Branch::NhMinus).f_value(PI / 2.0) < 1e-12);
    }

    #[test]
    fn k3_matches_textbook_form() {
        for &t in &[0.3f64, 1.0, 2.5] {
            let direct = 4.0 * (t.cosh() - 1.0f64).powi(2);
            assert!((p(Kind::K3, Branch::NhPlus).f_value(t) - direct).abs() < 1e-12 * direct.max(1.0));
            let direct = 4.0 * (t.cos() - 1.0f64).powi(2);
            assert!((p(Kind::K3, Branch::NhMinus).f_value(t) - direct).abs() < 1e-12);
        }
    }

    #[test]
    fn flat_residuals() {
        assert_eq!(p(Kind::K1, Branch::NhPlus).with_tau(7.0).flat_limit_residual(0.0), 0.0);
        let k2 = p(Kind::K2, Branch::NhPlus).with_tau(1e3);
        assert!(k2.flat_limit_residual(1.0) <= 1e-5);
        let res: Vec<f64> = [1e2, 1e3, 1e4]
            .iter()
            .map(|&tau| p(Kind::K3, Branch::NhMinus).with_tau(tau).flat_limit_residual(1.0))
            .collect();
        assert!(res[0] > res[1] && res[1] > res[2]);
    }

    #[test]
    fn rejects_bad_scales() {
        assert!(DeformationParams::new(Kind::K1, Branch::Flat, 0.0, 1.0, 1.0).is_err());
        assert!(DeformationParams::new(Kind::K1, Branch::NhPlus, 1.0, -1.0, 1.0).is_err());
        assert!(DeformationParams::new(Kind::K1, Branch::Flat, 1.0, -1.0, 1.0).is_ok());
        assert!(DeformationParams::new(Kind::K1, Branch::Flat, 1.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn json_names() {
        let s = serde_json::to_string(&p(Kind::K2, Branch::NhMinus)).unwrap();
        assert_eq!(s, r#"{"kind":"K2","branch":"NHminus","kappa":1.0,"tau":1.0,"hbar":1.0}"#);
        let back: DeformationParams = serde_json::from_str(r#"{"kind":"K3","branch":"Flat","kappa":2.0}"#).unwrap();
        assert_eq!(back.hbar, 1.0);
        assert_eq!(back.kind, Kind::K3);
    }
}

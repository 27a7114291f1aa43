use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use nhfock::deformation::{Branch, DeformationParams, Kind};
use nhfock::oracle::MinimizeConfig;
use nhfock::phase_space::{Caps, FrameOptions};
use nhfock::states::Family;
use nhfock::Truncation;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TGrid {
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
}

impl Default for TGrid {
    fn default() -> Self {
        TGrid {
            start: 0.0,
            stop: 1.0,
            steps: 3,
        }
    }
}

impl TGrid {
    /// Evenly spaced points, both ends included.
    pub fn points(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.start];
        }
        let h = (self.stop - self.start) / (self.steps - 1) as f64;
        (0..self.steps)
            .map(|k| if k + 1 == self.steps { self.stop } else { self.start + h * k as f64 })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct StateSpec {
    pub family: Family,
    pub z_re: f64,
    pub z_im: f64,
    pub xi: f64,
    pub spectator: usize,
}

impl Default for StateSpec {
    fn default() -> Self {
        StateSpec {
            family: Family::Xx,
            z_re: 0.0,
            z_im: 0.0,
            xi: 1.0,
            spectator: 0,
        }
    }
}

impl StateSpec {
    pub fn z(&self) -> Complex64 {
        Complex64::new(self.z_re, self.z_im)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputSpec {
    pub path: Option<PathBuf>,
    pub format: Option<Format>,
}

/// Pair searched by `minimize`. `xp` is the canonical `(x̂₁, p̂₁)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OraclePair {
    Xp,
    X1x2,
    X1p1,
    X2p2,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TestHooks {
    /// Build every frame with `ε₁₂ = −1`.
    pub flip_epsilon: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub params: DeformationParams,
    pub trunc: Truncation,
    pub t_grid: TGrid,
    pub state: StateSpec,
    pub pair: OraclePair,
    pub oracle: MinimizeConfig,
    pub output: OutputSpec,
    pub caps: Option<Caps>,
    pub test_hooks: TestHooks,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            params: DeformationParams::default(),
            trunc: Truncation::default(),
            t_grid: TGrid::default(),
            state: StateSpec::default(),
            pair: OraclePair::X1x2,
            oracle: MinimizeConfig::default(),
            output: OutputSpec::default(),
            caps: None,
            test_hooks: TestHooks::default(),
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("bad config {}: {e}", path.display())))
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let usage = |e: nhfock::Error| CliError::Usage(e.to_string());
        self.params.validate().map_err(usage)?;
        self.trunc.validate().map_err(usage)?;
        self.oracle.validate().map_err(usage)?;
        let g = &self.t_grid;
        if g.steps < 1 {
            return Err(CliError::Usage("t_grid.steps must be at least 1".into()));
        }
        if !(g.start.is_finite() && g.stop.is_finite()) || g.start > g.stop {
            return Err(CliError::Usage(format!(
                "t_grid needs finite start <= stop, got [{}, {}]",
                g.start, g.stop
            )));
        }
        let s = &self.state;
        if !(s.xi > 0.0 && s.xi.is_finite()) {
            return Err(CliError::Usage(format!("xi = {} must be positive", s.xi)));
        }
        if !(s.z_re.is_finite() && s.z_im.is_finite()) {
            return Err(CliError::Usage("z must be finite".into()));
        }
        Ok(())
    }

    pub fn frame_options(&self) -> FrameOptions {
        FrameOptions {
            epsilon12: if self.test_hooks.flip_epsilon { -1.0 } else { 1.0 },
            caps: self.caps,
        }
    }

    pub fn caps(&self) -> Caps {
        self.caps.unwrap_or_else(|| Caps::for_levels(self.trunc.n_levels))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    #[value(name = "K1", alias = "k1")]
    K1,
    #[value(name = "K2", alias = "k2")]
    K2,
    #[value(name = "K3", alias = "k3")]
    K3,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BranchArg {
    #[value(name = "NHplus", alias = "nhplus")]
    NhPlus,
    #[value(name = "NHminus", alias = "nhminus")]
    NhMinus,
    #[value(name = "Flat", alias = "flat")]
    Flat,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    Xx,
    X1p1,
    X2p2,
}

/// Flags layered over the config file.
#[derive(Debug, Clone, Default, Args)]
pub struct Overrides {
    /// JSON run configuration.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, allow_negative_numbers = true)]
    pub t_start: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub t_stop: Option<f64>,
    #[arg(long)]
    pub steps: Option<usize>,
    #[arg(long, value_enum)]
    pub kind: Option<KindArg>,
    #[arg(long, value_enum)]
    pub branch: Option<BranchArg>,
    #[arg(long, allow_negative_numbers = true)]
    pub kappa: Option<f64>,
    #[arg(long)]
    pub tau: Option<f64>,
    #[arg(long)]
    pub hbar: Option<f64>,
    #[arg(long)]
    pub n_levels: Option<usize>,
    #[arg(long)]
    pub n_eff: Option<usize>,
    #[arg(long)]
    pub xi: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub z_re: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub z_im: Option<f64>,
    #[arg(long)]
    pub spectator: Option<usize>,
    #[arg(long, value_enum)]
    pub family: Option<FamilyArg>,
    #[arg(long, value_enum)]
    pub pair: Option<OraclePair>,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Also write the frame at the first grid point as JSON.
    #[arg(long)]
    pub dump_frame: Option<PathBuf>,
}

impl Overrides {
    pub fn resolve(&self) -> Result<RunConfig, CliError> {
        let mut cfg = match &self.config {
            Some(p) => RunConfig::load(p)?,
            None => RunConfig::default(),
        };
        if let Some(v) = self.t_start {
            cfg.t_grid.start = v;
        }
        if let Some(v) = self.t_stop {
            cfg.t_grid.stop = v;
        }
        if let Some(v) = self.steps {
            cfg.t_grid.steps = v;
        }
        if let Some(k) = self.kind {
            cfg.params.kind = match k {
                KindArg::K1 => Kind::K1,
                KindArg::K2 => Kind::K2,
                KindArg::K3 => Kind::K3,
            };
        }
        if let Some(b) = self.branch {
            cfg.params.branch = match b {
                BranchArg::NhPlus => Branch::NhPlus,
                BranchArg::NhMinus => Branch::NhMinus,
                BranchArg::Flat => Branch::Flat,
            };
        }
        if let Some(v) = self.kappa {
            cfg.params.kappa = v;
        }
        if let Some(v) = self.tau {
            cfg.params.tau = v;
        }
        if let Some(v) = self.hbar {
            cfg.params.hbar = v;
        }
        if let Some(n) = self.n_levels {
            cfg.trunc.n_levels = n;
            if self.n_eff.is_none() && self.config.is_none() {
                cfg.trunc.n_eff = (n / 2).max(1);
            }
        }
        if let Some(n) = self.n_eff {
            cfg.trunc.n_eff = n;
        }
        if let Some(v) = self.xi {
            cfg.state.xi = v;
        }
        if let Some(v) = self.z_re {
            cfg.state.z_re = v;
        }
        if let Some(v) = self.z_im {
            cfg.state.z_im = v;
        }
        if let Some(v) = self.spectator {
            cfg.state.spectator = v;
        }
        if let Some(f) = self.family {
            cfg.state.family = match f {
                FamilyArg::Xx => Family::Xx,
                FamilyArg::X1p1 => Family::X1p1,
                FamilyArg::X2p2 => Family::X2p2,
            };
        }
        if let Some(p) = self.pair {
            cfg.pair = p;
        }
        if let Some(p) = &self.out {
            cfg.output.path = Some(p.clone());
        }
        if let Some(f) = self.format {
            cfg.output.format = Some(f);
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_points() {
        let g = TGrid {
            start: 0.0,
            stop: 3.0,
            steps: 31,
        };
        let p = g.points();
        assert_eq!(p.len(), 31);
        assert_eq!((p[0], p[30]), (0.0, 3.0));
        assert!((p[16] - 1.6).abs() < 1e-15);
        let one = TGrid { steps: 1, ..g };
        assert_eq!(one.points(), vec![0.0]);
    }

    #[test]
    fn config_roundtrip_and_defaults() {
        let cfg = RunConfig::default();
        let text = serde_json::to_string(&cfg).unwrap();
        assert_eq!(serde_json::from_str::<RunConfig>(&text).unwrap(), cfg);
        let partial: RunConfig = serde_json::from_str(r#"{"t_grid": {"steps": 5}}"#).unwrap();
        assert_eq!(partial.t_grid.steps, 5);
        assert_eq!(partial.t_grid.stop, 1.0);
        assert!(serde_json::from_str::<RunConfig>(r#"{"bogus": 1}"#).is_err());
    }

    #[test]
    fn validation() {
        let mut cfg = RunConfig::default();
        cfg.t_grid.steps = 0;
        assert!(cfg.validate().is_err());
        let mut cfg = RunConfig::default();
        cfg.t_grid.start = 2.0;
        assert!(cfg.validate().is_err());
        let mut cfg = RunConfig::default();
        cfg.params.kappa = -1.0;
        assert!(cfg.validate().is_err());
    }
}

use nhfock::fock::{FockState, Modes, StateJson};
use nhfock::oracle::minimize_product;
use nhfock::states::{saturating_state_in, Family};
use nhfock::uncertainty::{dispersion, pair_record, saturation_report, Pair, SaturationReport};
use nhfock::Frame;
use serde::{Deserialize, Serialize};

use crate::config::{OraclePair, RunConfig};
use crate::error::CliError;

pub fn first_frame(cfg: &RunConfig) -> Result<Frame, CliError> {
    Ok(Frame::build_with(&cfg.params, cfg.trunc, cfg.t_grid.start, &cfg.frame_options())?)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StateDump {
    pub family: Family,
    pub t: f64,
    pub f: f64,
    pub z: [f64; 2],
    pub xi: f64,
    pub spectator: usize,
    pub norm: f64,
    pub tail_population: f64,
    pub report: SaturationReport,
    pub state: StateJson,
}

/// The requested saturating state at the first grid point.
pub fn run_state(cfg: &RunConfig) -> Result<StateDump, CliError> {
    let fr = first_frame(cfg)?;
    let s = &cfg.state;
    let psi = saturating_state_in(s.family, &fr, s.z(), s.xi, s.spectator)?;
    Ok(StateDump {
        family: s.family,
        t: fr.t,
        f: fr.f_t,
        z: [s.z_re, s.z_im],
        xi: s.xi,
        spectator: s.spectator,
        norm: psi.norm(),
        tail_population: psi.tail_population(),
        report: saturation_report(&psi, &fr)?,
        state: psi.to_json(),
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MinimizeReport {
    pub pair: OraclePair,
    pub t: f64,
    pub f: f64,
    pub value: f64,
    pub bound: f64,
    /// `value − bound`.
    pub gap: f64,
    /// Product reached by the analytic saturating state.
    pub certificate: Option<f64>,
    /// `value − certificate`.
    pub certificate_gap: Option<f64>,
    pub certificate_skipped: Option<String>,
    pub iterations: usize,
    pub restart: usize,
    pub seed: u64,
    pub converged: bool,
}

fn certificate(cfg: &RunConfig, fr: &Frame) -> nhfock::Result<f64> {
    let s = &cfg.state;
    let (family, pair) = match cfg.pair {
        OraclePair::Xp => {
            let vac = FockState::vacuum(fr.trunc, Modes::Two);
            let c = &fr.canonical;
            return Ok(dispersion(&c.x1, &vac)? * dispersion(&c.p1, &vac)?);
        }
        OraclePair::X1x2 => (Family::Xx, Pair::X1X2),
        OraclePair::X1p1 => (Family::X1p1, Pair::X1P1),
        OraclePair::X2p2 => (Family::X2p2, Pair::X2P2),
    };
    let psi = saturating_state_in(family, fr, s.z(), s.xi, s.spectator)?;
    Ok(pair_record(pair, &psi, fr)?.product)
}

pub fn run_minimize(cfg: &RunConfig) -> Result<MinimizeReport, CliError> {
    let fr = first_frame(cfg)?;
    let (a, b) = match cfg.pair {
        OraclePair::Xp => (&fr.canonical.x1, &fr.canonical.p1),
        OraclePair::X1x2 => Pair::X1X2.operators(&fr),
        OraclePair::X1p1 => Pair::X1P1.operators(&fr),
        OraclePair::X2p2 => Pair::X2P2.operators(&fr),
    };
    let res = minimize_product(a, b, &cfg.oracle)?;
    let (cert, cert_skip) = match certificate(cfg, &fr) {
        Ok(c) => (Some(c), None),
        Err(e) => (None, Some(e.code().to_string())),
    };
    Ok(MinimizeReport {
        pair: cfg.pair,
        t: fr.t,
        f: fr.f_t,
        value: res.value,
        bound: res.bound,
        gap: res.value - res.bound,
        certificate: cert,
        certificate_gap: cert.map(|c| res.value - c),
        certificate_skipped: cert_skip,
        iterations: res.iterations,
        restart: res.restart,
        seed: res.seed,
        converged: res.converged,
    })
}

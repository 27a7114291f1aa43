//! `nhfock sweep`: saturation reports over a t-grid.

use nhfock::states::saturating_state_in;
use nhfock::uncertainty::{saturation_report, PairRecord, SaturationReport};
use nhfock::Frame;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::RunConfig;
use crate::output::num;

/// Value of the `pair` column on a skipped row.
pub const SKIPPED_PAIR: &str = "*";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub t: f64,
    pub f: f64,
    pub pairs: Vec<PairRecord>,
    pub skipped: Option<String>,
    /// `f(t)` below the guard `f_min`.
    pub guarded: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sweep {
    pub points: Vec<SweepPoint>,
}

fn point(cfg: &RunConfig, t: f64) -> SweepPoint {
    let f = cfg.params.f_value(t);
    let guarded = f.abs() < cfg.params.f_min();
    let report = Frame::build_with(&cfg.params, cfg.trunc, t, &cfg.frame_options()).and_then(|fr| {
        let s = &cfg.state;
        let psi = saturating_state_in(s.family, &fr, s.z(), s.xi, s.spectator)?;
        saturation_report(&psi, &fr)
    });
    match report {
        Ok(SaturationReport { pairs, .. }) => SweepPoint {
            t,
            f,
            pairs,
            skipped: None,
            guarded,
        },
        Err(e) => SweepPoint {
            t,
            f,
            pairs: Vec::new(),
            skipped: Some(e.code().to_string()),
            guarded,
        },
    }
}

pub fn run_sweep(cfg: &RunConfig) -> Sweep {
    let points = cfg.t_grid.points().into_par_iter().map(|t| point(cfg, t)).collect();
    Sweep { points }
}

impl Sweep {
    pub fn all_skipped(&self) -> bool {
        self.points.iter().all(|p| p.skipped.is_some())
    }

    pub fn all_guarded(&self) -> bool {
        self.points.iter().all(|p| p.guarded)
    }

    /// One row per `(t, pair)`; a skipped `t` is a single row with pair `*`
    /// and `skipped:<reason>` in the `delta_a` column.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(nhfock::SaturationReport::CSV_HEADER).expect("in-memory write");
        for p in &self.points {
            match &p.skipped {
                Some(reason) => {
                    let marker = format!("skipped:{reason}");
                    w.write_record([&num(p.t), &num(p.f), SKIPPED_PAIR, &marker, "", "", "", "", ""])
                        .expect("in-memory write");
                }
                None => {
                    for r in &p.pairs {
                        w.write_record([
                            num(p.t),
                            num(p.f),
                            r.pair.id().to_string(),
                            num(r.delta_a),
                            num(r.delta_b),
                            num(r.product),
                            num(r.bound),
                            num(r.residual),
                            num(r.xi_estimate),
                        ])
                        .expect("in-memory write");
                    }
                }
            }
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("CSV is UTF-8")
    }
}

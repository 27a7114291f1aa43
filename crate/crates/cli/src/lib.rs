//! Command-line front end: `verify`, `sweep`, `state` and `minimize`.
//!
//! Every command reads one JSON [`RunConfig`] (or the defaults) with flag
//! overrides on top. Exit codes: 0 success, 1 failed check or rejected
//! construction, 2 usage or config error.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;
pub mod sweep;
pub mod verify;

use std::ffi::OsString;

use clap::{Parser, Subcommand};

pub use config::RunConfig;
pub use error::CliError;

use config::{Format, Overrides};

#[derive(Debug, Parser)]
#[command(name = "nhfock", version, about = "Deformed phase-space uncertainty toolkit")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the invariant suite and write a JSON report.
    Verify(Overrides),
    /// Saturation reports over the t-grid, as CSV or JSON.
    Sweep(Overrides),
    /// Dump the requested saturating state at the first grid point.
    State(Overrides),
    /// Minimize the uncertainty product for the configured pair.
    Minimize(Overrides),
}

/// Threads from `NHFOCK_THREADS`, machine parallelism otherwise.
fn thread_count() -> Result<usize, CliError> {
    match std::env::var("NHFOCK_THREADS") {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n >= 1 => Ok(n),
            _ => Err(CliError::Usage(format!("NHFOCK_THREADS = {v:?} is not a positive integer"))),
        },
        Err(_) => Ok(std::thread::available_parallelism().map_or(1, |n| n.get())),
    }
}

fn json_only(cfg: &RunConfig, what: &str) -> Result<(), CliError> {
    match cfg.output.format {
        Some(Format::Csv) => Err(CliError::Usage(format!("{what} writes JSON only"))),
        _ => Ok(()),
    }
}

fn dump_frame(ov: &Overrides, cfg: &RunConfig) -> Result<(), CliError> {
    if let Some(path) = &ov.dump_frame {
        let fr = commands::first_frame(cfg)?;
        output::emit(Some(path), &output::to_json(&fr.to_json()))?;
    }
    Ok(())
}

fn execute(cmd: &Command) -> Result<(), CliError> {
    let ov = match cmd {
        Command::Verify(o) | Command::Sweep(o) | Command::State(o) | Command::Minimize(o) => o,
    };
    let cfg = ov.resolve()?;
    let out = cfg.output.path.as_deref();
    dump_frame(ov, &cfg)?;
    match cmd {
        Command::Verify(_) => {
            json_only(&cfg, "verify")?;
            let rep = verify::run_verify(&cfg);
            output::emit(out, &output::to_json(&rep))?;
            let s = &rep.summary;
            eprintln!(
                "verify: {} checks, {} passed, {} failed, {} skipped",
                s.total, s.passed, s.failed, s.skipped
            );
            if !rep.pass {
                let ids: Vec<String> = rep
                    .checks
                    .iter()
                    .filter(|c| !c.pass)
                    .map(|c| match c.t {
                        Some(t) => format!("{} (t = {t})", c.id),
                        None => c.id.clone(),
                    })
                    .collect();
                return Err(CliError::Failed(format!("failed checks: {}", ids.join(", "))));
            }
        }
        Command::Sweep(_) => {
            let sw = sweep::run_sweep(&cfg);
            let text = match cfg.output.format.unwrap_or(Format::Csv) {
                Format::Csv => sw.to_csv(),
                Format::Json => output::to_json(&sw),
            };
            output::emit(out, &text)?;
            if sw.all_guarded() {
                return Err(CliError::Usage(
                    "every grid point has f(t) inside the f_min guard".into(),
                ));
            }
            if sw.all_skipped() {
                return Err(CliError::Usage("every grid point was skipped".into()));
            }
        }
        Command::State(_) => {
            json_only(&cfg, "state")?;
            let dump = commands::run_state(&cfg)?;
            output::emit(out, &output::to_json(&dump))?;
        }
        Command::Minimize(_) => {
            json_only(&cfg, "minimize")?;
            let rep = commands::run_minimize(&cfg)?;
            output::emit(out, &output::to_json(&rep))?;
            eprintln!("minimize: value {:.12} bound {:.12} gap {:.3e}", rep.value, rep.bound, rep.gap);
            match (rep.certificate, rep.certificate_gap) {
                (Some(c), Some(g)) => eprintln!("certificate product {c:.12}, gap to certificate {g:.3e}"),
                _ => eprintln!(
                    "certificate unavailable: {}",
                    rep.certificate_skipped.as_deref().unwrap_or("unknown")
                ),
            }
        }
    }
    Ok(())
}

/// Parse `args` and run; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let result = thread_count().and_then(|n| {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| CliError::Failed(format!("cannot start thread pool: {e}")))?;
        pool.install(|| execute(&cli.command))
    });
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

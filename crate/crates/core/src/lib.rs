//! Truncated two-mode Fock space toolkit for time-deformed noncommutative
//! phase spaces.
//!
//! The deformed positions satisfy `[x̄₁, x̄₂] = i f(t)` where `f` is one of
//! the Newton–Hooke deformation functions. The crate builds the operator
//! frames and unitaries relating them, constructs the states that saturate
//! the three deformed uncertainty relations, and provides a variational
//! oracle that minimizes uncertainty products independently.
//!
//! Everything is generic over the real scalar ([`Real`], implemented for
//! `f32` and `f64`); the aliases at the crate root fix `f64`.

pub mod deformation;
pub mod error;
pub mod fock;
pub mod oracle;
pub mod phase_space;
pub mod scalar;
pub mod states;
pub mod uncertainty;

pub use deformation::{Branch, DeformationParams, Kind};
pub use error::{Error, Result};
pub use fock::{FockOperator, FockState, Modes, Truncation};
pub use phase_space::PhaseFrame;
pub use scalar::{Real, C};
pub use uncertainty::SaturationReport;

/// Double-precision operator.
pub type Operator = FockOperator<f64>;
/// Double-precision state.
pub type State = FockState<f64>;
/// Double-precision frame.
pub type Frame = PhaseFrame<f64>;
/// Single-precision operator.
pub type Operator32 = FockOperator<f32>;
/// Single-precision state.
pub type State32 = FockState<f32>;

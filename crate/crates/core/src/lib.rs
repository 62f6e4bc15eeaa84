//! Spin-echo Rydberg controlled-phase gate: state-vector simulation, closed-form
//! blockade analytics, error budgets and time-reversed many-body dynamics.

// `!(x > 0.0)` is used on purpose so NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod echogate;
pub mod error;
pub mod errorbudget;
pub mod hilbert;
pub mod manybody;
pub mod pulsemodel;

pub use error::{Error, Result};

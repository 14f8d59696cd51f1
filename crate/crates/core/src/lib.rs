//! Covert communication with channel inversion power control.
//!
//! A transmitter (Alice) inverts her channel to a full-duplex receiver (Bob)
//! so that Bob always sees received power `Q`. Bob jams a warden (Willie)
//! with artificial noise of uniformly random power. This crate computes the
//! warden's detection errors, the link outage probability, and the
//! covertness-constrained effective throughput, and ships a Monte Carlo
//! simulator that checks every closed form.

// Range checks are written as `!(x > 0.0)` on purpose so that NaN fails them.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod config;
pub mod covert_opt;
pub mod detection;
pub mod error;
pub mod figures;
pub mod mc;
pub mod model;
pub mod outage;
pub mod specfun;
pub mod sweep;
pub mod verify;

pub use error::{CipcError, Result};

//! Link-level simulator for a synchronous DSSS W-CDMA downlink.
//!
//! The crate models the chain
//!
//! ```text
//! user bits -> XOR with M-sequence chips -> QPSK / 16-QAM / 8PSK mapping
//!   -> sum over users (1/sqrt(K)) -> flat Rayleigh fading -> AWGN
//!   -> channel compensation -> demapping -> despreading -> bits
//! ```
//!
//! and measures bit and symbol error rates against closed-form and
//! semianalytic references. Every run is a pure function of its
//! configuration and seed.
//!
//! Modules follow the signal path: [`pn_codes`] and [`correlation`] build and
//! characterise spreading codes, [`modem`] maps chips to symbols, [`spreading`]
//! assembles the downlink, [`channel`] and [`receiver`] cover the air
//! interface, [`theory`] and [`metrics`] provide references and estimators, and
//! [`harness`] drives configured sweeps and writes CSV.

#![allow(clippy::neg_cmp_op_on_partial_ord)] // `!(x > 0.0)` also rejects NaN

pub mod channel;
pub mod correlation;
pub mod doctor;
pub mod error;
pub mod harness;
pub mod metrics;
pub mod modem;
pub mod pn_codes;
pub mod receiver;
pub mod seed;
pub mod spreading;
pub mod theory;

pub use error::{Error, Result};
pub use num_complex::Complex64;

//! Chern characters of Laughlin quasihole bundles over symmetric powers of
//! a curve.
//!
//! The crate has three layers:
//!
//! * [`ring`] and [`chern`]: exact closed forms for the Chern character and
//!   independent pushforward oracles computed by Berezin integration;
//! * [`theta`] and [`laughlin`]: explicit sphere and torus wave-functions;
//! * [`berry`]: Monte-Carlo Gram matrices and the curvature of their Chern
//!   connection, integrated over one-quasihole slices.
//!
//! [`acceptance`] bundles the end-to-end checks used by `qhc check` and the
//! acceptance test target.

pub mod acceptance;
pub mod berry;
pub mod chern;
pub mod cli;
pub mod error;
pub mod laughlin;
pub mod ring;
pub mod theta;

pub use error::{BerryError, ChernError, RingError, ThetaError};

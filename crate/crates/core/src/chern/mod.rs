//! Chern characters of Laughlin quasihole bundles: closed forms, the
//! Berezin pushforward oracles, and helpers for comparing them.

pub mod class;
pub mod config;
pub mod formulas;
pub mod linalg;
pub mod oracle;
pub mod slice;
pub mod symbolic;
pub mod tables;

pub use class::{collect, projective_flatness_check, ChernClass, Collected};
pub use config::{p_of, MultilayerConfig, SingleLayerConfig};
pub use formulas::{ch_filled, ch_general, ch_general_with, ch_multilayer, ch_with_picard};
pub use oracle::{grr_oracle, multilayer_grr_oracle, picard_oracle, Coupling, OracleLimits};
pub use slice::slice_pullback;
pub use symbolic::{SymMonomial, SymPoly, Symbol};

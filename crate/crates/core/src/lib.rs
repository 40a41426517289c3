//! Exact simulation of the three-particle GHZ experiment and a mechanical
//! audit framework for ontological (beable) models of it.
//!
//! The crate is `no_std` and only needs `alloc`. Everything here is a pure
//! function of its inputs; IO, file formats and the command line live in the
//! `ghz-cli` companion crate.
//!
//! - [`quantum`]: GHZ state, Pauli products, Born-rule joint distributions.
//! - [`logic`]: deterministic value assignments and the exhaustive GHZ
//!   impossibility enumeration.
//! - [`ontology`]: the beable-model contract and the audit battery.
//! - [`models`]: bundled models (ontic quantum state, superdeterministic GHZ,
//!   local deterministic strawmen) and a table-driven model.
//! - [`branch`]: Everettian branch bookkeeping and typicality experiments.
#![cfg_attr(not(test), no_std)]
#![deny(unsafe_code)]

extern crate alloc;

pub mod branch;
mod error;
pub mod logic;
pub mod models;
pub mod ontology;
pub mod quantum;

pub use error::Error;

/// Tolerance for algebraic identities on exact states.
pub const ALGEBRAIC_TOL: f64 = 1e-12;
/// Tolerance for summed quantities and audit comparisons.
pub const SUM_TOL: f64 = 1e-9;
/// Events with probability below this are treated as impossible when conditioning.
pub const DEGENERATE_TOL: f64 = 1e-12;

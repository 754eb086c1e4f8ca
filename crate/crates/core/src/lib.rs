//! Bounds, certificates, and compiled-protocol simulation for two-player
//! nonlocal games.
//!
//! The crate covers four layers:
//!
//! - **Games and bounds** ([`game`], [`sdp`]): XOR/correlation functionals,
//!   exact classical bounds by enumeration, and the quantum bound via the
//!   diagonal-constrained semidefinite program together with its dual
//!   certificate.
//! - **Sum-of-squares certificates** ([`sos`], [`satwap`]): the closed-form
//!   decomposition of the shifted game operator built from the dual solution,
//!   and the d-outcome generalization with its explicit optimal strategies.
//! - **State-vector simulation** ([`quantum`]): binary and order-d unitary
//!   observables, correlators, and the named optimal strategies.
//! - **Compiled protocols** ([`compiled`], [`pseudo`], [`selftest`]): the
//!   four-message single-prover compilation under pluggable toy encryption,
//!   crypto moment matrices with the pseudo-expectation map, and self-test
//!   residual certification with explicit robustness constants.

pub mod compiled;
pub mod error;
pub mod game;
pub mod linalg;
pub mod pseudo;
pub mod quantum;
pub mod report;
pub mod satwap;
pub mod sdp;
pub mod selftest;
pub mod sos;

pub use error::{Error, Result};

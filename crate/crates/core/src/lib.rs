//! Reconstruction of unknown unitary processes with variational circuits,
//! where the probe states sent to the process are chosen by active-learning
//! acquisition functions.
//!
//! The crate is organized bottom-up:
//!
//! - [`qcore`]: dense statevector simulation and unitary assembly.
//! - [`ansatz`]: the trainable rotation/CNOT circuit, its loss and gradients.
//! - [`probes`]: the `4^n` product-state probe pool.
//! - [`oracle`]: seeded random target circuits and the query interface.
//! - [`al`]: committee, expected-model-change, greedy and random acquisition
//!   plus the select–query–retrain loop.
//! - [`harness`]: metrics, configuration, repeat orchestration and output.

pub mod al;
pub mod ansatz;
pub mod error;
pub mod harness;
pub mod oracle;
mod par;
pub mod probes;
pub mod qcore;
pub mod seed;

pub use error::{Error, Result};

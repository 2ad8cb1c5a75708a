//! Exact dense statevector simulation.
//!
//! Basis convention: qubit 0 is the most significant bit of a basis index, so
//! `|q0 q1 … q(n-1)⟩` maps to index `q0·2^(n-1) + … + q(n-1)`.

mod circuit;
mod gate;
mod state;
mod unitary;

pub use circuit::{apply_circuit, Circuit};
pub use gate::{Gate, Matrix2};
pub use state::{apply_gate, inner_product, StateVector};
pub use unitary::{assemble_unitary, assemble_unitary_capped, UnitaryMatrix, DEFAULT_UNITARY_CAP};

pub(crate) use state::{
    apply_adjoint_in_place, check_dims, distance_unchecked, inner_unchecked, real_inner_unchecked, real_overlaps2,
};

pub use num_complex::Complex64;

//! q-deformed SU(2)_k single-plaquette toolkit.
//!
//! The crate evaluates q-deformed recoupling symbols, counts the
//! gauge-invariant Hilbert space of one plaquette, builds the phased
//! F-move diagonalization of the plaquette operator and compiles one
//! Trotter step of its time evolution into qudit gates (generalized
//! controlled-X plus two-level rotations). A small dense statevector
//! simulator checks the compiled circuits against exact evolution.
//!
//! Numerical kernels in [`qalgebra`] are generic over [`Scalar`]; counting
//! in [`gauge`] is generic over any exact integer implementing
//! [`gauge::ExactCount`]. The aliases below fix the types used by the
//! operator, synthesis and simulation layers.

pub mod error;
pub mod gauge;
pub mod lattice;
pub mod linalg;
pub mod plaquette;
pub mod qalgebra;
pub mod scalar;
pub mod sim;
pub mod spin;
pub mod synth;

pub use error::{Error, Result};
pub use lattice::{LinkAssignment, Register};
pub use scalar::Scalar;
pub use spin::{Spin, SpinTriple, Truncation};

/// Real scalar used by the operator, synthesis and simulation layers.
pub type Real = f64;

/// Complex scalar used by the operator, synthesis and simulation layers.
pub type Complex = num_complex::Complex<f64>;

/// Default exact integer for Hilbert-space dimensions.
pub type PhysDim = u128;

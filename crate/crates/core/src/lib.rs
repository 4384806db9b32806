//! Algebra eigenstates of h(1) ⊕ su(2) on a truncated Fock ⊗ spin space.
//!
//! The crate builds minimum-uncertainty, coherent and squeezed states as
//! eigenvectors of complex combinations of `a, a†, I, J₊, J₋, J₃`, the
//! Hamiltonians `H = w A†A` built from such combinations, and independent
//! brute-force checks (dense eigensolvers and a Bargmann-representation
//! solver) for every closed form.
//!
//! Spin labels are stored doubled (`two_j`, `two_m`) so half-integers stay exact.

pub mod coupled;
pub mod error;
pub mod fock;
pub mod hamiltonian;
pub mod linalg;
pub mod mus;
pub mod oracle;
pub mod oscillator;
pub mod special;
pub mod su2;
pub mod sweep;
pub mod verify;

pub use error::{Error, Result};
pub use fock::{
    build_ops, dispersion, expectation, srur_report, DispersionReport, JointState,
    LinearOperator, Ops, SpaceSpec, Truncation,
};
pub use mus::{MusClass, MusParam};

/// Double-precision complex scalar used everywhere.
pub type C64 = num_complex::Complex64;

pub(crate) const I: C64 = C64::new(0.0, 1.0);

pub(crate) fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

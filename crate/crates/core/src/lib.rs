//! Exact simulation of a single qubit coupled through `k` links to a
//! collective spin bath with infinite-range XY interactions.
//!
//! The bath is permutation symmetric, so its ground state lives in a Dicke
//! block of dimension `N + 1` instead of the full `2^N` Hilbert space. The
//! crate builds the bath Hamiltonian and its ground state in that block
//! ([`spin`]), maps them onto a `k / (N - k)` bipartite product space
//! ([`partition`]), and then follows two pipelines:
//!
//! * [`dephasing`] — Ising qubit-bath coupling. Pure dephasing, quantified by
//!   the decoherence factor `D(t)`, the Loschmidt echo `L(t) = |D|^2`, its
//!   Fourier mode spectrum and rephasing times.
//! * [`dissipative`] — XY qubit-bath coupling. Energy exchange, treated as a
//!   quantum channel per time step: Choi matrix, Kraus operators, average
//!   purity and a partial-transpose entanglement-breaking witness
//!   ([`channel`]).
//!
//! [`analytic`] carries the closed-form single-link solution for an isotropic
//! bath, used as an independent cross-check of the numerics.

pub mod analytic;
pub mod channel;
pub mod dephasing;
pub mod dissipative;
mod error;
mod half;
pub mod linalg;
pub mod partition;
pub mod spin;

pub use error::{Error, Result};
pub use half::Half;
pub use linalg::{CMatrix, CVector, Complex64, EigenSystem, HermitianOperator};

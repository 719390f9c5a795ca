//! Dissipative dynamics of two two-level atoms sharing a broadband squeezed
//! photon reservoir.
//!
//! The crate assembles the rotating-frame Lindblad generator, integrates the
//! master equation, evaluates the closed-form asymptotic states for spatially
//! separated atoms and for the Dicke limit, and measures their entanglement
//! through the Wootters concurrence.
//!
//! Everything here is pure computation on fixed-size matrices, so the crate
//! builds without `std` (disable default features). Only the exact
//! matrix-exponential propagator needs `std`.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

mod error;
mod math;

pub mod asymptotic;
pub mod entanglement;
pub mod evolve;
pub mod liouvillian;
pub mod model;

pub use error::{Error, Result};
pub use model::{
    fidelity_antisymmetric, product_state_fidelity, validate, AtomParams, Basis, BathParams,
    CollectiveBasisMap, DensityMatrix, Params, Qubit, Regime,
};

/// Complex double.
pub type C64 = nalgebra::Complex<f64>;
/// Operator on the two-atom Hilbert space.
pub type Op4 = nalgebra::Matrix4<C64>;
/// Two-atom state vector.
pub type Ket4 = nalgebra::Vector4<C64>;

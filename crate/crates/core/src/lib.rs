//! Truncated, discretized Fock-space model of the process ν_e + n ⇌ e⁻ + p in
//! a uniform magnetic field.
//!
//! Builds the free and interaction Hamiltonians over a finite mode grid and a
//! fermionic occupation basis, and checks the structural properties of the
//! continuum model on the truncation: spinor exactness, anticommutation
//! relations, the relative bound, ground-state bounds, the infrared-cutoff gap,
//! the pull-through identity and soft-neutrino scaling.
#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod error;
pub mod fock;
pub mod free_spinors;
pub mod gamma;
pub mod hamiltonian;
pub mod invariants;
pub mod kernels;
pub mod landau_spinors;
pub mod linalg;
pub mod params;
pub mod sparse;
pub mod spectra;
pub mod special_fn;
pub mod vertex;

pub use error::{Error, Result};

pub type C64 = num_complex::Complex64;
pub type Spinor4 = nalgebra::Vector4<C64>;

pub(crate) trait Square {
    fn sq(self) -> Self;
}

impl Square for f64 {
    #[inline]
    fn sq(self) -> f64 {
        self * self
    }
}

//! Supersymmetric partner Hamiltonians of spherically symmetric Pauli systems.
//!
//! Within a subspace of fixed total angular momentum `j` the spin-orbit
//! operator `K = 2 S·L + 1` takes the values `±(j + 1/2)` and its sign acts as
//! a Witten parity. The radial problem then splits into two sectors with
//! orbital momenta `ℓ - 1` and `ℓ` (`ℓ = j + 1/2`) that form a SUSY pair.
//! This crate builds those pairs on a radial grid as `H₊ = A A†`,
//! `H₋ = A† A` from a discrete ladder operator `A`, diagonalizes them and
//! cross-checks the results against closed-form spectra, zero modes, the
//! Bessel-function SUSY map of the free particle and the shape-invariance
//! chains of the exactly solvable superpotentials.
//!
//! Units: `ħ = 1`; the particle mass `m` is carried explicitly.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
pub mod angular;
pub mod error;
pub mod linalg;
pub mod quadrature;
pub mod quantum_numbers;
pub mod radial;
pub mod shape_invariance;
pub mod shooting;
pub mod spectral;
pub mod superpotential;

pub use error::{Error, Result};
pub use quantum_numbers::{Channel, HalfInt, Sign};
pub use radial::{FactorizedPair, Ladder, RadialGrid, SymTridiagonal};
pub use spectral::SpectrumReport;
pub use superpotential::{Branch, EffectivePotential, Family, SuperpotentialSpec, System};

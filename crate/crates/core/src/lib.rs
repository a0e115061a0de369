//! Bound states of the Dirac equation with a Coulombic position-dependent
//! mass and a Coulomb-like vector field, in the spin- and
//! pseudospin-symmetric limits.
//!
//! The crate solves the reduced radial problem in closed form with the
//! Nikiforov–Uvarov method ([`nu`], [`spectrum`], [`wavefunctions`]) and
//! cross-checks every analytic result with an independent shooting solver
//! ([`oracle`]).

// `!(x > 0.0)` also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod model;
pub mod nu;
pub mod oracle;
pub mod quadrature;
pub mod special;
pub mod spectrum;
pub mod wavefunctions;

pub use error::{Error, Result};
pub use model::{
    map_kappa, mass_at, pseudospin_parameter_map, reduced_coefficients, AngularLabels,
    PhysicalParams, QuantumNumbers, ReducedCoefficients, SymmetryMode, UnitSystem,
};

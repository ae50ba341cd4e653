//! Numerical laboratory for the kinetic Fokker–Planck equation
//! ∂ₜP + v∂ₓP = ∂ᵥᵥP on the half-line x > 0 with an inelastic wall
//! P(0, −v) = r²P(0, rv).
//!
//! The crate computes the critical exponents and constants attached to a
//! restitution coefficient r, evaluates the self-similar profiles that
//! describe the density near the singular point (x, v) = (0, 0), checks the
//! associated flux identities by quadrature, simulates the underlying
//! particle with exact Gaussian increments, iterates a lattice toy model, and
//! solves the PDE with the singular-point boundary conditions imposed on an
//! excised neighbourhood of the origin.

pub mod error;
pub mod exponents;
pub mod fluxes;
pub mod lattice;
pub mod linalg;
pub mod pde;
pub mod profiles;
pub mod quad;
pub mod reproduce;
pub mod sde;
pub mod specfun;
pub mod stats;

pub use error::{Error, Result};
pub use exponents::RestitutionConstants;

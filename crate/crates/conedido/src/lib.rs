//! Numerical library for weighted isoperimetric inequalities in half-spaces.
//!
//! The weights are the family a·x_N^k·exp(c|x|²) on {x_N > 0}. The crate
//! provides the closed-form isoperimetric profile and its oracles, starlike
//! Dido minimization in the half-plane with Euler-Lagrange and second
//! variation checks, weighted Steiner symmetrizations, decreasing and star
//! rearrangements with a Polya-Szego check, a comparison principle for
//! degenerate elliptic equations, the weighted Neumann eigenvalue on the
//! half-circle, and the sharp weighted Hardy constant on the quarter space.

pub mod density;
pub mod error;
pub mod interval;
pub mod linalg;
pub mod montecarlo;
pub mod pde;
pub mod pixel;
pub mod profile;
pub mod quad;
pub mod rearrange;
pub mod search;
pub mod spectral;
pub mod suite;

pub use density::{Density, DensityConstants, Domain};
pub use error::{Error, Result};

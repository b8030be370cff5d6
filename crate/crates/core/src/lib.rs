//! A numerical laboratory for the Cauchy problem of Hamilton–Jacobi equations
//! `∂_t u + H(t, x, ∂_x u) = 0` with semi-concave initial data.
//!
//! The crate computes classical solutions by characteristics, variational
//! solutions as minima of evolved generating families, viscosity solutions by
//! iterating the variational operator, by the Hopf and Lax–Oleinik formulas and
//! by a monotone finite-difference scheme, and checks the ordering
//! `viscosity ≤ variational ≤ inf-of-family` together with the generalized
//! entropy conditions on convex/concave envelopes of `H`.
//!
//! Runnable walkthroughs live in `examples/`; the `hjlab` binary runs scenario
//! files.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod characteristics;
pub mod entropy;
mod error;
pub mod grid;
pub mod hamiltonian;
pub mod scenario;
pub mod semiconcave;
pub mod vector;
pub mod weak_solvers;

pub use error::{Error, Result};
pub use grid::{Axis, Grid};
pub use hamiltonian::{Convexity, HamiltonianModel};
pub use vector::Vector;

//! Twisted Selberg and Ruelle zeta functions for compact hyperbolic manifolds
//! of odd dimension `d`, evaluated from length-spectrum data.
//!
//! The crate is organised bottom-up:
//!
//! - [`repr`]: weights, Weyl characters and dimensions, branching `Spin(d) -> Spin(d-1)`,
//!   the Plancherel polynomial, `c(sigma)` and the exterior powers of `n`.
//! - [`spectrum`]: primitive closed geodesics with holonomy and twist, their powers,
//!   eigenvalue lists, synthesis and JSON I/O.
//! - [`zeta`]: Euler-product logs of `Z(s; sigma, chi)` and `R(s; sigma, chi)`, the
//!   log-derivative, convergence abscissae and the factorisation of `R` through `Z_p`.
//! - [`heat`]: spectral and geometric sides of the heat trace.
//! - [`continuation`]: the partial-fraction resolvent machinery and the continued
//!   log-derivative with its residues.
//! - [`cli`]: the `zetaflow` command-line front end.
//!
//! Zeta values are always returned as logarithms.

pub mod cli;
pub mod continuation;
pub mod error;
pub mod heat;
pub mod quad;
pub mod repr;
pub mod spectrum;
pub mod sum;
pub mod zeta;

pub use error::{Error, Result};
pub use num_complex::Complex64;

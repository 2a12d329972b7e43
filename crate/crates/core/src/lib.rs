//! Radially symmetric compressible MHD on a disc, without magnetic diffusion.
//!
//! The crate integrates the reduced system for scalar profiles
//! `(rho, u, B)(r, t)` on `[0, R0]`:
//!
//! ```text
//! rho_t + (rho u)_r + rho u / r = 0
//! (rho u)_t + (rho u^2)_r + rho u^2 / r + p_r
//!     = (2 mu + lambda)(u_r + u/r)_r - B (B_r + B/r)
//! B_t + (u B)_r = 0
//! ```
//!
//! with `p = a rho^gamma`, `u(0) = u(R0) = B(0) = 0`, and supports initial
//! data whose density vanishes on an interior ball carrying a nontrivial
//! magnetic profile.  Around the time integrator sit diagnostics for the
//! quantities that control breakdown of such data: the conserved vacuum
//! magnetic charge, the energy, the weighted divergence norm and its
//! closed-form lower bound, and the vacuum momentum-balance defect.
//!
//! Modules:
//! - [`grid`], [`params`], [`state`], [`profile`], [`scenario`], [`initial`]:
//!   domain types, quadrature conventions, and initial-data builders.
//! - [`solver`]: operator-split time stepping with vacuum-tolerant implicit
//!   viscosity, plus the run loop with breakdown detection.
//! - [`diagnostics`]: per-step conserved quantities, the inequality chain,
//!   and the vacuum balance residual.
//! - [`bound`]: the breakdown-bound calculus (`K(alpha)`, divergence lower
//!   bound, lifespan bound, alpha optimization, multiplier checks).
//! - [`picard`]: linearized successive-approximation solves on a short time
//!   slab with contraction diagnostics.
//! - [`mms`]: manufactured smooth solution and source terms for convergence
//!   studies.
//! - [`cli`]: config parsing, CSV emission, and subcommand drivers.

pub mod bound;
pub mod cli;
pub mod diagnostics;
pub mod error;
pub mod grid;
pub mod initial;
pub mod mms;
pub mod params;
pub mod picard;
pub mod profile;
pub mod scenario;
pub mod solver;
pub mod state;
pub mod tridiag;

pub use error::{Error, Result};
pub use grid::RadialGrid;
pub use params::FluidParams;
pub use scenario::Scenario;
pub use state::{RadialState, VacuumTracker};

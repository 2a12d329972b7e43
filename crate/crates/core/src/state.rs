//! Discrete field state and the transported vacuum-ball radius.

use crate::error::{Error, Result};
use crate::grid::RadialGrid;

/// Density at or below this value counts as vacuum for the balance residual.
/// Upwind transport leaves denormal-scale remnants on formerly exact-zero
/// nodes; anything this small is machine zero, while genuinely transported
/// interface mass sits many orders of magnitude above it.
pub const VACUUM_EPS: f64 = 1e-20;

/// Nodal profiles `(rho, u, B)` at time `t`.
///
/// Invariants: `rho >= 0` as stored (the velocity-mass floor is applied only
/// inside momentum solves, never written back), `u[0] = B[0] = 0` at the
/// center, `u[n] = 0` at the wall, all values finite.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialState {
    pub t: f64,
    pub rho: Vec<f64>,
    pub u: Vec<f64>,
    pub b: Vec<f64>,
}

impl RadialState {
    pub fn zeros(grid: &RadialGrid) -> Self {
        Self {
            t: 0.0,
            rho: vec![0.0; grid.len()],
            u: vec![0.0; grid.len()],
            b: vec![0.0; grid.len()],
        }
    }

    pub fn validate(&self, grid: &RadialGrid) -> Result<()> {
        let n = grid.len() - 1;
        if self.rho.len() != n + 1 || self.u.len() != n + 1 || self.b.len() != n + 1 {
            return Err(Error::InvalidProfile(format!(
                "state length mismatch: grid has {} nodes",
                n + 1
            )));
        }
        if !self.is_finite() || !self.t.is_finite() {
            return Err(Error::NonFinite("state"));
        }
        if self.rho.iter().any(|&v| v < 0.0) {
            return Err(Error::InvalidProfile("negative density".into()));
        }
        for (name, v) in [("u(0)", self.u[0]), ("B(0)", self.b[0]), ("u(R0)", self.u[n])] {
            if v != 0.0 {
                return Err(Error::InvalidProfile(format!("{name} must vanish, got {v}")));
            }
        }
        Ok(())
    }

    pub fn is_finite(&self) -> bool {
        self.rho.iter().all(|v| v.is_finite())
            && self.u.iter().all(|v| v.is_finite())
            && self.b.iter().all(|v| v.is_finite())
    }
}

/// Particle-path radius `R(t)` of the transported vacuum ball,
/// `R'(t) = u(R(t), t)`, `R(0) = r0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VacuumTracker {
    pub radius: f64,
    pub active: bool,
}

impl VacuumTracker {
    pub fn new(r0: f64) -> Self {
        Self { radius: r0, active: true }
    }

    pub fn inactive() -> Self {
        Self { radius: 0.0, active: false }
    }
}

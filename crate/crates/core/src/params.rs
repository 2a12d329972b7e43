//! Physical constants of the fluid and the domain radius.

use crate::error::{Error, Result};

/// Viscosities, pressure law, and the disc radius.
///
/// Only the combination `2 mu + lambda` enters the radial momentum equation;
/// it is exposed as [`FluidParams::effective_viscosity`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FluidParams {
    /// Shear viscosity, `> 0`.
    pub mu: f64,
    /// Bulk viscosity; must satisfy `lambda + mu >= 0` (2-D condition).
    pub lambda: f64,
    /// Pressure constant `a > 0` in `p = a rho^gamma`.
    pub a_pressure: f64,
    /// Adiabatic exponent, `> 1`.
    pub gamma: f64,
    /// Domain radius `R0 > 0`.
    pub domain_radius: f64,
}

impl FluidParams {
    pub fn new(mu: f64, lambda: f64, a_pressure: f64, gamma: f64, domain_radius: f64) -> Result<Self> {
        let p = Self { mu, lambda, a_pressure, gamma, domain_radius };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParams(msg));
        if !(self.mu > 0.0) {
            return bad(format!("mu must be > 0, got {}", self.mu));
        }
        if !(self.lambda + self.mu >= 0.0) {
            return bad(format!("lambda + mu must be >= 0, got {}", self.lambda + self.mu));
        }
        if !(self.a_pressure > 0.0) {
            return bad(format!("a must be > 0, got {}", self.a_pressure));
        }
        if !(self.gamma > 1.0) {
            return bad(format!("gamma must be > 1, got {}", self.gamma));
        }
        if !(self.domain_radius > 0.0) {
            return bad(format!("R0 must be > 0, got {}", self.domain_radius));
        }
        for (name, v) in [
            ("mu", self.mu),
            ("lambda", self.lambda),
            ("a", self.a_pressure),
            ("gamma", self.gamma),
            ("R0", self.domain_radius),
        ] {
            if !v.is_finite() {
                return bad(format!("{name} must be finite"));
            }
        }
        Ok(())
    }

    /// `2 mu + lambda`, the coefficient of the radial viscous operator.
    #[inline]
    pub fn effective_viscosity(&self) -> f64 {
        2.0 * self.mu + self.lambda
    }

    /// `p(rho) = a rho^gamma`, with a fast path for `gamma = 2`.
    #[inline]
    pub fn pressure(&self, rho: f64) -> f64 {
        if self.gamma == 2.0 {
            self.a_pressure * rho * rho
        } else {
            self.a_pressure * rho.powf(self.gamma)
        }
    }

    /// Adiabatic sound speed `sqrt(gamma a rho^(gamma-1))`.
    #[inline]
    pub fn sound_speed(&self, rho: f64) -> f64 {
        let rho = rho.max(0.0);
        if self.gamma == 2.0 {
            (2.0 * self.a_pressure * rho).sqrt()
        } else {
            (self.gamma * self.a_pressure * rho.powf(self.gamma - 1.0)).sqrt()
        }
    }
}

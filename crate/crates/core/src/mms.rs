//! Manufactured smooth solution and its source terms.
//!
//! The exact fields (with `k = pi / R0`):
//!
//! ```text
//! rho*(r,t) = 1 + C exp(-t) (r/R0)^2
//! u*(r,t)   = A exp(-t) sin(k r)
//! B*(r,t)   = A exp(-t) sin(k r)
//! ```
//!
//! satisfy `u*(0) = u*(R0) = B*(0) = 0` and `rho* >= 1`.  Substituting them
//! into the reduced system leaves residuals that are added to the solver as
//! sources, so the discrete solution should converge to the exact fields.
//! Derivatives below are closed-form; the geometric quotients take their
//! center limits where needed.

use crate::params::FluidParams;
use crate::solver::SourceTerms;

const AMP: f64 = 0.1;
const RHO_AMP: f64 = 0.5;

#[derive(Debug, Clone, Copy)]
pub struct Manufactured {
    pub params: FluidParams,
}

impl Manufactured {
    pub fn new(params: FluidParams) -> Self {
        Self { params }
    }

    #[inline]
    fn k(&self) -> f64 {
        std::f64::consts::PI / self.params.domain_radius
    }

    pub fn rho(&self, r: f64, t: f64) -> f64 {
        let s = r / self.params.domain_radius;
        1.0 + RHO_AMP * (-t).exp() * s * s
    }

    pub fn u(&self, r: f64, t: f64) -> f64 {
        AMP * (-t).exp() * (self.k() * r).sin()
    }

    pub fn b(&self, r: f64, t: f64) -> f64 {
        self.u(r, t)
    }

    fn rho_t(&self, r: f64, t: f64) -> f64 {
        let s = r / self.params.domain_radius;
        -RHO_AMP * (-t).exp() * s * s
    }

    fn rho_r(&self, r: f64, t: f64) -> f64 {
        let r0 = self.params.domain_radius;
        2.0 * RHO_AMP * (-t).exp() * r / (r0 * r0)
    }

    fn u_r(&self, r: f64, t: f64) -> f64 {
        AMP * self.k() * (-t).exp() * (self.k() * r).cos()
    }

    fn b_r(&self, r: f64, t: f64) -> f64 {
        self.u_r(r, t)
    }

    /// `u/r` with its center limit `u_r(0)`.
    fn u_over_r(&self, r: f64, t: f64) -> f64 {
        if r == 0.0 {
            self.u_r(0.0, t)
        } else {
            self.u(r, t) / r
        }
    }

    /// `B/r` with its center limit `B_r(0)`.
    fn b_over_r(&self, r: f64, t: f64) -> f64 {
        self.u_over_r(r, t)
    }

    /// `(u_r + u/r)_r = u_rr + u_r/r - u/r^2`; center limit is 0.
    fn visc_op(&self, r: f64, t: f64) -> f64 {
        if r == 0.0 {
            return 0.0;
        }
        let k = self.k();
        let u_rr = -k * k * self.u(r, t);
        u_rr + self.u_r(r, t) / r - self.u(r, t) / (r * r)
    }
}

impl SourceTerms for Manufactured {
    fn rho(&self, r: f64, t: f64) -> f64 {
        self.rho_t(r, t)
            + self.rho_r(r, t) * self.u(r, t)
            + self.rho(r, t) * (self.u_r(r, t) + self.u_over_r(r, t))
    }

    fn momentum(&self, r: f64, t: f64) -> f64 {
        let p = &self.params;
        let rho = self.rho(r, t);
        let u = self.u(r, t);
        let u_t = -u;
        let p_r = if p.gamma == 2.0 {
            2.0 * p.a_pressure * rho * self.rho_r(r, t)
        } else {
            p.gamma * p.a_pressure * rho.powf(p.gamma - 1.0) * self.rho_r(r, t)
        };
        let b = self.b(r, t);
        let lorentz = b * (self.b_r(r, t) + self.b_over_r(r, t));
        rho * (u_t + u * self.u_r(r, t)) + p_r - p.effective_viscosity() * self.visc_op(r, t)
            + lorentz
    }

    fn induction(&self, r: f64, t: f64) -> f64 {
        let b_t = -self.b(r, t);
        b_t + self.u_r(r, t) * self.b(r, t) + self.u(r, t) * self.b_r(r, t)
    }
}

/// Convergence study against the manufactured solution: integrates with the
/// sources on `levels` grids (doubling from `base_n`) to `t_final` and
/// returns the combined weighted L2 error of `(rho, u, B)` per grid.
pub fn convergence_study(
    params: &FluidParams,
    base_n: usize,
    levels: usize,
    t_final: f64,
) -> crate::error::Result<Vec<(usize, f64)>> {
    use crate::grid::RadialGrid;
    use crate::solver;
    use crate::state::RadialState;

    let m = Manufactured::new(*params);
    let mut out = Vec::new();
    for level in 0..levels.max(1) {
        let n = base_n << level;
        let grid = RadialGrid::new(n, params.domain_radius)?;
        let nodes = grid.nodes();
        let mut state = RadialState {
            t: 0.0,
            rho: nodes.iter().map(|&r| m.rho(r, 0.0)).collect(),
            u: nodes.iter().map(|&r| m.u(r, 0.0)).collect(),
            b: nodes.iter().map(|&r| m.b(r, 0.0)).collect(),
        };
        state.u[0] = 0.0;
        state.u[n] = 0.0;
        state.b[0] = 0.0;
        while state.t < t_final - 1e-14 {
            let dt = solver::stable_dt(&state, params, &grid, 0.4, 1e-10)
                .min(t_final - state.t)
                .min(t_final / 20.0);
            let (next, _) = solver::step_with_sources(&state, params, &grid, dt, 1e-10, Some(&m))?;
            state = next;
        }
        let diff = |exact: &dyn Fn(f64, f64) -> f64, field: &[f64]| -> Vec<f64> {
            nodes
                .iter()
                .zip(field)
                .map(|(&r, &v)| v - exact(r, state.t))
                .collect()
        };
        let er = grid.weighted_l2_unchecked(&diff(&|r, t| m.rho(r, t), &state.rho));
        let eu = grid.weighted_l2_unchecked(&diff(&|r, t| m.u(r, t), &state.u));
        let eb = grid.weighted_l2_unchecked(&diff(&|r, t| m.b(r, t), &state.b));
        out.push((n, (er * er + eu * eu + eb * eb).sqrt()));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mms() -> Manufactured {
        Manufactured::new(FluidParams::new(1.0, 1.0, 1.0, 2.0, 1.0).unwrap())
    }

    #[test]
    fn fields_respect_boundary_conditions() {
        let m = mms();
        for t in [0.0, 0.05] {
            assert_eq!(m.u(0.0, t), 0.0);
            assert!(m.u(1.0, t).abs() < 1e-15);
            assert_eq!(m.b(0.0, t), 0.0);
            assert!(m.rho(0.5, t) > 1.0);
        }
    }

    /// The closed-form sources must agree with finite differences of the
    /// exact fields substituted into the PDE residuals.
    #[test]
    fn sources_match_finite_difference_residuals() {
        let m = mms();
        let eps = 1e-6;
        let visc = m.params.effective_viscosity();
        for &r in &[0.13, 0.4, 0.77] {
            let t = 0.02;
            let ddr = |f: &dyn Fn(f64) -> f64| (f(r + eps) - f(r - eps)) / (2.0 * eps);
            let ddt = |f: &dyn Fn(f64) -> f64, at: f64| (f(at + eps) - f(at - eps)) / (2.0 * eps);

            let s_rho_fd = ddt(&|tt| m.rho(r, tt), t)
                + ddr(&|rr| m.rho(rr, t) * m.u(rr, t))
                + m.rho(r, t) * m.u(r, t) / r;
            assert!((SourceTerms::rho(&m, r, t) - s_rho_fd).abs() < 1e-6, "rho source at r={r}");

            let s_b_fd = ddt(&|tt| m.b(r, tt), t) + ddr(&|rr| m.u(rr, t) * m.b(rr, t));
            assert!((m.induction(r, t) - s_b_fd).abs() < 1e-6, "induction source at r={r}");

            let divu = |rr: f64| {
                (m.u(rr + eps, t) - m.u(rr - eps, t)) / (2.0 * eps) + m.u(rr, t) / rr
            };
            let s_m_fd = m.rho(r, t) * (ddt(&|tt| m.u(r, tt), t) + m.u(r, t) * ddr(&|rr| m.u(rr, t)))
                + ddr(&|rr| m.params.pressure(m.rho(rr, t)))
                - visc * (divu(r + eps) - divu(r - eps)) / (2.0 * eps)
                + m.b(r, t) * (ddr(&|rr| m.b(rr, t)) + m.b(r, t) / r);
            assert!((m.momentum(r, t) - s_m_fd).abs() < 2e-4, "momentum source at r={r}");
        }
    }
}

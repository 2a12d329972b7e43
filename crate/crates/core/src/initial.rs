//! Initial-state construction: profile sampling with boundary enforcement,
//! and the balance-compatible initial velocity.

use crate::error::{Error, Result};
use crate::grid::RadialGrid;
use crate::params::FluidParams;
use crate::profile::ProfileSpec;
use crate::scenario::Scenario;
use crate::state::RadialState;

/// Absolute tolerance for "must vanish" checks on sampled endpoints.
const ENDPOINT_TOL: f64 = 1e-12;

/// Samples the scenario's profiles at the nodes, enforcing
/// `u(0) = B(0) = u(R0) = 0` and an exact vacuum on `[0, r0]` when present.
pub fn build_initial_state(scenario: &Scenario, grid: &RadialGrid) -> Result<RadialState> {
    scenario.validate()?;
    let r0_dom = scenario.params.domain_radius;
    let n = grid.len() - 1;

    let sample = |spec: &ProfileSpec, name: &str| -> Result<Vec<f64>> {
        let mut out = Vec::with_capacity(grid.len());
        for &r in grid.nodes() {
            let v = spec.sample(r, r0_dom)?;
            if !v.is_finite() {
                return Err(Error::InvalidProfile(format!("{name} non-finite at r = {r}")));
            }
            out.push(v);
        }
        Ok(out)
    };

    let mut rho = sample(&scenario.rho0, "rho0")?;
    let mut b = sample(&scenario.b0, "B0")?;

    if rho.iter().any(|&v| v < 0.0) {
        return Err(Error::InvalidProfile("rho0 must be nonnegative".into()));
    }
    if b[0].abs() > ENDPOINT_TOL {
        return Err(Error::InvalidProfile(format!(
            "B0(0) = {} violates center regularity (must be 0)",
            b[0]
        )));
    }
    b[0] = 0.0;

    if let Some(r_vac) = scenario.vacuum_radius {
        for (i, &r) in grid.nodes().iter().enumerate() {
            if r <= r_vac && rho[i] != 0.0 {
                return Err(Error::InvalidProfile(format!(
                    "vacuum requested on [0, {r_vac}] but rho0({r}) = {}",
                    rho[i]
                )));
            }
        }
        for (i, &r) in grid.nodes().iter().enumerate() {
            if r <= r_vac {
                rho[i] = 0.0;
            }
        }
    }

    let mut u = match &scenario.u0 {
        ProfileSpec::Compatible => build_compatible_u0(&scenario.params, &rho, &b, grid)?,
        spec => {
            let u = sample(spec, "u0")?;
            if u[0].abs() > ENDPOINT_TOL || u[n].abs() > ENDPOINT_TOL {
                return Err(Error::InvalidProfile(format!(
                    "u0 must vanish at r = 0 and r = R0, got ({}, {})",
                    u[0], u[n]
                )));
            }
            u
        }
    };
    u[0] = 0.0;
    u[n] = 0.0;

    let state = RadialState { t: 0.0, rho, u, b };
    state.validate(grid)?;
    Ok(state)
}

/// Solves the initial force balance for the velocity:
///
/// ```text
/// (2 mu + lambda)(u_r + u/r)_r = p_r + B0 (B0_r + B0/r)
/// ```
///
/// with `u(R0) = 0`.  Writing `G(r) = int_0^r [p_r + B0(B0_r + B0/r)] ds + c`,
/// the solution is `u(r) = int_0^r s G(s) ds / ((2 mu + lambda) r)`; `u(0) = 0`
/// is automatic and `u` depends affinely on `c`, so the wall condition fixes
/// `c` by one scalar solve.
pub fn build_compatible_u0(
    params: &FluidParams,
    rho0: &[f64],
    b0: &[f64],
    grid: &RadialGrid,
) -> Result<Vec<f64>> {
    if rho0.iter().chain(b0.iter()).any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("build_compatible_u0 input"));
    }
    if b0[0].abs() > ENDPOINT_TOL {
        return Err(Error::InvalidProfile("B0(0) must vanish".into()));
    }
    let n = grid.len() - 1;
    let r = grid.nodes();
    let visc = params.effective_viscosity();

    let p: Vec<f64> = rho0.iter().map(|&d| params.pressure(d)).collect();
    let p_r = grid.deriv(&p);
    let b_r = grid.deriv(b0);

    let mut force = vec![0.0; n + 1];
    force[0] = p_r[0]; // B-term limit is 0 since B0(0) = 0
    for i in 1..=n {
        force[i] = p_r[i] + b0[i] * (b_r[i] + b0[i] / r[i]);
    }

    let g0 = grid.cumtrapz(&force);
    let sg0: Vec<f64> = g0.iter().zip(r).map(|(g, &ri)| g * ri).collect();
    let h0 = grid.cumtrapz(&sg0);

    // u(R0) = (h0[n] + c R0^2/2) / (visc R0) = 0.
    let r_out = grid.domain_radius();
    let c = -h0[n] / (r_out * r_out / 2.0);

    let mut u = vec![0.0; n + 1];
    for i in 1..=n {
        u[i] = (h0[i] + c * r[i] * r[i] / 2.0) / (visc * r[i]);
    }
    u[n] = 0.0;
    Ok(u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profile::ProfileSpec;

    fn params(visc_mu: f64, lambda: f64) -> FluidParams {
        FluidParams::new(visc_mu, lambda, 1.0, 2.0, 1.0).unwrap()
    }

    #[test]
    fn uniform_preset_state() {
        let sc = Scenario::uniform(params(1.0, 1.0), 64, 1.0, 0.1);
        let grid = RadialGrid::new(sc.n, 1.0).unwrap();
        let st = build_initial_state(&sc, &grid).unwrap();
        assert!(st.rho.iter().all(|&v| v == 1.0));
        assert!(st.u.iter().all(|&v| v == 0.0));
        assert!(st.b.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn vacuum_ball_state_has_exact_vacuum_and_quarter_charge() {
        let sc = Scenario::vacuum_ball(128, 20.0);
        let grid = RadialGrid::new(sc.n, 1.0).unwrap();
        let st = build_initial_state(&sc, &grid).unwrap();
        for (i, &r) in grid.nodes().iter().enumerate() {
            if r <= 0.5 {
                assert_eq!(st.rho[i], 0.0);
            }
        }
        // int_0^{0.5} sin^2(2 pi r) dr = 0.25; trapezoid error O(h^2).
        let q = grid.trapezoid_to(&st.b, 0.5);
        assert!((q - 0.25).abs() < 1e-4, "q = {q}");
    }

    #[test]
    fn nonzero_center_field_is_rejected() {
        let mut sc = Scenario::vacuum_ball(64, 1.0);
        sc.b0 = ProfileSpec::Constant(0.3);
        let grid = RadialGrid::new(sc.n, 1.0).unwrap();
        let err = build_initial_state(&sc, &grid).unwrap_err();
        assert!(err.to_string().contains("center regularity"), "{err}");
    }

    #[test]
    fn positive_density_inside_vacuum_is_rejected() {
        let mut sc = Scenario::vacuum_ball(64, 1.0);
        sc.rho0 = ProfileSpec::Constant(0.5);
        let grid = RadialGrid::new(sc.n, 1.0).unwrap();
        assert!(build_initial_state(&sc, &grid).is_err());
    }

    #[test]
    fn compatible_u0_zero_forcing() {
        let grid = RadialGrid::new(64, 1.0).unwrap();
        let rho0 = vec![1.0; grid.len()];
        let b0 = vec![0.0; grid.len()];
        let u = build_compatible_u0(&params(1.0, 1.0), &rho0, &b0, &grid).unwrap();
        assert!(u.iter().all(|&v| v.abs() < 1e-14));
    }

    /// With `B0 = r`, vacuum density, and `2 mu + lambda = 3`, the balance
    /// integrates in closed form to `u0 = r (r^2 - 1) / 12`.
    #[test]
    fn compatible_u0_matches_closed_form() {
        let p = params(1.0, 1.0); // 2 mu + lambda = 3
        for (n, tol) in [(64usize, 3e-4), (128, 8e-5)] {
            let grid = RadialGrid::new(n, 1.0).unwrap();
            let rho0 = vec![0.0; grid.len()];
            let b0: Vec<f64> = grid.nodes().to_vec();
            let u = build_compatible_u0(&p, &rho0, &b0, &grid).unwrap();
            let mut worst = 0.0f64;
            for (i, &r) in grid.nodes().iter().enumerate() {
                worst = worst.max((u[i] - r * (r * r - 1.0) / 12.0).abs());
            }
            assert!(worst < tol, "n = {n}, max err {worst}");
            assert_eq!(u[0], 0.0);
            assert_eq!(u[n], 0.0);
        }
    }

    /// Finite-difference residual of the balance on the closed-form output.
    #[test]
    fn compatible_u0_residual_is_second_order() {
        let p = params(1.0, 1.0);
        let mut errs = Vec::new();
        for n in [64usize, 128, 256] {
            let grid = RadialGrid::new(n, 1.0).unwrap();
            let rho0 = vec![0.0; grid.len()];
            let b0: Vec<f64> = grid.nodes().to_vec();
            let u = build_compatible_u0(&p, &rho0, &b0, &grid).unwrap();
            let r = grid.nodes();
            let mut divu = vec![0.0; grid.len()];
            let u_r = grid.deriv(&u);
            divu[0] = 2.0 * u_r[0];
            for i in 1..grid.len() {
                divu[i] = u_r[i] + u[i] / r[i];
            }
            let ddiv = grid.deriv(&divu);
            let mut worst = 0.0f64;
            for i in 1..grid.len() - 1 {
                let force = b0[i] * (1.0 + 1.0); // B(B_r + B/r) with B = r
                worst = worst.max((3.0 * ddiv[i] - force).abs());
            }
            errs.push(worst);
        }
        // Order >= ~2 between successive refinements.
        assert!(errs[1] < errs[0] / 3.2, "{errs:?}");
        assert!(errs[2] < errs[1] / 3.2, "{errs:?}");
    }

    /// Refining the grid must converge to the closed form at second order.
    #[test]
    fn compatible_u0_second_order_convergence() {
        let p = params(1.0, 1.0);
        let mut errs = Vec::new();
        for n in [32usize, 64, 128] {
            let grid = RadialGrid::new(n, 1.0).unwrap();
            let rho0 = vec![0.0; grid.len()];
            let b0: Vec<f64> = grid.nodes().to_vec();
            let u = build_compatible_u0(&p, &rho0, &b0, &grid).unwrap();
            let err = grid
                .nodes()
                .iter()
                .enumerate()
                .map(|(i, &r)| (u[i] - r * (r * r - 1.0) / 12.0).abs())
                .fold(0.0f64, f64::max);
            errs.push(err);
        }
        let order1 = (errs[0] / errs[1]).log2();
        let order2 = (errs[1] / errs[2]).log2();
        assert!(order1 > 1.8 && order2 > 1.8, "orders {order1:.2} {order2:.2}");
    }
}

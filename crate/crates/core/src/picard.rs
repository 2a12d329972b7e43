//! Linearized successive approximation on a short time slab.
//!
//! The chain starts from the heat flow of `u0` and repeatedly solves the
//! linear transport, induction, and momentum problems with the advection
//! velocity frozen at the previous iterate.  Contraction is tracked through
//!
//! ```text
//! psi_i = sup_t ( ||rho_i - rho_{i-1}||^2 + ||B_i - B_{i-1}||^2
//!                 + ||sqrt(rho_i) (u_i - u_{i-1})||^2 )
//! ```
//!
//! and the time integral of the gradient difference.  All norms are the
//! `r dr`-weighted ones.

use crate::error::{Error, Result};
use crate::grid::RadialGrid;
use crate::initial::build_initial_state;
use crate::params::FluidParams;
use crate::scenario::Scenario;
use crate::solver::{control_volumes, transport_b_step, transport_rho_step, viscous_rows};
use crate::tridiag;

/// Profiles at every slab time level, time-major: `slab[m][i]`.
pub type Slab = Vec<Vec<f64>>;

/// One iterate of the chain with its contraction diagnostics.
///
/// `psi` and `grad_diff` compare against the previous iterate; they are
/// absent for the first full solve (there is no previous `(rho, B)` pair).
#[derive(Debug, Clone)]
pub struct PicardIterate {
    pub index: usize,
    pub rho: Slab,
    pub u: Slab,
    pub b: Slab,
    pub psi: Option<f64>,
    pub grad_diff: Option<f64>,
}

fn slab_steps(t_horizon: f64, dt: f64) -> Result<usize> {
    if !(dt > 0.0) || !(t_horizon > 0.0) {
        return Err(Error::InvalidParams(format!(
            "slab needs positive horizon and dt, got T = {t_horizon}, dt = {dt}"
        )));
    }
    Ok(((t_horizon / dt) - 1e-9).ceil().max(1.0) as usize)
}

/// Implicit-Euler heat flow `w_t = (w_r + w/r)_r`, `w(0) = u0`,
/// `w(0, t) = w(R0, t) = 0`, stored at every slab time.
pub fn heat_init(u0: &[f64], grid: &RadialGrid, t_horizon: f64, dt: f64) -> Result<Slab> {
    let n = grid.len() - 1;
    if u0[0].abs() > 1e-12 || u0[n].abs() > 1e-12 {
        return Err(Error::InvalidProfile(format!(
            "heat flow data must vanish at both ends, got ({}, {})",
            u0[0], u0[n]
        )));
    }
    let steps = slab_steps(t_horizon, dt)?;
    let mut lo = vec![0.0; n + 1];
    let mut di = vec![0.0; n + 1];
    let mut up = vec![0.0; n + 1];
    viscous_rows(grid, 1.0, &mut lo, &mut di, &mut up);
    for i in 1..n {
        di[i] += 1.0 / dt;
    }
    di[0] = 1.0;
    di[n] = 1.0;

    let mut slab = Vec::with_capacity(steps + 1);
    slab.push(u0.to_vec());
    let mut rhs = vec![0.0; n + 1];
    for _ in 0..steps {
        let prev = slab.last().expect("nonempty slab");
        for i in 1..n {
            rhs[i] = prev[i] / dt;
        }
        rhs[0] = 0.0;
        rhs[n] = 0.0;
        tridiag::solve(&lo, &di, &up, &mut rhs)?;
        slab.push(rhs.clone());
    }
    Ok(slab)
}

/// Upwind solve of `rho_t + (rho v)_r + rho v / r = 0` with the given slab
/// velocity (the level-`m` velocity advances level `m` to `m+1`).
pub fn transport_solve(v: &Slab, rho0: &[f64], grid: &RadialGrid, dt: f64) -> Slab {
    let volumes = control_volumes(grid);
    let mut slab = Vec::with_capacity(v.len());
    slab.push(rho0.to_vec());
    let mut next = rho0.to_vec();
    for m in 0..v.len() - 1 {
        transport_rho_step(&mut next, slab.last().expect("nonempty"), &v[m], grid, &volumes, dt);
        slab.push(next.clone());
    }
    slab
}

/// Upwind solve of `B_t + (v B)_r = 0`.
pub fn induction_solve(v: &Slab, b0: &[f64], grid: &RadialGrid, dt: f64) -> Slab {
    let mut slab = Vec::with_capacity(v.len());
    slab.push(b0.to_vec());
    let mut next = b0.to_vec();
    for m in 0..v.len() - 1 {
        transport_b_step(&mut next, slab.last().expect("nonempty"), &v[m], grid, dt);
        slab.push(next.clone());
    }
    slab
}

/// Implicit-Euler solve of the linear momentum equation
///
/// ```text
/// rho u_t + rho v u_r + p(rho)_r = (2mu+lambda)(u_r + u/r)_r - B(B_r + B/r)
/// ```
///
/// per slab step, advection upwinded inside the tridiagonal system,
/// `u(0) = u(R0) = 0`.  The slabs `rho`, `B`, `v` must share the time grid.
pub fn momentum_solve(
    rho: &Slab,
    b: &Slab,
    v: &Slab,
    u0: &[f64],
    params: &FluidParams,
    grid: &RadialGrid,
    dt: f64,
) -> Result<Slab> {
    let n = grid.len() - 1;
    let h = grid.spacing();
    let r = grid.nodes();
    let visc = params.effective_viscosity();

    let mut visc_lo = vec![0.0; n + 1];
    let mut visc_di = vec![0.0; n + 1];
    let mut visc_up = vec![0.0; n + 1];
    viscous_rows(grid, visc, &mut visc_lo, &mut visc_di, &mut visc_up);

    let mut slab = Vec::with_capacity(v.len());
    slab.push(u0.to_vec());
    let mut lo = vec![0.0; n + 1];
    let mut di = vec![0.0; n + 1];
    let mut up = vec![0.0; n + 1];
    let mut rhs = vec![0.0; n + 1];
    let mut p = vec![0.0; n + 1];

    for m in 1..v.len() {
        let rho_m = &rho[m];
        let b_m = &b[m];
        let v_m = &v[m];
        for i in 0..=n {
            p[i] = params.pressure(rho_m[i]);
        }
        let prev = slab.last().expect("nonempty");
        for i in 1..n {
            lo[i] = visc_lo[i];
            di[i] = visc_di[i] + rho_m[i] / dt;
            up[i] = visc_up[i];
            let adv = rho_m[i] * v_m[i] / h;
            if v_m[i] > 0.0 {
                di[i] += adv;
                lo[i] -= adv;
            } else {
                di[i] -= adv;
                up[i] += adv;
            }
            let p_r = (p[i + 1] - p[i - 1]) / (2.0 * h);
            let b_r = (b_m[i + 1] - b_m[i - 1]) / (2.0 * h);
            let lorentz = -b_m[i] * (b_r + b_m[i] / r[i]);
            rhs[i] = rho_m[i] / dt * prev[i] - p_r + lorentz;
        }
        lo[0] = 0.0;
        di[0] = 1.0;
        up[0] = 0.0;
        rhs[0] = 0.0;
        lo[n] = 0.0;
        di[n] = 1.0;
        up[n] = 0.0;
        rhs[n] = 0.0;
        tridiag::solve(&lo, &di, &up, &mut rhs).map_err(|e| {
            Error::Singular(format!("momentum solve at slab level {m}: {e} (delta too small for this grid?)"))
        })?;
        slab.push(rhs.clone());
    }
    Ok(slab)
}

/// Runs the full chain on explicit initial profiles.
///
/// The density is regularized to `rho0 + delta` before the first solve.
/// Stops after `n_iters` iterates or once `psi < 1e-14`.
#[allow(clippy::too_many_arguments)]
pub fn iterate_profiles(
    params: &FluidParams,
    grid: &RadialGrid,
    rho0: &[f64],
    u0: &[f64],
    b0: &[f64],
    t_slab: f64,
    dt: f64,
    delta: f64,
    n_iters: usize,
) -> Result<Vec<PicardIterate>> {
    if !(delta > 0.0) {
        return Err(Error::InvalidParams(format!("delta must be > 0, got {delta}")));
    }
    let rho0_delta: Vec<f64> = rho0.iter().map(|&v| v + delta).collect();
    let mut u_prev = heat_init(u0, grid, t_slab, dt)?;
    let dt = t_slab / (u_prev.len() - 1) as f64;

    let mut out: Vec<PicardIterate> = Vec::new();
    for index in 1..=n_iters {
        let rho = transport_solve(&u_prev, &rho0_delta, grid, dt);
        let b = induction_solve(&u_prev, b0, grid, dt);
        let u = momentum_solve(&rho, &b, &u_prev, u0, params, grid, dt)?;

        let (psi, grad_diff) = match out.last() {
            None => (None, None),
            Some(prev) => {
                let mut psi = 0.0f64;
                let mut grads = Vec::with_capacity(u.len());
                for m in 0..u.len() {
                    let mut drho = vec![0.0; grid.len()];
                    let mut db = vec![0.0; grid.len()];
                    let mut du_w = vec![0.0; grid.len()];
                    for i in 0..grid.len() {
                        drho[i] = rho[m][i] - prev.rho[m][i];
                        db[i] = b[m][i] - prev.b[m][i];
                        du_w[i] = rho[m][i].max(0.0).sqrt() * (u[m][i] - prev.u[m][i]);
                    }
                    let nr = grid.weighted_l2_unchecked(&drho);
                    let nb = grid.weighted_l2_unchecked(&db);
                    let nu = grid.weighted_l2_unchecked(&du_w);
                    psi = psi.max(nr * nr + nb * nb + nu * nu);

                    let du: Vec<f64> =
                        u[m].iter().zip(&prev.u[m]).map(|(a, b)| a - b).collect();
                    let g = grid.weighted_l2_unchecked(&grid.deriv(&du));
                    grads.push(g * g);
                }
                let mut gq = 0.0;
                for m in 0..grads.len() - 1 {
                    gq += 0.5 * (grads[m] + grads[m + 1]) * dt;
                }
                (Some(psi), Some(gq))
            }
        };

        let done = matches!(psi, Some(p) if p < 1e-14);
        u_prev = u.clone();
        out.push(PicardIterate { index, rho, u, b, psi, grad_diff });
        if done {
            break;
        }
    }
    Ok(out)
}

/// Chain driver for a scenario: slab horizon `t_end`, step chosen against a
/// conservative velocity cap for the upwind sub-solves.
pub fn iterate(scenario: &Scenario, delta: f64, n_iters: usize) -> Result<Vec<PicardIterate>> {
    scenario.validate()?;
    let grid = RadialGrid::new(scenario.n, scenario.params.domain_radius)?;
    let state = build_initial_state(scenario, &grid)?;
    let v_cap = 1.0 + 4.0 * state.u.iter().fold(0.0f64, |m, &v| m.max(v.abs()));
    let dt = (0.5 * grid.spacing() / v_cap).min(scenario.t_end / 8.0);
    iterate_profiles(
        &scenario.params,
        &grid,
        &state.rho,
        &state.u,
        &state.b,
        scenario.t_end,
        dt,
        delta,
        n_iters,
    )
}

/// True when `psi` grew on three consecutive comparisons.
pub fn diverged(iterates: &[PicardIterate]) -> bool {
    let psis: Vec<f64> = iterates.iter().filter_map(|it| it.psi).collect();
    psis.windows(4).any(|w| w[1] > w[0] && w[2] > w[1] && w[3] > w[2])
}

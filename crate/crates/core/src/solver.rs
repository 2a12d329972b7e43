//! Time integration of the radial system with vacuum-tolerant viscosity.
//!
//! Each step splits into: (1) conservative first-order upwind transport of
//! `rho` and `B`; (2) upwinded advection of `u`; (3) one implicit solve of
//! the viscous operator with the pressure gradient and Lorentz force on the
//! right-hand side and velocity mass `max(rho, rho_floor)`.  In vacuum the
//! mass term is negligible against the viscous rows, so the solve lands on
//! the quasi-static balance `(2mu+lambda) d_r div u = B (B_r + B/r)` without
//! ever dividing by the density.

use crate::diagnostics::{self, DiagnosticsRecord};
use crate::error::{Error, Result};
use crate::grid::RadialGrid;
use crate::initial::build_initial_state;
use crate::params::FluidParams;
use crate::scenario::{Scenario, DT_MIN};
use crate::state::{RadialState, VacuumTracker};
use crate::tridiag;

/// Optional manufactured source terms, evaluated pointwise at `(r, t)`.
pub trait SourceTerms {
    fn rho(&self, r: f64, t: f64) -> f64;
    fn momentum(&self, r: f64, t: f64) -> f64;
    fn induction(&self, r: f64, t: f64) -> f64;
}

/// Per-step accounting.
#[derive(Debug, Clone, Copy)]
pub struct StepReport {
    pub dt_used: f64,
    pub max_wave_speed: f64,
    /// Direct tridiagonal solve: always one.
    pub viscous_solve_iters: usize,
    /// Nodes whose velocity mass was lifted to the floor.
    pub floored_nodes: usize,
}

/// Why a run stopped, with the triggering time and value.
#[derive(Debug, Clone, PartialEq)]
pub enum TerminationReason {
    ReachedTEnd { t: f64 },
    BlowupDetected { t: f64, max_grad: f64 },
    DtUnderflow { t: f64, dt: f64 },
    InvariantViolation { t: f64, what: String },
}

impl TerminationReason {
    pub fn label(&self) -> &'static str {
        match self {
            TerminationReason::ReachedTEnd { .. } => "ReachedTEnd",
            TerminationReason::BlowupDetected { .. } => "BlowupDetected",
            TerminationReason::DtUnderflow { .. } => "DtUnderflow",
            TerminationReason::InvariantViolation { .. } => "InvariantViolation",
        }
    }

    pub fn time(&self) -> f64 {
        match self {
            TerminationReason::ReachedTEnd { t }
            | TerminationReason::BlowupDetected { t, .. }
            | TerminationReason::DtUnderflow { t, .. }
            | TerminationReason::InvariantViolation { t, .. } => *t,
        }
    }
}

/// `div u = u_r + u/r`: centered differences inside, one-sided at the wall,
/// `2 u_r(0)` at the center.
pub fn div_u(state: &RadialState, grid: &RadialGrid) -> Vec<f64> {
    let n = grid.len() - 1;
    let r = grid.nodes();
    let u_r = grid.deriv(&state.u);
    let mut d = vec![0.0; n + 1];
    d[0] = 2.0 * u_r[0];
    for i in 1..=n {
        d[i] = u_r[i] + state.u[i] / r[i];
    }
    d
}

/// Lorentz force `-B (B_r + B/r)`; zero at the center where `B(0) = 0`.
pub fn lorentz_force(state: &RadialState, grid: &RadialGrid) -> Vec<f64> {
    let n = grid.len() - 1;
    let r = grid.nodes();
    let b_r = grid.deriv(&state.b);
    let mut f = vec![0.0; n + 1];
    for i in 1..=n {
        f[i] = -state.b[i] * (b_r[i] + state.b[i] / r[i]);
    }
    f
}

/// Wave-speed step bound `cfl h / max(|u| + c_s + |B|/sqrt(max(rho, floor)))`.
///
/// The implicit viscous solve imposes no restriction.  Returns infinity for
/// a quiescent state; the run loop caps it at `Scenario::dt_max`.
pub fn stable_dt(
    state: &RadialState,
    params: &FluidParams,
    grid: &RadialGrid,
    cfl: f64,
    rho_floor: f64,
) -> f64 {
    let mut speed = 0.0f64;
    for i in 0..grid.len() {
        let s = state.u[i].abs()
            + params.sound_speed(state.rho[i])
            + state.b[i].abs() / state.rho[i].max(rho_floor).sqrt();
        speed = speed.max(s);
    }
    if speed <= f64::MIN_POSITIVE {
        f64::INFINITY
    } else {
        cfl * grid.spacing() / speed
    }
}

/// Geometric control volumes: `int r dr` over each node's cell, so the
/// upwind density update telescopes and the discrete mass
/// `sum_i V_i rho_i` is conserved to rounding.
pub fn control_volumes(grid: &RadialGrid) -> Vec<f64> {
    let n = grid.len() - 1;
    let h = grid.spacing();
    let r = grid.nodes();
    let mut v = vec![0.0; n + 1];
    v[0] = h * h / 8.0;
    for i in 1..n {
        v[i] = r[i] * h;
    }
    v[n] = r[n] * h / 2.0 - h * h / 8.0;
    v
}

/// Discrete mass in the scheme's control-volume quadrature.
pub fn mass(state: &RadialState, grid: &RadialGrid) -> f64 {
    control_volumes(grid)
        .iter()
        .zip(&state.rho)
        .map(|(v, rho)| v * rho)
        .sum()
}

/// One conservative upwind update of `rho_t + (rho u)_r + rho u / r = 0`.
///
/// Face fluxes `r u rho_up` with arithmetic-mean face velocities; the wall
/// flux uses the nodal `u(R0)` (zero under the solver's boundary condition).
pub fn transport_rho_step(
    rho_next: &mut [f64],
    rho: &[f64],
    u: &[f64],
    grid: &RadialGrid,
    volumes: &[f64],
    dt: f64,
) {
    let n = grid.len() - 1;
    let h = grid.spacing();
    let r = grid.nodes();
    let mut flux_prev = 0.0; // face -1/2 (center): no flux through r = 0
    for i in 0..n {
        let uf = 0.5 * (u[i] + u[i + 1]);
        let rf = r[i] + 0.5 * h;
        let upwind = if uf > 0.0 { rho[i] } else { rho[i + 1] };
        let flux = rf * uf * upwind;
        rho_next[i] = rho[i] - dt * (flux - flux_prev) / volumes[i];
        flux_prev = flux;
    }
    let wall_flux = r[n] * u[n] * rho[n];
    rho_next[n] = rho[n] - dt * (wall_flux - flux_prev) / volumes[n];
}

/// One conservative upwind update of `B_t + (u B)_r = 0`.
///
/// The center value stays pinned at zero (regularity); the wall node is a
/// half cell whose outer flux uses the nodal `u(R0)`.
pub fn transport_b_step(b_next: &mut [f64], b: &[f64], u: &[f64], grid: &RadialGrid, dt: f64) {
    let n = grid.len() - 1;
    let h = grid.spacing();
    b_next[0] = 0.0;
    let mut flux_prev = {
        let uf = 0.5 * (u[0] + u[1]);
        uf * if uf > 0.0 { b[0] } else { b[1] }
    };
    for i in 1..n {
        let uf = 0.5 * (u[i] + u[i + 1]);
        let flux = uf * if uf > 0.0 { b[i] } else { b[i + 1] };
        b_next[i] = b[i] - dt * (flux - flux_prev) / h;
        flux_prev = flux;
    }
    let wall_flux = u[n] * b[n];
    b_next[n] = b[n] - dt * (wall_flux - flux_prev) / (0.5 * h);
}

/// Fills rows `1..n-1` of the implicit momentum matrix with
/// `-visc * L` where `L u = ((r u)_r / r)_r` in its compact conservative
/// form `L u_i = (v_{i+1/2} - v_{i-1/2}) / h`,
/// `v_{i+1/2} = (r_{i+1} u_{i+1} - r_i u_i) / (h r_{i+1/2})`.
pub(crate) fn viscous_rows(
    grid: &RadialGrid,
    visc: f64,
    lo: &mut [f64],
    di: &mut [f64],
    up: &mut [f64],
) {
    let n = grid.len() - 1;
    let h = grid.spacing();
    let r = grid.nodes();
    let h2 = h * h;
    for i in 1..n {
        let rf_plus = r[i] + 0.5 * h;
        let rf_minus = r[i] - 0.5 * h;
        lo[i] = -visc * r[i - 1] / (h2 * rf_minus);
        di[i] = visc * (r[i] / rf_plus + r[i] / rf_minus) / h2;
        up[i] = -visc * r[i + 1] / (h2 * rf_plus);
    }
}

/// The compact discrete `d_r(div u)` used by the implicit solve (the
/// negative of `viscous_rows` applied to `u`, divided by `visc`).
pub fn grad_div_compact(u: &[f64], grid: &RadialGrid) -> Vec<f64> {
    let n = grid.len() - 1;
    let h = grid.spacing();
    let r = grid.nodes();
    let mut out = vec![0.0; n + 1];
    for i in 1..n {
        let rf_plus = r[i] + 0.5 * h;
        let rf_minus = r[i] - 0.5 * h;
        let v_plus = (r[i + 1] * u[i + 1] - r[i] * u[i]) / (h * rf_plus);
        let v_minus = (r[i] * u[i] - r[i - 1] * u[i - 1]) / (h * rf_minus);
        out[i] = (v_plus - v_minus) / h;
    }
    out
}

struct Scratch {
    p: Vec<f64>,
    p_r: Vec<f64>,
    b_r: Vec<f64>,
    u_star: Vec<f64>,
    lo: Vec<f64>,
    di: Vec<f64>,
    up: Vec<f64>,
    rhs: Vec<f64>,
    volumes: Vec<f64>,
}

impl Scratch {
    fn new(grid: &RadialGrid) -> Self {
        let len = grid.len();
        Self {
            p: vec![0.0; len],
            p_r: vec![0.0; len],
            b_r: vec![0.0; len],
            u_star: vec![0.0; len],
            lo: vec![0.0; len],
            di: vec![0.0; len],
            up: vec![0.0; len],
            rhs: vec![0.0; len],
            volumes: control_volumes(grid),
        }
    }
}

fn step_into(
    state: &RadialState,
    next: &mut RadialState,
    params: &FluidParams,
    grid: &RadialGrid,
    dt: f64,
    rho_floor: f64,
    sources: Option<&dyn SourceTerms>,
    ws: &mut Scratch,
) -> Result<StepReport> {
    let n = grid.len() - 1;
    let h = grid.spacing();
    let r = grid.nodes();
    let visc = params.effective_viscosity();
    let t = state.t;

    transport_rho_step(&mut next.rho, &state.rho, &state.u, grid, &ws.volumes, dt);
    transport_b_step(&mut next.b, &state.b, &state.u, grid, dt);
    if let Some(src) = sources {
        for i in 0..=n {
            next.rho[i] += dt * src.rho(r[i], t);
        }
        for i in 1..=n {
            next.b[i] += dt * src.induction(r[i], t);
        }
    }

    // Non-conservative upwinded advection of u; the geometric momentum terms
    // cancel against continuity in this form.
    ws.u_star[0] = 0.0;
    ws.u_star[n] = 0.0;
    for i in 1..n {
        let ui = state.u[i];
        let dudr = if ui > 0.0 {
            (ui - state.u[i - 1]) / h
        } else {
            (state.u[i + 1] - ui) / h
        };
        ws.u_star[i] = ui - dt * ui * dudr;
    }

    // Implicit viscous solve with explicit pressure and Lorentz forces:
    // (rt/dt) u - visc L u = (rt/dt) u* - p_r - B (B_r + B/r) [+ source].
    for i in 0..=n {
        ws.p[i] = params.pressure(next.rho[i]);
    }
    deriv_into(&ws.p, grid, &mut ws.p_r);
    deriv_into(&next.b, grid, &mut ws.b_r);

    viscous_rows(grid, visc, &mut ws.lo, &mut ws.di, &mut ws.up);
    let mut floored = 0usize;
    let mut max_speed = 0.0f64;
    for i in 1..n {
        let rho_i = next.rho[i];
        let rt = if rho_i < rho_floor {
            floored += 1;
            rho_floor
        } else {
            rho_i
        };
        let lorentz = -next.b[i] * (ws.b_r[i] + next.b[i] / r[i]);
        ws.di[i] += rt / dt;
        ws.rhs[i] = rt / dt * ws.u_star[i] - ws.p_r[i] + lorentz;
        if let Some(src) = sources {
            ws.rhs[i] += src.momentum(r[i], t);
        }
        max_speed = max_speed
            .max(state.u[i].abs() + params.sound_speed(rho_i) + state.b[i].abs() / rt.sqrt());
    }
    ws.lo[0] = 0.0;
    ws.di[0] = 1.0;
    ws.up[0] = 0.0;
    ws.rhs[0] = 0.0;
    ws.lo[n] = 0.0;
    ws.di[n] = 1.0;
    ws.up[n] = 0.0;
    ws.rhs[n] = 0.0;

    tridiag::solve(&ws.lo, &ws.di, &ws.up, &mut ws.rhs)?;
    next.u.copy_from_slice(&ws.rhs);
    next.t = t + dt;

    Ok(StepReport {
        dt_used: dt,
        max_wave_speed: max_speed,
        viscous_solve_iters: 1,
        floored_nodes: floored,
    })
}

fn deriv_into(g: &[f64], grid: &RadialGrid, out: &mut [f64]) {
    let n = grid.len() - 1;
    let h = grid.spacing();
    for i in 1..n {
        out[i] = (g[i + 1] - g[i - 1]) / (2.0 * h);
    }
    out[0] = (-3.0 * g[0] + 4.0 * g[1] - g[2]) / (2.0 * h);
    out[n] = (3.0 * g[n] - 4.0 * g[n - 1] + g[n - 2]) / (2.0 * h);
}

/// Advances the state by `dt`.  The caller is responsible for keeping `dt`
/// within [`stable_dt`].
pub fn step(
    state: &RadialState,
    params: &FluidParams,
    grid: &RadialGrid,
    dt: f64,
    rho_floor: f64,
) -> Result<(RadialState, StepReport)> {
    step_with_sources(state, params, grid, dt, rho_floor, None)
}

/// [`step`] with manufactured sources added to all three equations.
pub fn step_with_sources(
    state: &RadialState,
    params: &FluidParams,
    grid: &RadialGrid,
    dt: f64,
    rho_floor: f64,
    sources: Option<&dyn SourceTerms>,
) -> Result<(RadialState, StepReport)> {
    if !(dt > 0.0) {
        return Err(Error::InvalidParams(format!("dt must be > 0, got {dt}")));
    }
    let mut next = state.clone();
    let mut ws = Scratch::new(grid);
    let report = step_into(state, &mut next, params, grid, dt, rho_floor, sources, &mut ws)?;
    Ok((next, report))
}

/// Everything a run produces besides the records themselves.
#[derive(Debug, Clone)]
pub struct RunSummary {
    pub steps: u64,
    /// Exponent used for the in-run inequality monitoring.
    pub alpha: f64,
    pub q0: f64,
    pub e0: f64,
    /// Largest single-step relative energy increase observed (negative if
    /// the energy only ever decreased).
    pub max_energy_uptick: f64,
    /// Output steps at which an inequality of the chain failed beyond the
    /// quadrature-error slack.
    pub chain_violations: usize,
    pub wall_seconds: f64,
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub records: Vec<DiagnosticsRecord>,
    pub reason: TerminationReason,
    pub summary: RunSummary,
}

/// Integrates the scenario to `t_end`, breakdown, or step-size underflow,
/// emitting a diagnostics record every `output_every` steps and at
/// termination.
pub fn run(scenario: &Scenario) -> Result<RunOutcome> {
    run_with_sources(scenario, None)
}

pub fn run_with_sources(
    scenario: &Scenario,
    sources: Option<&dyn SourceTerms>,
) -> Result<RunOutcome> {
    scenario.validate()?;
    let params = scenario.params;
    let grid = RadialGrid::new(scenario.n, params.domain_radius)?;
    let mut state = build_initial_state(scenario, &grid)?;
    let mut next = state.clone();
    let mut ws = Scratch::new(&grid);

    let mut tracker = match scenario.vacuum_radius {
        Some(r0) => VacuumTracker::new(r0),
        None => VacuumTracker::inactive(),
    };
    let alpha = match scenario.alpha {
        Some(a) => a,
        None => crate::bound::optimal_alpha(),
    };

    let e0 = diagnostics::energy(&state, &params, &grid);
    let q0 = if tracker.active {
        diagnostics::magnetic_charge(&state, tracker.radius, &grid)
    } else {
        0.0
    };

    let started = std::time::Instant::now();
    let dt_max = scenario.dt_max();
    let mut records = Vec::new();
    let mut chain_violations = 0usize;
    let mut push_record = |state: &RadialState,
                           tracker: &VacuumTracker,
                           dt: f64,
                           violations: &mut usize| {
        let rec = diagnostics::evaluate(state, tracker, &params, alpha, &grid, dt);
        if tracker.active {
            let check = diagnostics::check_chain(state, tracker, &params, alpha, &grid);
            if !check.c0_ok {
                *violations += 1;
            }
            if !check.c1_ok {
                *violations += 1;
            }
        }
        records.push(rec);
    };

    push_record(&state, &tracker, 0.0, &mut chain_violations);

    let mut steps = 0u64;
    let mut e_prev = e0;
    let mut max_uptick = f64::NEG_INFINITY;
    let t_scale = scenario.t_end.max(1.0);

    let reason = loop {
        let remaining = scenario.t_end - state.t;
        if remaining <= DT_MIN * t_scale {
            break TerminationReason::ReachedTEnd { t: state.t };
        }
        let dt_stable = stable_dt(&state, &params, &grid, scenario.cfl, scenario.rho_floor);
        let dt = dt_stable.min(dt_max);
        if dt < DT_MIN {
            break TerminationReason::DtUnderflow { t: state.t, dt };
        }
        let dt = dt.min(remaining);

        let next_tracker = if tracker.active {
            diagnostics::advance_vacuum_radius(&tracker, &state, &grid, dt)
        } else {
            tracker
        };

        match step_into(&state, &mut next, &params, &grid, dt, scenario.rho_floor, sources, &mut ws)
        {
            Ok(_) => {}
            Err(e) => {
                break TerminationReason::InvariantViolation { t: state.t, what: e.to_string() }
            }
        }
        std::mem::swap(&mut state, &mut next);
        tracker = next_tracker;
        steps += 1;

        if !state.is_finite() {
            break TerminationReason::BlowupDetected { t: state.t, max_grad: f64::INFINITY };
        }
        if let Some(&rho_min) =
            state.rho.iter().min_by(|a, b| a.partial_cmp(b).expect("finite"))
        {
            if rho_min < -1e-12 {
                break TerminationReason::InvariantViolation {
                    t: state.t,
                    what: format!("negative density {rho_min}"),
                };
            }
        }

        let mut max_grad = 0.0f64;
        {
            let h = grid.spacing();
            let u = &state.u;
            let nn = grid.len() - 1;
            for i in 1..nn {
                max_grad = max_grad.max((u[i + 1] - u[i - 1]).abs() / (2.0 * h));
            }
            max_grad = max_grad.max((-3.0 * u[0] + 4.0 * u[1] - u[2]).abs() / (2.0 * h));
            max_grad = max_grad.max((3.0 * u[nn] - 4.0 * u[nn - 1] + u[nn - 2]).abs() / (2.0 * h));
        }
        if max_grad > scenario.blowup_grad_threshold {
            break TerminationReason::BlowupDetected { t: state.t, max_grad };
        }

        let e = diagnostics::energy(&state, &params, &grid);
        if e_prev > 0.0 {
            max_uptick = max_uptick.max((e - e_prev) / e_prev);
        }
        e_prev = e;

        if steps % scenario.output_every as u64 == 0 {
            push_record(&state, &tracker, dt, &mut chain_violations);
        }
    };

    push_record(&state, &tracker, 0.0, &mut chain_violations);

    Ok(RunOutcome {
        records,
        reason,
        summary: RunSummary {
            steps,
            alpha,
            q0,
            e0,
            max_energy_uptick: max_uptick,
            chain_violations,
            wall_seconds: started.elapsed().as_secs_f64(),
        },
    })
}

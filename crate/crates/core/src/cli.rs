//! Config-file parsing, CSV emission, and subcommand drivers.
//!
//! Config files are sectioned `key = value` text:
//!
//! ```text
//! [params]
//! mu = 1.0
//! lambda = 1.0
//! a = 1.0
//! gamma = 2.0
//! R0 = 1.0
//!
//! [scenario]
//! preset = vacuum-ball
//! n = 256
//! r0 = 0.5
//! t_end = 20.0
//! ```
//!
//! Unknown keys are rejected with their line number.  Records serialize as
//! CSV with 17 significant digits so they round-trip bit-exactly.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use crate::bound;
use crate::diagnostics::DiagnosticsRecord;
use crate::error::{Error, Result};
use crate::grid::RadialGrid;
use crate::initial::build_initial_state;
use crate::mms;
use crate::params::FluidParams;
use crate::picard;
use crate::profile::ProfileSpec;
use crate::scenario::Scenario;
use crate::solver::{self, TerminationReason};

pub const CSV_HEADER: &str =
    "t,Q,E,divu_l2,keyc0_lhs,keyc0_rhs,keyc1_lhs,keyc1_rhs,divu_lower,vac_residual,R,max_grad_u,dt";

/// Fully validated run configuration.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub scenario: Scenario,
}

struct Entry {
    line: usize,
    value: String,
    used: std::cell::Cell<bool>,
}

struct Section(BTreeMap<String, Entry>);

impl Section {
    fn get(&self, key: &str) -> Option<&str> {
        self.0.get(key).map(|e| {
            e.used.set(true);
            e.value.as_str()
        })
    }

    fn require(&self, key: &str, section: &str) -> Result<&str> {
        self.get(key).ok_or_else(|| Error::Config {
            line: 0,
            msg: format!("missing required key `{key}` in [{section}]"),
        })
    }

    fn parse_f64(&self, key: &str) -> Result<Option<f64>> {
        match self.get(key) {
            None => Ok(None),
            Some(v) => {
                let line = self.0[key].line;
                v.parse::<f64>().map(Some).map_err(|e| Error::Config {
                    line,
                    msg: format!("key `{key}`: bad number `{v}`: {e}"),
                })
            }
        }
    }

    fn parse_usize(&self, key: &str) -> Result<Option<usize>> {
        match self.get(key) {
            None => Ok(None),
            Some(v) => {
                let line = self.0[key].line;
                v.parse::<usize>().map(Some).map_err(|e| Error::Config {
                    line,
                    msg: format!("key `{key}`: bad integer `{v}`: {e}"),
                })
            }
        }
    }

    fn require_f64(&self, key: &str, section: &str) -> Result<f64> {
        self.require(key, section)?;
        Ok(self.parse_f64(key)?.expect("present"))
    }

    fn unused_key_error(&self) -> Option<Error> {
        self.0.iter().find(|(_, e)| !e.used.get()).map(|(k, e)| Error::Config {
            line: e.line,
            msg: format!("unknown key `{k}`"),
        })
    }
}

fn split_sections(text: &str) -> Result<BTreeMap<String, Section>> {
    let mut sections: BTreeMap<String, Section> = BTreeMap::new();
    let mut current: Option<String> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if let Some(name) = content.strip_prefix('[') {
            let name = name.strip_suffix(']').ok_or(Error::Config {
                line,
                msg: format!("malformed section header `{content}`"),
            })?;
            let name = name.trim().to_string();
            if !matches!(name.as_str(), "params" | "scenario") {
                return Err(Error::Config { line, msg: format!("unknown section `[{name}]`") });
            }
            sections.entry(name.clone()).or_insert_with(|| Section(BTreeMap::new()));
            current = Some(name);
            continue;
        }
        let (key, value) = content.split_once('=').ok_or(Error::Config {
            line,
            msg: format!("expected `key = value`, got `{content}`"),
        })?;
        let section = current.as_ref().ok_or(Error::Config {
            line,
            msg: "key outside any section; start with [params] or [scenario]".into(),
        })?;
        let key = key.trim().to_string();
        let entry = Entry {
            line,
            value: value.trim().to_string(),
            used: std::cell::Cell::new(false),
        };
        let sec = sections.get_mut(section).expect("section exists");
        if sec.0.insert(key.clone(), entry).is_some() {
            return Err(Error::Config { line, msg: format!("duplicate key `{key}`") });
        }
    }
    Ok(sections)
}

/// Parses and fully validates a config document, filling defaults.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let sections = split_sections(text)?;
    let empty = Section(BTreeMap::new());
    let params_sec = sections.get("params").unwrap_or(&empty);
    let scen_sec = sections.get("scenario").ok_or(Error::Config {
        line: 0,
        msg: "missing [scenario] section".into(),
    })?;

    let params = FluidParams::new(
        params_sec.require_f64("mu", "params")?,
        params_sec.require_f64("lambda", "params")?,
        params_sec.require_f64("a", "params")?,
        params_sec.require_f64("gamma", "params")?,
        params_sec.require_f64("R0", "params")?,
    )?;

    let preset = scen_sec.require("preset", "scenario")?.to_string();
    let n = scen_sec.parse_usize("n")?.ok_or(Error::Config {
        line: 0,
        msg: "missing required key `n` in [scenario]".into(),
    })?;
    let t_end = scen_sec.require_f64("t_end", "scenario")?;
    let r0 = scen_sec.parse_f64("r0")?;

    let mut scenario = match preset.as_str() {
        "uniform" => {
            let rho_bar = scen_sec.parse_f64("rho_bar")?.unwrap_or(1.0);
            Scenario::uniform(params, n, rho_bar, t_end)
        }
        "vacuum-ball" => {
            let r0 = r0.ok_or(Error::Config {
                line: 0,
                msg: "preset `vacuum-ball` requires `r0` in [scenario]".into(),
            })?;
            // Same shapes as the canonical preset, under the configured
            // params; the tuned numerical controls come with it.
            let mut sc = Scenario::vacuum_ball(n, t_end);
            sc.params = params;
            sc.rho0 = ProfileSpec::SmoothstepRamp { r0, outer: 1.0 };
            sc.b0 = ProfileSpec::SinSqBump { r0, amplitude: 1.0 };
            sc.vacuum_radius = Some(r0);
            sc
        }
        "manufactured-smooth" => {
            let mut sc = Scenario::manufactured_smooth(n, t_end);
            sc.params = params;
            sc
        }
        "tabulated" => {
            let read_profile = |key: &str| -> Result<Option<ProfileSpec>> {
                match scen_sec.get(key) {
                    None => Ok(None),
                    Some(path) => {
                        let text = std::fs::read_to_string(path).map_err(|e| Error::Config {
                            line: scen_sec.0[key].line,
                            msg: format!("cannot read `{path}`: {e}"),
                        })?;
                        ProfileSpec::from_table_text(&text).map(Some)
                    }
                }
            };
            let rho0 = read_profile("rho0_file")?.ok_or(Error::Config {
                line: 0,
                msg: "preset `tabulated` requires `rho0_file`".into(),
            })?;
            let b0 = read_profile("b0_file")?.ok_or(Error::Config {
                line: 0,
                msg: "preset `tabulated` requires `b0_file`".into(),
            })?;
            let u0 = read_profile("u0_file")?.unwrap_or(ProfileSpec::Compatible);
            let mut sc = Scenario::uniform(params, n, 1.0, t_end);
            sc.rho0 = rho0;
            sc.u0 = u0;
            sc.b0 = b0;
            sc.vacuum_radius = r0;
            sc.label = "tabulated".into();
            sc
        }
        other => {
            return Err(Error::Config {
                line: scen_sec.0["preset"].line,
                msg: format!(
                    "unknown preset `{other}` (expected uniform, vacuum-ball, \
                     manufactured-smooth, or tabulated)"
                ),
            })
        }
    };

    if let Some(v) = scen_sec.parse_f64("cfl")? {
        scenario.cfl = v;
    }
    if let Some(v) = scen_sec.parse_f64("rho_floor")? {
        scenario.rho_floor = v;
    }
    if let Some(v) = scen_sec.parse_f64("blowup_grad_threshold")? {
        scenario.blowup_grad_threshold = v;
    }
    if let Some(v) = scen_sec.parse_usize("output_every")? {
        scenario.output_every = v;
    }
    if let Some(v) = scen_sec.parse_f64("alpha")? {
        scenario.alpha = Some(v);
    }

    for sec in sections.values() {
        if let Some(err) = sec.unused_key_error() {
            return Err(err);
        }
    }

    scenario.validate()?;
    Ok(RunConfig { scenario })
}

/// `# key = value` echo of the effective configuration.
pub fn echo_config(sc: &Scenario) -> Vec<String> {
    let p = &sc.params;
    vec![
        format!("# preset = {}", sc.label),
        format!(
            "# mu = {} lambda = {} a = {} gamma = {} R0 = {}",
            p.mu, p.lambda, p.a_pressure, p.gamma, p.domain_radius
        ),
        format!(
            "# n = {} t_end = {} cfl = {} rho_floor = {:e} blowup_grad_threshold = {:e}",
            sc.n, sc.t_end, sc.cfl, sc.rho_floor, sc.blowup_grad_threshold
        ),
        format!(
            "# r0 = {} output_every = {} alpha = {}",
            sc.vacuum_radius.map_or("none".into(), |v| v.to_string()),
            sc.output_every,
            sc.alpha.map_or("auto".into(), |v| v.to_string()),
        ),
    ]
}

fn format_record(rec: &DiagnosticsRecord) -> String {
    let mut s = String::with_capacity(13 * 26);
    for (i, v) in [
        rec.t,
        rec.q,
        rec.energy,
        rec.divu_l2,
        rec.keyc0_lhs,
        rec.keyc0_rhs,
        rec.keyc1_lhs,
        rec.keyc1_rhs,
        rec.divu_lower,
        rec.vac_residual,
        rec.r_vac,
        rec.max_grad_u,
        rec.dt,
    ]
    .into_iter()
    .enumerate()
    {
        if i > 0 {
            s.push(',');
        }
        let _ = write!(s, "{v:.16e}");
    }
    s
}

/// Writes the record series as CSV: echo comments, fixed header, one row
/// per record at 17 significant digits, and a terminating comment row.
pub fn emit_records(
    records: &[DiagnosticsRecord],
    reason: &TerminationReason,
    header: &[String],
    out: &mut dyn std::io::Write,
) -> Result<()> {
    if records.is_empty() {
        return Err(Error::InvalidParams("no records to emit".into()));
    }
    for line in header {
        writeln!(out, "{line}")?;
    }
    writeln!(out, "{CSV_HEADER}")?;
    for rec in records {
        writeln!(out, "{}", format_record(rec))?;
    }
    writeln!(out, "# termination={} t={:.16e}", reason.label(), reason.time())?;
    Ok(())
}

pub fn emit_records_to_path(
    records: &[DiagnosticsRecord],
    reason: &TerminationReason,
    header: &[String],
    path: &Path,
) -> Result<()> {
    let mut file = std::io::BufWriter::new(std::fs::File::create(path)?);
    emit_records(records, reason, header, &mut file)?;
    file.flush()?;
    Ok(())
}

/// Parses a CSV produced by [`emit_records`] back into records.
pub fn parse_records(text: &str) -> Result<Vec<DiagnosticsRecord>> {
    let mut out = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') || line == CSV_HEADER {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 13 {
            return Err(Error::Config {
                line: idx + 1,
                msg: format!("expected 13 CSV fields, got {}", fields.len()),
            });
        }
        let mut v = [0.0f64; 13];
        for (slot, tok) in v.iter_mut().zip(&fields) {
            *slot = tok.parse::<f64>().map_err(|e| Error::Config {
                line: idx + 1,
                msg: format!("bad float `{tok}`: {e}"),
            })?;
        }
        out.push(DiagnosticsRecord {
            t: v[0],
            q: v[1],
            energy: v[2],
            divu_l2: v[3],
            keyc0_lhs: v[4],
            keyc0_rhs: v[5],
            keyc1_lhs: v[6],
            keyc1_rhs: v[7],
            divu_lower: v[8],
            vac_residual: v[9],
            r_vac: v[10],
            max_grad_u: v[11],
            dt: v[12],
        });
    }
    Ok(out)
}

/// Exit-code contract: 0 ran to the horizon, 2 breakdown detected (the
/// expected outcome for the vacuum scenario), 3 step underflow,
/// 4 invariant violation.
pub fn exit_code(reason: &TerminationReason) -> i32 {
    match reason {
        TerminationReason::ReachedTEnd { .. } => 0,
        TerminationReason::BlowupDetected { .. } => 2,
        TerminationReason::DtUnderflow { .. } => 3,
        TerminationReason::InvariantViolation { .. } => 4,
    }
}

pub const EXIT_CONFIG_ERROR: i32 = 64;

/// `run` subcommand: integrate, emit CSV, report the termination reason.
pub fn cmd_run(
    cfg: &RunConfig,
    alpha: Option<f64>,
    output: Option<&Path>,
) -> Result<TerminationReason> {
    let mut scenario = cfg.scenario.clone();
    if alpha.is_some() {
        scenario.alpha = alpha;
    }
    let outcome = solver::run(&scenario)?;
    let header = echo_config(&scenario);
    match output {
        Some(path) => emit_records_to_path(&outcome.records, &outcome.reason, &header, path)?,
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            emit_records(&outcome.records, &outcome.reason, &header, &mut lock)?;
        }
    }
    eprintln!(
        "{}: t = {:.6}, steps = {}, alpha = {:.6}, max energy uptick = {:.3e}, \
         chain violations = {}",
        outcome.reason.label(),
        outcome.reason.time(),
        outcome.summary.steps,
        outcome.summary.alpha,
        outcome.summary.max_energy_uptick,
        outcome.summary.chain_violations,
    );
    Ok(outcome.reason)
}

/// `bound` subcommand: the (alpha, K, divu_lower, T_max) table and the
/// optimum row for the scenario's initial charge and energy.
///
/// The last column restates the lifespan under the disc-norm reading of
/// the divergence norm (a `(2 pi)^2` rescale); both are comparison scales
/// with all suppressed constants fixed at 1.
pub fn cmd_bound(cfg: &RunConfig, alpha: Option<f64>, out: &mut dyn std::io::Write) -> Result<()> {
    let sc = &cfg.scenario;
    let grid = RadialGrid::new(sc.n, sc.params.domain_radius)?;
    let state = build_initial_state(sc, &grid)?;
    let r_vac = sc.vacuum_radius.ok_or_else(|| {
        Error::DegenerateBound("bound subcommand needs a vacuum scenario (r0)".into())
    })?;
    let c0 = crate::diagnostics::magnetic_charge(&state, r_vac, &grid).abs();
    let e0 = crate::diagnostics::energy(&state, &sc.params, &grid);

    writeln!(out, "# C0 = {c0:.8e}, E0 = {e0:.8e}")?;
    writeln!(out, "alpha,K,divu_lower,T_max,T_max_2pi")?;
    let mut rows: Vec<f64> = (1..20).map(|i| 1.0 + i as f64 * 0.05).collect();
    if let Some(a) = alpha {
        rows.push(a);
    }
    for a in rows {
        let b = bound::lifespan_bound(&sc.params, c0, e0, a)?;
        writeln!(
            out,
            "{:.6},{:.8e},{:.8e},{:.8e},{:.8e}",
            b.alpha,
            b.k_alpha,
            b.divu_lower,
            b.t_max,
            b.t_max / (2.0 * std::f64::consts::PI).powi(2)
        )?;
    }
    let best = bound::optimize_alpha(&sc.params, c0, e0)?;
    writeln!(
        out,
        "# optimum: alpha* = {:.10}, divu_lower = {:.8e}, T_max = {:.8e}",
        best.alpha, best.divu_lower, best.t_max
    )?;
    Ok(())
}

/// `picard` subcommand: per-iterate contraction CSV.
pub fn cmd_picard(
    cfg: &RunConfig,
    delta: f64,
    n_iters: usize,
    out: &mut dyn std::io::Write,
) -> Result<()> {
    let iterates = picard::iterate(&cfg.scenario, delta, n_iters)?;
    writeln!(out, "index,psi,grad_diff,ratio")?;
    let mut prev_psi: Option<f64> = None;
    for it in &iterates {
        let psi = it.psi.unwrap_or(f64::NAN);
        let gd = it.grad_diff.unwrap_or(f64::NAN);
        let ratio = match (prev_psi, it.psi) {
            (Some(p), Some(c)) if p > 0.0 => c / p,
            _ => f64::NAN,
        };
        writeln!(out, "{},{:.16e},{:.16e},{:.16e}", it.index, psi, gd, ratio)?;
        if it.psi.is_some() {
            prev_psi = it.psi;
        }
    }
    if picard::diverged(&iterates) {
        writeln!(out, "# warning: psi grew on three consecutive iterates")?;
    }
    Ok(())
}

/// `verify` subcommand: manufactured-solution convergence table.
pub fn cmd_verify(cfg: &RunConfig, levels: usize, out: &mut dyn std::io::Write) -> Result<()> {
    let sc = &cfg.scenario;
    let t_final = sc.t_end.min(0.05);
    let table = mms::convergence_study(&sc.params, sc.n, levels, t_final)?;
    writeln!(out, "n,l2_error,order")?;
    for (i, (n, err)) in table.iter().enumerate() {
        if i == 0 {
            writeln!(out, "{n},{err:.8e},")?;
        } else {
            let order = (table[i - 1].1 / err).log2();
            writeln!(out, "{n},{err:.8e},{order:.3}")?;
        }
    }
    Ok(())
}

/// `u0` subcommand: the balance-compatible initial velocity profile.
pub fn cmd_u0(cfg: &RunConfig, out: &mut dyn std::io::Write) -> Result<()> {
    let sc = &cfg.scenario;
    let grid = RadialGrid::new(sc.n, sc.params.domain_radius)?;
    let state = build_initial_state(sc, &grid)?;
    writeln!(out, "r,u0")?;
    for (r, u) in grid.nodes().iter().zip(&state.u) {
        writeln!(out, "{r:.16e},{u:.16e}")?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::VacuumTracker;
    use proptest::prelude::*;

    const MINIMAL: &str = "\
[params]
mu = 1.0
lambda = 1.0
a = 1.0
gamma = 2.0
R0 = 1.0

[scenario]
preset = uniform
n = 64
t_end = 0.1
";

    #[test]
    fn minimal_config_fills_defaults() {
        use crate::scenario::{DEFAULT_CFL, DEFAULT_GRAD_THRESHOLD, DEFAULT_RHO_FLOOR};
        let cfg = parse_config(MINIMAL).unwrap();
        assert_eq!(cfg.scenario.cfl, DEFAULT_CFL);
        assert_eq!(cfg.scenario.rho_floor, DEFAULT_RHO_FLOOR);
        assert_eq!(cfg.scenario.blowup_grad_threshold, DEFAULT_GRAD_THRESHOLD);
        assert_eq!(cfg.scenario.n, 64);
    }

    #[test]
    fn gamma_constraint_is_named() {
        let text = MINIMAL.replace("gamma = 2.0", "gamma = 0.9");
        let err = parse_config(&text).unwrap_err();
        assert!(err.to_string().contains("gamma must be > 1"), "{err}");
    }

    #[test]
    fn vacuum_preset_without_r0_is_rejected() {
        let text = MINIMAL.replace("preset = uniform", "preset = vacuum-ball");
        let err = parse_config(&text).unwrap_err();
        assert!(err.to_string().contains("requires `r0`"), "{err}");
    }

    #[test]
    fn unknown_key_is_rejected_with_line() {
        let text = format!("{MINIMAL}wibble = 3\n");
        let err = parse_config(&text).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("unknown key `wibble`") && msg.contains("line"), "{msg}");
    }

    #[test]
    fn unknown_preset_is_rejected() {
        let text = MINIMAL.replace("preset = uniform", "preset = quux");
        assert!(parse_config(&text).unwrap_err().to_string().contains("unknown preset"));
    }

    #[test]
    fn vacuum_preset_carries_tuned_controls() {
        let text = MINIMAL
            .replace("preset = uniform", "preset = vacuum-ball")
            .replace("t_end = 0.1", "t_end = 20.0\nr0 = 0.5");
        let cfg = parse_config(&text).unwrap();
        assert_eq!(cfg.scenario.rho_floor, 1e-4);
        assert_eq!(cfg.scenario.blowup_grad_threshold, 1.0);
        assert_eq!(cfg.scenario.vacuum_radius, Some(0.5));
    }

    fn sample_record(seed: f64) -> DiagnosticsRecord {
        DiagnosticsRecord {
            t: seed,
            q: seed * 0.25,
            energy: seed + 1.0,
            divu_l2: seed * 0.1,
            keyc0_lhs: seed * 0.01,
            keyc0_rhs: seed * 0.02,
            keyc1_lhs: seed * 0.03,
            keyc1_rhs: seed * 0.04,
            divu_lower: seed * 0.001,
            vac_residual: seed * 1e-5,
            r_vac: 0.5 - seed * 0.01,
            max_grad_u: seed,
            dt: 1e-6 * (1.0 + seed),
        }
    }

    #[test]
    fn single_record_file_shape() {
        let recs = vec![sample_record(0.0)];
        let reason = TerminationReason::ReachedTEnd { t: 0.0 };
        let mut buf = Vec::new();
        emit_records(&recs, &reason, &[], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 3);
        assert_eq!(lines[0], CSV_HEADER);
        assert!(lines[2].starts_with("# termination=ReachedTEnd"));
    }

    #[test]
    fn uniform_run_emits_zero_charge_column() {
        let cfg = parse_config(MINIMAL).unwrap();
        let outcome = solver::run(&cfg.scenario).unwrap();
        assert!(outcome.records.iter().all(|r| r.q == 0.0));
    }

    proptest! {
        /// Round-trip at 17 significant digits is bit-exact.
        #[test]
        fn csv_round_trip_is_bit_exact(seeds in proptest::collection::vec(0.0..10.0f64, 1..8)) {
            let recs: Vec<DiagnosticsRecord> = seeds.iter().map(|&s| sample_record(s)).collect();
            let reason = TerminationReason::BlowupDetected { t: 1.25, max_grad: 2.0 };
            let mut buf = Vec::new();
            emit_records(&recs, &reason, &["# header".into()], &mut buf).unwrap();
            let parsed = parse_records(&String::from_utf8(buf).unwrap()).unwrap();
            prop_assert_eq!(recs, parsed);
        }
    }

    #[test]
    fn exit_codes_match_contract() {
        assert_eq!(exit_code(&TerminationReason::ReachedTEnd { t: 1.0 }), 0);
        assert_eq!(exit_code(&TerminationReason::BlowupDetected { t: 1.0, max_grad: 2.0 }), 2);
        assert_eq!(exit_code(&TerminationReason::DtUnderflow { t: 1.0, dt: 0.0 }), 3);
        assert_eq!(
            exit_code(&TerminationReason::InvariantViolation { t: 1.0, what: "x".into() }),
            4
        );
    }

    #[test]
    fn bound_table_prints_optimum() {
        let text = MINIMAL
            .replace("preset = uniform", "preset = vacuum-ball")
            .replace("t_end = 0.1", "t_end = 20.0\nr0 = 0.5");
        let cfg = parse_config(&text).unwrap();
        let mut buf = Vec::new();
        cmd_bound(&cfg, Some(1.5), &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.contains("# optimum: alpha* = 1.11078"), "{text}");
    }

    #[test]
    fn evaluate_uses_tracker_for_charge() {
        // Plumbing check: q in a record equals the charge to the tracked radius.
        let sc = Scenario::vacuum_ball(64, 20.0);
        let grid = RadialGrid::new(sc.n, 1.0).unwrap();
        let state = build_initial_state(&sc, &grid).unwrap();
        let tracker = VacuumTracker::new(0.5);
        let rec = crate::diagnostics::evaluate(&state, &tracker, &sc.params, 1.5, &grid, 0.0);
        assert!((rec.q - 0.25).abs() < 1e-3);
        assert_eq!(rec.r_vac, 0.5);
    }
}

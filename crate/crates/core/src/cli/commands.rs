use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use tfr_exact::parse_rational;

use super::report::{render_plain, Hypothesis, ParamSummary, ReductionReport, ReductionSummary, StabilitySummary, Structural, SCHEMA};
use super::suite::invariant_suite;
use super::{CliError, GlobalOpts, Output, EXIT_HYPOTHESIS, EXIT_INTEGRATOR, EXIT_NO_PARAMETERIZATION, EXIT_OK, EXIT_VERIFY};
use crate::manifold::{ParamKind, Parameterization, XStar};
use crate::model::parse_model;
use crate::reduce::{
    blanket_hypothesis_report, build_parameterization, decompose_p_mu, reduce_with, stability_analysis, ParamChoice, PathFailure,
    ReducedSystem,
};
use crate::sim::{convergence_study, model_hash, write_csv, ConvergenceResult, SimError, Window};
use crate::system::FastSlowSystem;

pub(super) fn load(path: &Path) -> Result<FastSlowSystem, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::input(format!("cannot read {}: {e}", path.display())))?;
    let model = parse_model(&text).map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
    FastSlowSystem::from_model(&model).map_err(|e| CliError::input(format!("{}: {e}", path.display())))
}

fn parse_choice(sys: &FastSlowSystem, text: &str) -> Result<ParamChoice, CliError> {
    let (head, tail) = match text.split_once(':') {
        Some((h, t)) => (h.trim(), Some(t)),
        None => (text.trim(), None),
    };
    match (head, tail) {
        ("auto", None) => Ok(ParamChoice::Auto),
        ("complexbalanced", None) => Ok(ParamChoice::ComplexBalanced),
        ("user", None) => Ok(ParamChoice::User),
        ("noninteracting", None) => Ok(ParamChoice::NonInteracting(None)),
        ("noninteracting", Some(set)) => {
            let mut idx = Vec::new();
            for name in set.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                let i = sys.names.iter().position(|n| n == name).ok_or_else(|| CliError::input(format!("unknown species '{name}' in --param")))?;
                idx.push(i);
            }
            idx.sort_unstable();
            idx.dedup();
            Ok(ParamChoice::NonInteracting(Some(idx)))
        }
        _ => Err(CliError::input(format!("unknown --param '{text}'; expected auto, noninteracting[:SET], complexbalanced or user"))),
    }
}

fn parse_xstar(sys: &FastSlowSystem, text: Option<&str>) -> Result<Option<XStar>, CliError> {
    let Some(text) = text else { return Ok(None) };
    let x = text
        .split(',')
        .map(|c| parse_rational(c).map_err(|e| CliError::input(format!("--xstar: {e}"))))
        .collect::<Result<Vec<_>, _>>()?;
    if x.len() != sys.n() {
        return Err(CliError::input(format!("--xstar has {} entries, expected {}", x.len(), sys.n())));
    }
    Ok(Some(XStar::Exact(x)))
}

fn parse_floats(flag: &str, text: &str) -> Result<Vec<f64>, CliError> {
    text.split(',')
        .map(|c| {
            let t = c.trim();
            t.parse::<f64>().ok().filter(|v| v.is_finite()).ok_or_else(|| CliError::input(format!("{flag}: '{t}' is not a finite number")))
        })
        .collect()
}

fn failures_text(failures: &[PathFailure]) -> String {
    failures.iter().map(|f| format!("{}: {}", f.path, f.reason)).collect::<Vec<_>>().join("; ")
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}

fn write_out(g: &GlobalOpts, json: &str) -> Result<(), CliError> {
    if let Some(path) = &g.out {
        fs::write(path, json).map_err(|e| CliError::input(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(())
}

fn base_report(path: &Path, sys: &FastSlowSystem) -> ReductionReport {
    ReductionReport {
        schema: SCHEMA,
        model: path.display().to_string(),
        model_hash: model_hash(sys),
        structural: Structural::of(sys),
        hypothesis: None,
        parameterization: None,
        reduction: None,
        stability: None,
        failed_paths: Vec::new(),
    }
}

fn hypothesis(sys: &FastSlowSystem, phi: &Parameterization, g: &GlobalOpts) -> Option<Hypothesis> {
    let dec = decompose_p_mu(sys).ok()?;
    let b = blanket_hypothesis_report(sys, &dec, phi, g.samples, g.seed);
    Some(Hypothesis::from_report(phi.kind, &b))
}

fn strict_code(g: &GlobalOpts, report: &ReductionReport) -> (i32, String) {
    if !g.strict {
        return (EXIT_OK, String::new());
    }
    match &report.hypothesis {
        Some(h) if h.passed => (EXIT_OK, String::new()),
        Some(h) => {
            let failed: Vec<&str> = h.checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
            let mut msg = format!("error: hypothesis checks failed: {}", failed.join(", "));
            if !h.tikhonov {
                msg.push_str(if failed.is_empty() { "attractivity" } else { ", attractivity" });
            }
            (EXIT_HYPOTHESIS, msg + "\n")
        }
        None => (EXIT_HYPOTHESIS, "error: hypotheses could not be checked without a parameterization\n".into()),
    }
}

/// Structural data plus hypothesis checks on the automatically chosen parameterization.
pub fn cmd_analyze(path: &Path, g: &GlobalOpts) -> Result<Output, CliError> {
    let sys = load(path)?;
    let mut report = base_report(path, &sys);
    match build_parameterization(&sys, &ParamChoice::Auto, None) {
        Ok((phi, failed)) => {
            report.hypothesis = hypothesis(&sys, &phi, g);
            report.failed_paths = failed;
        }
        Err(failed) => report.failed_paths = failed,
    }
    let json = to_json(&report);
    write_out(g, &json)?;
    let (code, stderr) = strict_code(g, &report);
    Ok(Output { stdout: json, stderr, code })
}

/// Parameterization and reduced system for `choice`.
pub fn reduce_model(
    sys: &FastSlowSystem,
    choice: &ParamChoice,
    hint: Option<&XStar>,
) -> Result<(Parameterization, Vec<PathFailure>, ReducedSystem), CliError> {
    let (phi, failed) = build_parameterization(sys, choice, hint)
        .map_err(|f| CliError::new(EXIT_NO_PARAMETERIZATION, format!("no parameterization: {}", failures_text(&f))))?;
    let rs = reduce_with(sys, &phi).map_err(|e| CliError::new(EXIT_NO_PARAMETERIZATION, format!("reduction failed: {e}")))?;
    Ok((phi, failed, rs))
}

/// Full report for the chosen parameterization; the reduced system goes to
/// stdout, the JSON report to `--out`.
pub fn cmd_reduce(path: &Path, param: &str, xstar: Option<&str>, latex: bool, g: &GlobalOpts) -> Result<Output, CliError> {
    let sys = load(path)?;
    let choice = parse_choice(&sys, param)?;
    let hint = parse_xstar(&sys, xstar)?;
    let (phi, failed, rs) = reduce_model(&sys, &choice, hint.as_ref())?;
    let mut report = base_report(path, &sys);
    report.failed_paths = failed;
    report.hypothesis = hypothesis(&sys, &phi, g);
    report.parameterization = Some(ParamSummary::of(&phi, &sys.names));
    report.reduction = Some(ReductionSummary::of(&rs));
    if let Ok(dec) = decompose_p_mu(&sys) {
        report.stability = Some(StabilitySummary::of(&stability_analysis(&sys, &dec, &phi, g.samples, g.seed)));
    }
    write_out(g, &to_json(&report))?;
    let (code, stderr) = strict_code(g, &report);
    Ok(Output { stdout: render_plain(&rs, latex), stderr, code })
}

#[derive(Clone, Debug)]
pub struct SimulateArgs {
    pub param: String,
    pub xstar: Option<String>,
    pub eps_ladder: String,
    pub v0: Option<String>,
    pub x0: Option<String>,
    pub tau: String,
    pub tol: f64,
    pub csv_out: Option<PathBuf>,
}

impl Default for SimulateArgs {
    fn default() -> Self {
        SimulateArgs {
            param: "auto".into(),
            xstar: None,
            eps_ladder: "0.04,0.02,0.01,0.005".into(),
            v0: None,
            x0: None,
            tau: "0.1,5".into(),
            tol: 1e-10,
            csv_out: None,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SimulateSummary {
    pub schema: u32,
    pub model: String,
    pub model_hash: String,
    pub parameterization: &'static str,
    pub path: &'static str,
    pub v0: Vec<f64>,
    pub x0: Vec<f64>,
    pub tol: f64,
    pub convergence: ConvergenceResult,
    pub csv: Vec<String>,
}

fn sim_error(e: SimError) -> CliError {
    match e {
        SimError::Invalid(m) => CliError::input(m),
        e => CliError::new(EXIT_INTEGRATOR, format!("integration failed: {e}")),
    }
}

/// Convergence study along the ladder; summary JSON on stdout, per-epsilon CSVs
/// in `--csv-out`.
pub fn cmd_simulate(path: &Path, a: &SimulateArgs, g: &GlobalOpts) -> Result<Output, CliError> {
    let sys = load(path)?;
    let ladder = parse_floats("--eps-ladder", &a.eps_ladder)?;
    if ladder.iter().any(|e| *e <= 0.0) {
        return Err(CliError::input("--eps-ladder: epsilon must be positive for the full system"));
    }
    let choice = parse_choice(&sys, &a.param)?;
    let hint = parse_xstar(&sys, a.xstar.as_deref())?;
    let v0 = match &a.v0 {
        Some(t) => parse_floats("--v0", t)?,
        None => (1..=sys.s).map(|i| i as f64).collect(),
    };
    if v0.len() != sys.s {
        return Err(CliError::input(format!("--v0 has {} entries, expected {}", v0.len(), sys.s)));
    }
    if sys.is_crn() && v0.iter().any(|v| *v <= 0.0) {
        return Err(CliError::input("--v0 must be positive for a reaction network"));
    }
    let x0 = a.x0.as_deref().map(|t| parse_floats("--x0", t)).transpose()?;
    let tau = parse_floats("--tau", &a.tau)?;
    let window = match tau.as_slice() {
        [hi] => Window { tau_min: None, tau_max: *hi },
        [lo, hi] => Window { tau_min: Some(*lo), tau_max: *hi },
        _ => return Err(CliError::input("--tau takes TMAX or TMIN,TMAX")),
    };
    if !(a.tol > 0.0) {
        return Err(CliError::input("--tol must be positive"));
    }
    let (phi, _, rs) = reduce_model(&sys, &choice, hint.as_ref())?;
    if phi.kind != ParamKind::User && v0.iter().any(|v| *v <= 0.0) {
        return Err(CliError::input("--v0 must be positive for this parameterization"));
    }
    let result = convergence_study(&sys, &rs, &v0, x0.as_deref(), &ladder, window, a.tol).map_err(sim_error)?;
    let mut csv = Vec::new();
    if let Some(dir) = &a.csv_out {
        fs::create_dir_all(dir).map_err(|e| CliError::input(format!("cannot create {}: {e}", dir.display())))?;
        for run in &result.runs {
            let file = dir.join(format!("eps_{}.csv", run.eps));
            let residual: Vec<f64> = run
                .full
                .iter()
                .zip(&run.reduced.x)
                .map(|(p, q)| p.iter().zip(q).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
                .collect();
            let mut buf = Vec::new();
            write_csv(&mut buf, &run.tau, &run.reduced.v.states, &run.full, &residual).expect("in-memory write");
            fs::write(&file, buf).map_err(|e| CliError::input(format!("cannot write {}: {e}", file.display())))?;
            csv.push(file.display().to_string());
        }
    }
    let summary = SimulateSummary {
        schema: SCHEMA,
        model: path.display().to_string(),
        model_hash: model_hash(&sys),
        parameterization: super::report::kind_name(phi.kind),
        path: rs.path.as_str(),
        x0: x0.unwrap_or_else(|| phi.eval_f64(&v0)),
        v0,
        tol: a.tol,
        convergence: result,
        csv,
    };
    let json = to_json(&summary);
    write_out(g, &json)?;
    Ok(Output { stdout: json, stderr: String::new(), code: EXIT_OK })
}

#[derive(Serialize)]
struct VerifyReport<'a> {
    schema: u32,
    model: String,
    parameterization: &'static str,
    checks: &'a [crate::manifold::Check],
    passed: bool,
}

/// Pass/fail table of the invariant suite; exit 6 when any check fails.
pub fn cmd_verify(path: &Path, param: Option<&str>, g: &GlobalOpts) -> Result<Output, CliError> {
    let sys = load(path)?;
    let choice = match param {
        Some(p) => parse_choice(&sys, p)?,
        None if sys.user_phi.is_some() => ParamChoice::User,
        None => ParamChoice::Auto,
    };
    let (phi, _) = build_parameterization(&sys, &choice, None)
        .map_err(|f| CliError::new(EXIT_NO_PARAMETERIZATION, format!("no parameterization: {}", failures_text(&f))))?;
    let checks = invariant_suite(&sys, &phi, g.samples, g.seed);
    let width = checks.iter().map(|c| c.name.chars().count()).max().unwrap_or(0);
    let mut table = String::new();
    for c in &checks {
        let pad = width - c.name.chars().count();
        table.push_str(&format!("{}{}  {}  {}\n", c.name, " ".repeat(pad), if c.passed { "PASS" } else { "FAIL" }, c.detail));
    }
    let failed: Vec<&str> = checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
    let report = VerifyReport {
        schema: SCHEMA,
        model: path.display().to_string(),
        parameterization: super::report::kind_name(phi.kind),
        checks: &checks,
        passed: failed.is_empty(),
    };
    write_out(g, &to_json(&report))?;
    if failed.is_empty() {
        Ok(Output { stdout: table, stderr: String::new(), code: EXIT_OK })
    } else {
        Ok(Output { stdout: table, stderr: format!("error: failed invariants: {}\n", failed.join(", ")), code: EXIT_VERIFY })
    }
}

//! Integration of the full system in fast time and the reduced system in
//! slow time, and the comparison of both as `eps -> 0`.

mod dopri;

pub use dopri::{Dopri5, Dopri5Options, SimError, Solution};

use std::cell::Cell;
use std::io::{self, Write};

use serde::Serialize;
use sha2::{Digest, Sha256};
use tfr_exact::Printer;

use crate::manifold::ParamKind;
use crate::numeric::{max_abs, CompiledField};
use crate::reduce::ReducedSystem;
use crate::system::FastSlowSystem;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum TimeScale {
    #[serde(rename = "fast-t")]
    Fast,
    #[serde(rename = "slow-tau")]
    Slow,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct IntegratorSettings {
    pub rtol: f64,
    pub atol: f64,
}

impl IntegratorSettings {
    pub fn from_tol(tol: f64) -> Self {
        IntegratorSettings { rtol: tol, atol: tol }
    }

    fn options(&self, positive: bool) -> Dopri5Options {
        Dopri5Options { rtol: self.rtol, atol: self.atol, positive, max_steps: 5_000_000, ..Dopri5Options::default() }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Trajectory {
    pub scale: TimeScale,
    pub times: Vec<f64>,
    pub states: Vec<Vec<f64>>,
    pub eps: Option<f64>,
    pub settings: IntegratorSettings,
    pub model_hash: String,
    pub accepted_steps: usize,
    pub rejected_steps: usize,
}

/// Slow-time solution `v(tau)` with `x = Phi(v)` and `|h0(x)|_inf` alongside.
#[derive(Clone, Debug, Serialize)]
pub struct ReducedTrajectory {
    pub v: Trajectory,
    pub x: Vec<Vec<f64>>,
    pub residual: Vec<f64>,
}

/// SHA-256 of the canonical printout of names, `h0` and `h1`.
pub fn model_hash(sys: &FastSlowSystem) -> String {
    let pr = Printer::new(&sys.names);
    let mut h = Sha256::new();
    h.update(sys.names.join(",").as_bytes());
    for p in sys.h0.iter().chain(&sys.h1) {
        h.update(b";");
        h.update(pr.poly(p).as_bytes());
    }
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

/// `count` equally spaced points from `a` to `b` inclusive.
pub fn uniform_grid(a: f64, b: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![a],
        _ => (0..count).map(|i| if i + 1 == count { b } else { a + (b - a) * i as f64 / (count - 1) as f64 }).collect(),
    }
}

fn check_grid(grid: &[f64], end: f64) -> Result<(), SimError> {
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(SimError::Invalid("output times must be strictly increasing".into()));
    }
    if grid.iter().any(|&t| t < 0.0 || t > end) {
        return Err(SimError::Invalid(format!("output times must lie in [0, {end}]")));
    }
    Ok(())
}

/// `x' = h0(x) + eps h1(x)` from `x0` over slow time `[0, tau_end]`, i.e. fast
/// time `[0, tau_end / eps]`, sampled at the slow times in `grid`. With
/// `eps = 0` the fast flow alone is integrated and all times are fast times.
pub fn integrate_full(sys: &FastSlowSystem, eps: f64, x0: &[f64], tau_end: f64, grid: &[f64], tol: f64) -> Result<Trajectory, SimError> {
    if !(eps >= 0.0) || !eps.is_finite() {
        return Err(SimError::Invalid("epsilon must be nonnegative".into()));
    }
    if x0.len() != sys.n() {
        return Err(SimError::Invalid(format!("x0 has {} entries, expected {}", x0.len(), sys.n())));
    }
    if sys.is_crn() && x0.iter().any(|v| !(*v > 0.0)) {
        return Err(SimError::Invalid("x0 must be positive for a reaction network".into()));
    }
    check_grid(grid, tau_end)?;
    let f0 = CompiledField::new(&sys.h0);
    let f1 = CompiledField::new(&sys.h1);
    let n = sys.n();
    let mut buf = vec![0.0; n];
    let mut rhs = |_t: f64, x: &[f64], out: &mut [f64]| {
        f0.eval_into(x, out);
        if eps > 0.0 {
            f1.eval_into(x, &mut buf);
            for (o, b) in out.iter_mut().zip(&buf) {
                *o += eps * b;
            }
        }
    };
    let (scale, t_scale) = if eps > 0.0 { (TimeScale::Slow, 1.0 / eps) } else { (TimeScale::Fast, 1.0) };
    let t_out: Vec<f64> = grid.iter().map(|t| (t * t_scale).min(tau_end * t_scale)).collect();
    let settings = IntegratorSettings::from_tol(tol);
    let sol = Dopri5::new(settings.options(sys.is_crn())).solve(&mut rhs, 0.0, x0, tau_end * t_scale, &t_out)?;
    Ok(Trajectory {
        scale,
        times: grid.to_vec(),
        states: sol.outputs,
        eps: Some(eps),
        settings,
        model_hash: model_hash(sys),
        accepted_steps: sol.accepted,
        rejected_steps: sol.rejected,
    })
}

const POLE_GUARD: f64 = 1e-12;

/// `v' = rhs(v)` over `[0, tau_end]`, sampled at `grid`. Stops with
/// `DenominatorBlowup` when a denominator of the right-hand side nearly vanishes.
pub fn integrate_reduced(rsys: &ReducedSystem, v0: &[f64], tau_end: f64, grid: &[f64], tol: f64) -> Result<ReducedTrajectory, SimError> {
    let s = rsys.s();
    if v0.len() != s {
        return Err(SimError::Invalid(format!("v0 has {} entries, expected {s}", v0.len())));
    }
    let positive = rsys.phi.kind != ParamKind::User;
    if positive && v0.iter().any(|v| !(*v > 0.0)) {
        return Err(SimError::Invalid("v0 must be positive".into()));
    }
    check_grid(grid, tau_end)?;
    let pole_at: Cell<Option<f64>> = Cell::new(None);
    let mut rhs = |t: f64, v: &[f64], out: &mut [f64]| {
        if rsys.rhs.min_denominator(v) < POLE_GUARD {
            if pole_at.get().is_none() {
                pole_at.set(Some(t));
            }
            out.iter_mut().for_each(|o| *o = f64::NAN);
            return;
        }
        out.copy_from_slice(&rsys.rhs.eval_f64(v));
    };
    let settings = IntegratorSettings::from_tol(tol);
    let sol = Dopri5::new(settings.options(positive)).solve(&mut rhs, 0.0, v0, tau_end, grid).map_err(|e| match (pole_at.get(), e) {
        (Some(t), SimError::NonFinite { .. } | SimError::StepSizeUnderflow { .. }) => SimError::DenominatorBlowup { t },
        (_, e) => e,
    })?;
    let h0 = CompiledField::new(&rsys.h0);
    let x: Vec<Vec<f64>> = sol.outputs.iter().map(|v| rsys.phi.eval_f64(v)).collect();
    let residual = x.iter().map(|xi| max_abs(&h0.eval(xi))).collect();
    let v = Trajectory {
        scale: TimeScale::Slow,
        times: grid.to_vec(),
        states: sol.outputs,
        eps: None,
        settings,
        model_hash: String::new(),
        accepted_steps: sol.accepted,
        rejected_steps: sol.rejected,
    };
    Ok(ReducedTrajectory { v, x, residual })
}

/// Slow-time window for the error; `tau_min = None` uses `10 eps ln(1/eps)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Window {
    pub tau_min: Option<f64>,
    pub tau_max: f64,
}

pub const GRID_POINTS: usize = 200;

/// One ladder entry.
#[derive(Clone, Debug)]
pub struct ConvergenceRun {
    pub eps: f64,
    pub tau: Vec<f64>,
    pub full: Vec<Vec<f64>>,
    pub reduced: ReducedTrajectory,
    pub error: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConvergenceResult {
    pub eps_ladder: Vec<f64>,
    pub errors: Vec<f64>,
    /// `errors[i + 1] / errors[i]`.
    pub ratios: Vec<f64>,
    pub tau_min: Vec<f64>,
    pub tau_max: f64,
    pub monotone: bool,
    #[serde(skip)]
    pub runs: Vec<ConvergenceRun>,
}

/// Compares the full solution from `x0` (default `Phi(v0)`) with `Phi(v(tau))`
/// on a 200-point grid of the window, for every `eps` of the ladder in parallel.
pub fn convergence_study(
    sys: &FastSlowSystem,
    rsys: &ReducedSystem,
    v0: &[f64],
    x0: Option<&[f64]>,
    eps_ladder: &[f64],
    window: Window,
    tol: f64,
) -> Result<ConvergenceResult, SimError> {
    if eps_ladder.is_empty() || eps_ladder.iter().any(|e| !(*e > 0.0)) {
        return Err(SimError::Invalid("epsilon ladder entries must be positive".into()));
    }
    if eps_ladder.windows(2).any(|w| w[1] >= w[0]) {
        return Err(SimError::Invalid("epsilon ladder must be strictly decreasing".into()));
    }
    let x_start = match x0 {
        Some(x) => x.to_vec(),
        None => rsys.phi.eval_f64(v0),
    };
    let run = |eps: f64| -> Result<ConvergenceRun, SimError> {
        let tau_min = window.tau_min.unwrap_or(10.0 * eps * (1.0 / eps).ln());
        if !(tau_min < window.tau_max) {
            return Err(SimError::Invalid(format!("window [{tau_min}, {}] is empty", window.tau_max)));
        }
        let tau = uniform_grid(tau_min, window.tau_max, GRID_POINTS);
        let full = integrate_full(sys, eps, &x_start, window.tau_max, &tau, tol)?;
        let reduced = integrate_reduced(rsys, v0, window.tau_max, &tau, tol * 1e-2)?;
        let error = full
            .states
            .iter()
            .zip(&reduced.x)
            .map(|(a, b)| a.iter().zip(b).map(|(p, q)| (p - q).abs()).fold(0.0, f64::max))
            .fold(0.0, f64::max);
        Ok(ConvergenceRun { eps, tau, full: full.states, reduced, error })
    };
    let results: Vec<Result<ConvergenceRun, SimError>> = std::thread::scope(|scope| {
        let handles: Vec<_> = eps_ladder.iter().map(|&eps| scope.spawn(move || run(eps))).collect();
        handles.into_iter().map(|h| h.join().expect("integration thread panicked")).collect()
    });
    let runs = results.into_iter().collect::<Result<Vec<_>, _>>()?;
    let errors: Vec<f64> = runs.iter().map(|r| r.error).collect();
    let ratios = errors.windows(2).map(|w| w[1] / w[0]).collect();
    let monotone = errors.windows(2).all(|w| w[1] < w[0]);
    Ok(ConvergenceResult {
        eps_ladder: eps_ladder.to_vec(),
        errors,
        ratios,
        tau_min: runs.iter().map(|r| r.tau[0]).collect(),
        tau_max: window.tau_max,
        monotone,
        runs,
    })
}

/// CSV with header `tau,v1..vs,x1..xn,residual`; floats with 17 significant digits.
pub fn write_csv<W: Write>(out: &mut W, tau: &[f64], v: &[Vec<f64>], x: &[Vec<f64>], residual: &[f64]) -> io::Result<()> {
    let s = v.first().map_or(0, Vec::len);
    let n = x.first().map_or(0, Vec::len);
    let mut header = vec!["tau".to_string()];
    header.extend((1..=s).map(|i| format!("v{i}")));
    header.extend((1..=n).map(|i| format!("x{i}")));
    header.push("residual".into());
    writeln!(out, "{}", header.join(","))?;
    for k in 0..tau.len() {
        let mut row = vec![format!("{:.16e}", tau[k])];
        row.extend(v[k].iter().map(|c| format!("{c:.16e}")));
        row.extend(x[k].iter().map(|c| format!("{c:.16e}")));
        row.push(format!("{:.16e}", residual[k]));
        writeln!(out, "{}", row.join(","))?;
    }
    Ok(())
}

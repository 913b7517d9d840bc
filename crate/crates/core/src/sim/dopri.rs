//! Dormand-Prince 5(4) with step-size control and dense output.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error("step size underflow at t = {t:e}; lower t_end or use a coarser epsilon ladder")]
    StepSizeUnderflow { t: f64 },
    #[error("step budget of {steps} exhausted at t = {t:e}")]
    MaxSteps { t: f64, steps: usize },
    #[error("non-finite state or derivative at t = {t:e}")]
    NonFinite { t: f64 },
    #[error("solution leaves the positive orthant at t = {t:e} (component {component})")]
    PositivityLoss { t: f64, component: usize },
    #[error("trajectory approaches a pole of the reduced right-hand side at tau = {t:e}")]
    DenominatorBlowup { t: f64 },
    #[error("{0}")]
    Invalid(String),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Dopri5Options {
    pub rtol: f64,
    pub atol: f64,
    /// First trial step; chosen automatically when `None`.
    pub h_init: Option<f64>,
    pub h_max: f64,
    pub max_steps: usize,
    /// Constant step without error control, advancing with the embedded
    /// fourth-order weights.
    pub fixed_step: Option<f64>,
    /// Reject steps that produce a negative component.
    pub positive: bool,
}

impl Default for Dopri5Options {
    fn default() -> Self {
        Dopri5Options {
            rtol: 1e-9,
            atol: 1e-12,
            h_init: None,
            h_max: f64::INFINITY,
            max_steps: 1_000_000,
            fixed_step: None,
            positive: false,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Solution {
    pub t_final: f64,
    pub y_final: Vec<f64>,
    /// States at the requested output times, in order.
    pub outputs: Vec<Vec<f64>>,
    pub accepted: usize,
    pub rejected: usize,
    pub evaluations: usize,
}

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;
const B4: [f64; 7] = [5179.0 / 57600.0, 0.0, 7571.0 / 16695.0, 393.0 / 640.0, -92097.0 / 339200.0, 187.0 / 2100.0, 1.0 / 40.0];
// Fifth minus fourth order weights.
const E1: f64 = A71 - B4[0];
const E3: f64 = A73 - B4[2];
const E4: f64 = A74 - B4[3];
const E5: f64 = A75 - B4[4];
const E6: f64 = A76 - B4[5];
const E7: f64 = -B4[6];
const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

pub struct Dopri5 {
    pub opts: Dopri5Options,
}

struct Stages {
    k: [Vec<f64>; 7],
    tmp: Vec<f64>,
    y1: Vec<f64>,
}

impl Dopri5 {
    pub fn new(opts: Dopri5Options) -> Self {
        Dopri5 { opts }
    }

    /// Integrates from `t0` to `t_end` (`t_end > t0`) and samples the dense
    /// output at `t_out`, which must be sorted and inside `[t0, t_end]`.
    pub fn solve<F>(&self, f: &mut F, t0: f64, y0: &[f64], t_end: f64, t_out: &[f64]) -> Result<Solution, SimError>
    where
        F: FnMut(f64, &[f64], &mut [f64]),
    {
        let n = y0.len();
        if !(t_end >= t0) {
            return Err(SimError::Invalid("t_end must not precede t0".into()));
        }
        if t_out.windows(2).any(|w| w[1] < w[0]) || t_out.iter().any(|&t| t < t0 || t > t_end) {
            return Err(SimError::Invalid("output times must be sorted and inside the interval".into()));
        }
        if y0.iter().any(|v| !v.is_finite()) {
            return Err(SimError::NonFinite { t: t0 });
        }
        let mut st = Stages { k: std::array::from_fn(|_| vec![0.0; n]), tmp: vec![0.0; n], y1: vec![0.0; n] };
        let mut sol = Solution { t_final: t0, y_final: y0.to_vec(), outputs: Vec::with_capacity(t_out.len()), accepted: 0, rejected: 0, evaluations: 0 };
        let mut y = y0.to_vec();
        let mut t = t0;
        let mut next_out = 0;
        while next_out < t_out.len() && t_out[next_out] <= t0 {
            sol.outputs.push(y.clone());
            next_out += 1;
        }
        if t_end == t0 {
            return Ok(sol);
        }
        f(t, &y, &mut st.k[0]);
        sol.evaluations += 1;
        if st.k[0].iter().any(|v| !v.is_finite()) {
            return Err(SimError::NonFinite { t });
        }
        let mut h = match (self.opts.fixed_step, self.opts.h_init) {
            (Some(h), _) | (None, Some(h)) => h,
            (None, None) => self.initial_step(f, t, &y, &mut st, t_end - t0, &mut sol.evaluations),
        }
        .min(self.opts.h_max);
        let fixed = self.opts.fixed_step.is_some();
        let mut last_rejected = false;
        let mut rcont: [Vec<f64>; 5] = std::array::from_fn(|_| vec![0.0; n]);
        loop {
            if sol.accepted + sol.rejected >= self.opts.max_steps {
                return Err(SimError::MaxSteps { t, steps: self.opts.max_steps });
            }
            let mut last = false;
            if t + h >= t_end || (t_end - t - h).abs() <= 1e-14 * t_end.abs().max(1.0) {
                h = t_end - t;
                last = true;
            }
            if h.abs() <= 1e-14 * t.abs().max(1.0) {
                return Err(SimError::StepSizeUnderflow { t });
            }
            self.stages(f, t, &y, h, &mut st);
            sol.evaluations += 6;
            if fixed {
                for i in 0..n {
                    let k = &st.k;
                    st.y1[i] = y[i]
                        + h * (B4[0] * k[0][i] + B4[2] * k[2][i] + B4[3] * k[3][i] + B4[4] * k[4][i] + B4[5] * k[5][i] + B4[6] * k[6][i]);
                }
                f(t + h, &st.y1, &mut st.k[6]);
                sol.evaluations += 1;
            }
            if st.y1.iter().chain(st.k[6].iter()).any(|v| !v.is_finite()) {
                if fixed {
                    return Err(SimError::NonFinite { t });
                }
                sol.rejected += 1;
                h *= 0.25;
                last_rejected = true;
                continue;
            }
            if self.opts.positive {
                if let Some(c) = st.y1.iter().position(|&v| v < 0.0) {
                    if fixed {
                        return Err(SimError::PositivityLoss { t: t + h, component: c });
                    }
                    sol.rejected += 1;
                    h *= 0.5;
                    if h <= 1e-14 * t.abs().max(1.0) {
                        return Err(SimError::PositivityLoss { t, component: c });
                    }
                    last_rejected = true;
                    continue;
                }
            }
            let err = if fixed { 0.0 } else { self.error_norm(&y, h, &st) };
            if err > 1.0 {
                sol.rejected += 1;
                let fac = (0.9 * err.powf(-0.2)).max(0.2);
                h *= fac;
                last_rejected = true;
                continue;
            }
            // Dense output coefficients for [t, t + h].
            for i in 0..n {
                let ydiff = st.y1[i] - y[i];
                let bspl = h * st.k[0][i] - ydiff;
                rcont[0][i] = y[i];
                rcont[1][i] = ydiff;
                rcont[2][i] = bspl;
                rcont[3][i] = ydiff - h * st.k[6][i] - bspl;
                rcont[4][i] = h
                    * (D1 * st.k[0][i] + D3 * st.k[2][i] + D4 * st.k[3][i] + D5 * st.k[4][i] + D6 * st.k[5][i] + D7 * st.k[6][i]);
            }
            let t_new = if last { t_end } else { t + h };
            while next_out < t_out.len() && t_out[next_out] <= t_new {
                let theta = ((t_out[next_out] - t) / h).clamp(0.0, 1.0);
                let th1 = 1.0 - theta;
                let yo: Vec<f64> = (0..n)
                    .map(|i| {
                        rcont[0][i]
                            + theta * (rcont[1][i] + th1 * (rcont[2][i] + theta * (rcont[3][i] + th1 * rcont[4][i])))
                    })
                    .collect();
                sol.outputs.push(yo);
                next_out += 1;
            }
            sol.accepted += 1;
            y.copy_from_slice(&st.y1);
            let k7 = std::mem::take(&mut st.k[6]);
            st.k[6] = std::mem::replace(&mut st.k[0], k7);
            t = t_new;
            if last {
                break;
            }
            if !fixed {
                let mut fac = (0.9 * err.max(1e-10).powf(-0.2)).clamp(0.2, 10.0);
                if last_rejected {
                    fac = fac.min(1.0);
                }
                h = (h * fac).min(self.opts.h_max);
            }
            last_rejected = false;
        }
        sol.t_final = t;
        sol.y_final = y;
        Ok(sol)
    }

    fn stages<F>(&self, f: &mut F, t: f64, y: &[f64], h: f64, st: &mut Stages)
    where
        F: FnMut(f64, &[f64], &mut [f64]),
    {
        let n = y.len();
        let Stages { k, tmp, y1 } = st;
        let [k1, k2, k3, k4, k5, k6, k7] = k;
        for i in 0..n {
            tmp[i] = y[i] + h * A21 * k1[i];
        }
        f(t + C2 * h, tmp, k2);
        for i in 0..n {
            tmp[i] = y[i] + h * (A31 * k1[i] + A32 * k2[i]);
        }
        f(t + C3 * h, tmp, k3);
        for i in 0..n {
            tmp[i] = y[i] + h * (A41 * k1[i] + A42 * k2[i] + A43 * k3[i]);
        }
        f(t + C4 * h, tmp, k4);
        for i in 0..n {
            tmp[i] = y[i] + h * (A51 * k1[i] + A52 * k2[i] + A53 * k3[i] + A54 * k4[i]);
        }
        f(t + C5 * h, tmp, k5);
        for i in 0..n {
            tmp[i] = y[i] + h * (A61 * k1[i] + A62 * k2[i] + A63 * k3[i] + A64 * k4[i] + A65 * k5[i]);
        }
        f(t + h, tmp, k6);
        for i in 0..n {
            y1[i] = y[i] + h * (A71 * k1[i] + A73 * k3[i] + A74 * k4[i] + A75 * k5[i] + A76 * k6[i]);
        }
        f(t + h, y1, k7);
    }

    fn error_norm(&self, y: &[f64], h: f64, st: &Stages) -> f64 {
        let k = &st.k;
        let n = y.len().max(1);
        let mut sum = 0.0;
        for i in 0..y.len() {
            let e = h * (E1 * k[0][i] + E3 * k[2][i] + E4 * k[3][i] + E5 * k[4][i] + E6 * k[5][i] + E7 * k[6][i]);
            let sc = self.opts.atol + self.opts.rtol * y[i].abs().max(st.y1[i].abs());
            sum += (e / sc).powi(2);
        }
        (sum / n as f64).sqrt()
    }

    fn initial_step<F>(&self, f: &mut F, t: f64, y: &[f64], st: &mut Stages, span: f64, evals: &mut usize) -> f64
    where
        F: FnMut(f64, &[f64], &mut [f64]),
    {
        let n = y.len().max(1) as f64;
        let sc: Vec<f64> = y.iter().map(|v| self.opts.atol + self.opts.rtol * v.abs()).collect();
        let norm = |v: &[f64]| (v.iter().zip(&sc).map(|(a, s)| (a / s).powi(2)).sum::<f64>() / n).sqrt();
        let d0 = norm(y);
        let d1 = norm(&st.k[0]);
        let mut h0 = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
        h0 = h0.min(span).min(self.opts.h_max);
        for i in 0..y.len() {
            st.tmp[i] = y[i] + h0 * st.k[0][i];
        }
        f(t + h0, &st.tmp, &mut st.k[1]);
        *evals += 1;
        let diff: Vec<f64> = st.k[1].iter().zip(&st.k[0]).map(|(a, b)| a - b).collect();
        let d2 = norm(&diff) / h0;
        let h1 = if d1.max(d2) <= 1e-15 { (h0 * 1e-3).max(1e-6) } else { (0.01 / d1.max(d2)).powf(0.2) };
        if !h1.is_finite() {
            return h0;
        }
        (100.0 * h0).min(h1).min(span).min(self.opts.h_max)
    }
}

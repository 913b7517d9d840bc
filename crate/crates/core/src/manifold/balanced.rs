use nalgebra::{DMatrix, DVector};
use num_traits::{Signed, Zero};
use tfr_exact::Rational;

use super::{ManifoldError, XStar};
use crate::crn::{Network, NetworkGraph, SlowFastSplit};
use crate::numeric::CompiledField;
use crate::sim::{Dopri5, Dopri5Options};

const NEWTON_TOL: f64 = 1e-13;
const ACCEPT_TOL: f64 = 1e-10;

#[derive(Clone, Debug)]
pub struct BalancedState {
    pub x_star: XStar,
    /// Largest per-node relative imbalance (0 for exact states).
    pub residual: f64,
    /// `hint`, `ones`, `newton` or `fast-flow`.
    pub method: &'static str,
}

fn rate_exact(net: &Network, j: usize, x: &[Rational]) -> Rational {
    let mut w = net.k[j].clone();
    for (i, xi) in x.iter().enumerate() {
        let e = net.y[(i, j)];
        for _ in 0..e {
            w *= xi;
        }
    }
    w
}

fn rate_f64(net: &Network, j: usize, x: &[f64]) -> f64 {
    let mut w = tfr_exact::rational_to_f64(&net.k[j]);
    for (i, xi) in x.iter().enumerate() {
        let e = net.y[(i, j)];
        if e != 0 {
            w *= xi.powi(e as i32);
        }
    }
    w
}

fn edge_nodes(g: &NetworkGraph, j: usize) -> (usize, usize) {
    g.edges[j]
}

/// Inflow minus outflow at every node of the fast graph.
pub fn node_balance_residual_exact(split: &SlowFastSplit, x: &[Rational]) -> Vec<Rational> {
    let g = split.fast_graph();
    let mut bal = vec![Rational::zero(); g.num_nodes()];
    for j in 0..split.fast.m() {
        let w = rate_exact(&split.fast, j, x);
        let (a, b) = edge_nodes(&g, j);
        bal[b] += &w;
        bal[a] -= &w;
    }
    bal
}

/// Largest relative node imbalance `|in - out| / (in + out)`.
pub fn node_balance_residual_f64(split: &SlowFastSplit, x: &[f64]) -> f64 {
    let g = split.fast_graph();
    let mut bal = vec![0.0; g.num_nodes()];
    let mut mass = vec![0.0; g.num_nodes()];
    for j in 0..split.fast.m() {
        let w = rate_f64(&split.fast, j, x);
        let (a, b) = edge_nodes(&g, j);
        bal[b] += w;
        bal[a] -= w;
        mass[a] += w;
        mass[b] += w;
    }
    bal.iter().zip(&mass).map(|(b, m)| if *m > 0.0 { b.abs() / m } else { 0.0 }).fold(0.0, f64::max)
}

struct NewtonProblem<'a> {
    split: &'a SlowFastSplit,
    graph: NetworkGraph,
    /// Anchor rows and their target values.
    anchor: Vec<Vec<f64>>,
    target: Vec<f64>,
}

impl NewtonProblem<'_> {
    fn residual_and_jacobian(&self, z: &[f64]) -> (DVector<f64>, DMatrix<f64>) {
        let n = z.len();
        let x: Vec<f64> = z.iter().map(|v| v.exp()).collect();
        let nodes = self.graph.num_nodes();
        let rows = nodes + self.anchor.len();
        let mut f = DVector::zeros(rows);
        let mut jac = DMatrix::zeros(rows, n);
        let mut mass = vec![0.0; nodes];
        let fast = &self.split.fast;
        let rates: Vec<f64> = (0..fast.m()).map(|j| rate_f64(fast, j, &x)).collect();
        for (j, &(a, _)) in self.graph.edges.iter().enumerate() {
            mass[a] += rates[j];
        }
        for (j, &(a, b)) in self.graph.edges.iter().enumerate() {
            let w = rates[j];
            // Node equations are divided by the outflow mass so that they are scale free.
            let (sa, sb) = (mass[a].max(f64::MIN_POSITIVE), mass[b].max(f64::MIN_POSITIVE));
            f[b] += w / sb;
            f[a] -= w / sa;
            for i in 0..n {
                let e = fast.y[(i, j)] as f64;
                if e != 0.0 {
                    jac[(b, i)] += w * e / sb;
                    jac[(a, i)] -= w * e / sa;
                }
            }
        }
        for (k, row) in self.anchor.iter().enumerate() {
            let scale = self.target[k].abs().max(1e-300);
            let mut val = -self.target[k];
            for i in 0..n {
                val += row[i] * x[i];
                jac[(nodes + k, i)] = row[i] * x[i] / scale;
            }
            f[nodes + k] = val / scale;
        }
        (f, jac)
    }

    /// Damped Gauss-Newton in `z = log x`.
    fn solve(&self, x0: &[f64]) -> Option<Vec<f64>> {
        let mut z: Vec<f64> = x0.iter().map(|v| v.ln()).collect();
        let (mut f, mut jac) = self.residual_and_jacobian(&z);
        let mut norm = f.amax();
        for _ in 0..200 {
            if norm < NEWTON_TOL {
                break;
            }
            let step = jac.clone().svd(true, true).solve(&(-&f), 1e-14).ok()?;
            let mut lambda = 1.0;
            let mut improved = false;
            while lambda > 1e-6 {
                let trial: Vec<f64> = z.iter().zip(step.iter()).map(|(a, d)| a + lambda * d.clamp(-20.0, 20.0)).collect();
                let (ft, jt) = self.residual_and_jacobian(&trial);
                let nt = ft.amax();
                if nt.is_finite() && nt < norm {
                    z = trial;
                    f = ft;
                    jac = jt;
                    norm = nt;
                    improved = true;
                    break;
                }
                lambda *= 0.5;
            }
            if !improved {
                break;
            }
        }
        z.iter().all(|v| v.is_finite()).then(|| z.iter().map(|v| v.exp()).collect())
    }
}

fn exact_balanced(split: &SlowFastSplit, x: &[Rational]) -> bool {
    x.iter().all(|v| v.is_positive()) && node_balance_residual_exact(split, x).iter().all(Zero::is_zero)
}

/// Positive complex-balanced steady state of the fast subnetwork.
///
/// Order of attempts: the exact hint, the all-ones vector, damped Newton in
/// log coordinates anchored at the hint's (or ones') conservation values, and
/// finally the fast flow integrated to near-stationarity followed by Newton.
pub fn complex_balanced_state(split: &SlowFastSplit, hint: Option<&XStar>) -> Result<BalancedState, ManifoldError> {
    let graph = split.fast_graph();
    if !graph.weakly_reversible() {
        return Err(ManifoldError::NotWeaklyReversible);
    }
    let n = split.n();
    if let Some(XStar::Exact(h)) = hint {
        if h.len() != n {
            return Err(ManifoldError::Invalid(format!("x* has {} entries, expected {n}", h.len())));
        }
        if exact_balanced(split, h) {
            return Ok(BalancedState { x_star: XStar::Exact(h.clone()), residual: 0.0, method: "hint" });
        }
    }
    if hint.is_none() {
        let ones = vec![Rational::from_integer(1.into()); n];
        if exact_balanced(split, &ones) {
            return Ok(BalancedState { x_star: XStar::Exact(ones), residual: 0.0, method: "ones" });
        }
    }
    let x0 = hint.map(|h| h.to_f64()).unwrap_or_else(|| vec![1.0; n]);
    if x0.len() != n || x0.iter().any(|v| !(*v > 0.0)) {
        return Err(ManifoldError::Invalid("x* hint must be positive".into()));
    }
    let anchor: Vec<Vec<f64>> = split.l_f().to_rows().iter().map(|r| r.iter().map(|&v| v as f64).collect()).collect();
    let target: Vec<f64> = anchor.iter().map(|r| r.iter().zip(&x0).map(|(a, b)| a * b).sum()).collect();
    let problem = NewtonProblem { split, graph, anchor, target };
    let mut last = f64::INFINITY;
    if let Some(x) = problem.solve(&x0) {
        let res = node_balance_residual_f64(split, &x);
        if res < ACCEPT_TOL && x.iter().all(|v| *v > 0.0) {
            return Ok(finish(x, res, "newton"));
        }
        last = res;
    }
    // Fast flow: conserves the anchor values, so it lands on the same class.
    let field = CompiledField::new(&split.h0());
    let mut rhs = |_t: f64, y: &[f64], out: &mut [f64]| field.eval_into(y, out);
    let opts = Dopri5Options { rtol: 1e-10, atol: 1e-12, max_steps: 2_000_000, ..Dopri5Options::default() };
    if let Ok(sol) = Dopri5::new(opts).solve(&mut rhs, 0.0, &x0, 1e4, &[]) {
        if let Some(x) = problem.solve(&sol.y_final) {
            let res = node_balance_residual_f64(split, &x);
            if res < ACCEPT_TOL && x.iter().all(|v| *v > 0.0) {
                return Ok(finish(x, res, "fast-flow"));
            }
            last = last.min(res);
        }
    }
    Err(ManifoldError::NoPositiveSolution(last))
}

fn finish(x: Vec<f64>, res: f64, method: &'static str) -> BalancedState {
    BalancedState { x_star: XStar::Float(x), residual: res, method }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::crn::{build_stoich, split_slow_fast};
    use crate::model::parse_model;

    fn split(text: &str) -> SlowFastSplit {
        let m = parse_model(text).unwrap();
        let c = m.as_crn().unwrap();
        split_slow_fast(&build_stoich(c), c)
    }

    #[test]
    fn unit_rates_give_ones() {
        let sp = split(include_str!("../../fixtures/two_component.tfr"));
        let st = complex_balanced_state(&sp, None).unwrap();
        assert_eq!(st.method, "ones");
        assert_eq!(st.x_star, XStar::Exact(vec![Rational::from_integer(1.into()); 6]));
    }

    #[test]
    fn not_weakly_reversible() {
        let sp = split(include_str!("../../fixtures/dual_phosphorylation.tfr"));
        assert_eq!(complex_balanced_state(&sp, None).unwrap_err(), ManifoldError::NotWeaklyReversible);
    }

    #[test]
    fn newton_finds_balanced_state() {
        let text = "@species X1 X2 X3 X4 X5 X6\n@fast\nX1 <-> X2 : 2, 3\nX2 + X3 <-> X5 : 5, 7\nX5 <-> X1 + X4 : 11, 13\n@slow\nX4 -> X3 : 1\n@fastnodes X6\n";
        let sp = split(text);
        let st = complex_balanced_state(&sp, None).unwrap();
        assert_eq!(st.method, "newton");
        let XStar::Float(x) = &st.x_star else { panic!() };
        assert!(node_balance_residual_f64(&sp, x) < 1e-10);
        // The conservation values of the all-ones start are kept.
        assert!((x[0] + x[1] + x[4] - 3.0).abs() < 1e-9);
    }
}

use num_traits::Signed;
use serde::Serialize;
use tfr_exact::{rational_to_f64, rf_rank, MultiPoly, QMatrix, RatFun, Rational};

use super::{dphi, Parameterization};
use crate::reduce::sample_points;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    pub(crate) fn new(name: &str, passed: bool, detail: impl Into<String>) -> Self {
        Check { name: name.to_string(), passed, detail: detail.into() }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ParamReport {
    pub checks: Vec<Check>,
    pub exact: bool,
    pub samples: usize,
    pub seed: u64,
}

impl ParamReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

const NUMERIC_TOL: f64 = 1e-9;

/// Checks that `p` maps into `{h0 = 0}`, has rank `s` generically and at the
/// sample points, and is positive at the sample points.
pub fn verify_parameterization(p: &Parameterization, h0: &[MultiPoly], s: usize, samples: usize, seed: u64) -> ParamReport {
    let mut checks = Vec::new();
    let shape_ok = p.n() == h0.len() && p.s() == s;
    checks.push(Check::new(
        "dimensions",
        shape_ok,
        format!("Phi: R^{} -> R^{}, expected R^{s} -> R^{}", p.s(), p.n(), h0.len()),
    ));
    if !shape_ok {
        return ParamReport { checks, exact: p.is_exact(), samples, seed };
    }
    let points = sample_points(s, samples, seed);
    let fpoints: Vec<Vec<f64>> = points.iter().map(|v| v.iter().map(rational_to_f64).collect()).collect();
    match p.exact() {
        Ok(phi) => {
            let bad: Vec<usize> = (0..h0.len()).filter(|&i| !RatFun::compose_poly(&h0[i], phi).is_zero()).collect();
            checks.push(Check::new(
                "on_manifold",
                bad.is_empty(),
                if bad.is_empty() { "h0(Phi(v)) = 0 identically".to_string() } else { format!("nonzero components {:?}", plus_one(&bad)) },
            ));
            let d = dphi(p).expect("exact");
            let gr = rf_rank(&d);
            checks.push(Check::new("generic_rank", gr == s, format!("rank D Phi = {gr}")));
            let mut deficient = Vec::new();
            let mut nonpositive = Vec::new();
            for (k, v) in points.iter().enumerate() {
                let dv: Option<Vec<Rational>> = d.entries().map(|f| f.eval(v)).collect();
                match dv {
                    Some(e) => {
                        let m = QMatrix::from_rows(e.chunks(s.max(1)).map(|c| c.to_vec()).collect(), s, Rational::from_integer(0.into()));
                        if s > 0 && m.rank() != s {
                            deficient.push(k);
                        }
                    }
                    None => deficient.push(k),
                }
                match p.eval_exact(v) {
                    Some(x) if x.iter().all(Signed::is_positive) => {}
                    _ => nonpositive.push(k),
                }
            }
            checks.push(point_check("point_rank", &deficient, samples));
            checks.push(point_check("positivity", &nonpositive, samples));
        }
        Err(_) => {
            let mut worst: f64 = 0.0;
            let mut deficient = Vec::new();
            let mut nonpositive = Vec::new();
            for (k, v) in fpoints.iter().enumerate() {
                let x = p.eval_f64(v);
                let scale = x.iter().fold(1.0f64, |a, b| a.max(b.abs()));
                for q in h0 {
                    let mag: f64 = q.terms().map(|(m, c)| (rational_to_f64(c) * m.exponents().iter().zip(&x).map(|(&e, xi)| xi.powi(e as i32)).product::<f64>()).abs()).sum();
                    worst = worst.max(q.eval_f64(&x).abs() / mag.max(scale * f64::EPSILON));
                }
                let jac = p.jacobian_f64(v);
                let sv = jac.singular_values();
                let top = sv.iter().cloned().fold(0.0, f64::max);
                if sv.iter().filter(|&&x| x > NUMERIC_TOL * top).count() != s {
                    deficient.push(k);
                }
                if !x.iter().all(|&c| c > 0.0) {
                    nonpositive.push(k);
                }
            }
            checks.push(Check::new("on_manifold", worst < NUMERIC_TOL, format!("max relative |h0(Phi(v))| = {worst:.3e}")));
            checks.push(point_check("point_rank", &deficient, samples));
            checks.push(point_check("positivity", &nonpositive, samples));
        }
    }
    ParamReport { checks, exact: p.is_exact(), samples, seed }
}

fn plus_one(v: &[usize]) -> Vec<usize> {
    v.iter().map(|i| i + 1).collect()
}

fn point_check(name: &str, failed: &[usize], total: usize) -> Check {
    if failed.is_empty() {
        Check::new(name, true, format!("{total}/{total} sample points"))
    } else {
        Check::new(name, false, format!("fails at sample points {:?}", plus_one(failed)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::crn::{build_stoich, split_slow_fast};
    use crate::manifold::{find_noninteracting_sets, rational_parameterization};
    use crate::model::parse_model;

    #[test]
    fn corrupted_component_fails() {
        let m = parse_model("@species X1 X2 X3\n@fast X1 + X2 <-> X3 : 1, 1\n@slow X1 + X3 <-> 2 X2 : 1, 1\n").unwrap();
        let c = m.as_crn().unwrap();
        let sp = split_slow_fast(&build_stoich(c), c);
        let set = &find_noninteracting_sets(&sp)[0];
        let good = rational_parameterization(set, &sp).unwrap();
        let rep = verify_parameterization(&good, &sp.h0(), 2, 20, 42);
        assert!(rep.passed(), "{rep:?}");
        let mut phi = good.exact().unwrap().to_vec();
        let v = |i| RatFun::var(2, i);
        phi[2] = &(&v(0) * &v(1)) * &v(1);
        let bad = Parameterization::user(phi, good.param_names.clone());
        let rep = verify_parameterization(&bad, &sp.h0(), 2, 20, 42);
        assert!(!rep.check("on_manifold").unwrap().passed);
    }
}

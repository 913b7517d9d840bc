use serde::Serialize;
use tfr_exact::{rational_to_string, Matrix, Printer, RatFun};

use crate::manifold::{find_noninteracting_sets, Check, ParamKind, Parameterization, XStar};
use crate::reduce::{BlanketReport, PathFailure, ReducedRhs, ReducedSystem, StabilityReport};
use crate::system::FastSlowSystem;

pub const SCHEMA: u32 = 1;

#[derive(Clone, Debug, Serialize)]
pub struct ReductionReport {
    pub schema: u32,
    pub model: String,
    pub model_hash: String,
    pub structural: Structural,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hypothesis: Option<Hypothesis>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub parameterization: Option<ParamSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reduction: Option<ReductionSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stability: Option<StabilitySummary>,
    pub failed_paths: Vec<PathFailure>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Structural {
    pub kind: &'static str,
    pub species: Vec<String>,
    pub n: usize,
    pub m: Option<usize>,
    pub r: usize,
    pub s: usize,
    pub deficiency_fast: Option<usize>,
    pub weakly_reversible_fast: Option<bool>,
    pub conservation_laws: Vec<Vec<i64>>,
    #[serde(rename = "L_f")]
    pub l_f: Option<Vec<Vec<i64>>>,
    pub noninteracting_sets: Vec<Vec<String>>,
}

impl Structural {
    pub fn of(sys: &FastSlowSystem) -> Self {
        let rows = |m: &Matrix<i64>| m.to_rows();
        match &sys.crn {
            Some(c) => Structural {
                kind: "network",
                species: sys.names.clone(),
                n: sys.n(),
                m: Some(c.stoich.net.m()),
                r: sys.r,
                s: sys.s,
                deficiency_fast: Some(c.deficiency_fast),
                weakly_reversible_fast: Some(c.weakly_reversible_fast),
                conservation_laws: rows(&sys.conservation),
                l_f: Some(rows(&c.l_f)),
                noninteracting_sets: find_noninteracting_sets(&c.split)
                    .iter()
                    .map(|set| set.indices.iter().map(|&i| sys.names[i].clone()).collect())
                    .collect(),
            },
            None => Structural {
                kind: "generic",
                species: sys.names.clone(),
                n: sys.n(),
                m: None,
                r: sys.r,
                s: sys.s,
                deficiency_fast: None,
                weakly_reversible_fast: None,
                conservation_laws: rows(&sys.conservation),
                l_f: None,
                noninteracting_sets: Vec::new(),
            },
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Hypothesis {
    /// Parameterization the checks were sampled on.
    pub parameterization: String,
    pub checks: Vec<Check>,
    pub tikhonov: bool,
    pub fenichel: bool,
    pub shortcut: Option<String>,
    pub passed: bool,
}

impl Hypothesis {
    pub fn from_report(kind: ParamKind, b: &BlanketReport) -> Self {
        Hypothesis {
            parameterization: kind_name(kind).to_string(),
            checks: b.checks.clone(),
            tikhonov: b.tikhonov,
            fenichel: b.fenichel,
            shortcut: b.shortcut.clone(),
            passed: b.passed() && b.tikhonov,
        }
    }
}

pub fn kind_name(kind: ParamKind) -> &'static str {
    match kind {
        ParamKind::Rational => "noninteracting",
        ParamKind::Monomial => "complexbalanced",
        ParamKind::User => "user",
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ParamSummary {
    pub kind: &'static str,
    pub params: Vec<String>,
    /// Components of `Phi`, absent when there is no exact form.
    pub phi: Option<Vec<String>>,
    pub phi_latex: Option<Vec<String>>,
    pub x_star: Option<Vec<String>>,
    pub exponents: Option<Vec<Vec<String>>>,
    pub eliminated: Option<Vec<String>>,
    pub domain: String,
    pub warnings: Vec<String>,
}

fn print_all(pr: &Printer, f: &[RatFun], latex: bool) -> Vec<String> {
    f.iter().map(|c| if latex { pr.ratfun_latex(c) } else { pr.ratfun(c) }).collect()
}

impl ParamSummary {
    pub fn of(p: &Parameterization, species: &[String]) -> Self {
        let pr = Printer::new(&p.param_names);
        let x_star = p.monomial.as_ref().map(|m| match &m.x_star {
            XStar::Exact(x) => x.iter().map(rational_to_string).collect(),
            XStar::Float(x) => x.iter().map(|c| format!("{c:.16e}")).collect(),
        });
        ParamSummary {
            kind: kind_name(p.kind),
            params: p.param_names.clone(),
            phi: p.phi.as_ref().map(|f| print_all(&pr, f, false)),
            phi_latex: p.phi.as_ref().map(|f| print_all(&pr, f, true)),
            x_star,
            exponents: p.monomial.as_ref().map(|m| m.b.to_rows().iter().map(|r| r.iter().map(rational_to_string).collect()).collect()),
            eliminated: p.eliminated.as_ref().map(|e| e.iter().map(|&i| species[i].clone()).collect()),
            domain: p.domain_note.clone(),
            warnings: p.warnings.clone(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct IntegralSummary {
    pub psi: Vec<i64>,
    pub tilde: String,
    pub constant: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ReductionSummary {
    pub path: &'static str,
    pub exact: bool,
    pub trivial: bool,
    pub rhs: Option<Vec<String>>,
    pub rhs_latex: Option<Vec<String>>,
    #[serde(rename = "R")]
    pub r: Option<Vec<Vec<String>>>,
    #[serde(rename = "R_latex")]
    pub r_latex: Option<Vec<Vec<String>>>,
    pub first_integrals: Vec<IntegralSummary>,
}

impl ReductionSummary {
    pub fn of(rs: &ReducedSystem) -> Self {
        let pr = Printer::new(&rs.phi.param_names);
        let rhs = rs.rhs.as_exact();
        let rmat = |latex: bool| rs.r.as_ref().map(|r| r.to_rows().iter().map(|row| print_all(&pr, row, latex)).collect());
        ReductionSummary {
            path: rs.path.as_str(),
            exact: matches!(rs.rhs, ReducedRhs::Exact { .. }),
            trivial: rs.trivial,
            rhs: rhs.map(|f| print_all(&pr, f, false)),
            rhs_latex: rhs.map(|f| print_all(&pr, f, true)),
            r: rmat(false),
            r_latex: rmat(true),
            first_integrals: rs
                .first_integrals
                .iter()
                .map(|fi| IntegralSummary { psi: fi.psi.clone(), tilde: pr.ratfun(&fi.tilde), constant: fi.constant })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct StabilitySummary {
    pub method: crate::reduce::StabilityMethod,
    pub samples: usize,
    pub stable: usize,
    pub unstable: usize,
    pub marginal: usize,
    pub global_certificate: bool,
    pub shortcut: Option<String>,
    pub inconsistencies: Vec<String>,
}

impl StabilitySummary {
    pub fn of(st: &StabilityReport) -> Self {
        use crate::reduce::Verdict;
        let count = |v: Verdict| st.verdicts.iter().filter(|x| **x == v).count();
        StabilitySummary {
            method: st.method,
            samples: st.verdicts.len(),
            stable: count(Verdict::Stable),
            unstable: count(Verdict::Unstable),
            marginal: count(Verdict::Marginal),
            global_certificate: st.global_certificate,
            shortcut: st.shortcut.clone(),
            inconsistencies: st.inconsistencies.clone(),
        }
    }
}

/// Plain listing of a reduced system.
pub fn render_plain(rs: &ReducedSystem, latex: bool) -> String {
    let mut out = String::new();
    let pr = Printer::new(&rs.phi.param_names);
    out.push_str(&format!("path: {}\n", rs.path.as_str()));
    if let Some(phi) = &rs.phi.phi {
        for (i, c) in phi.iter().enumerate() {
            out.push_str(&format!("x{} = {}\n", i + 1, pr.ratfun(c)));
        }
    }
    match rs.rhs.as_exact() {
        Some(rhs) => {
            for (name, f) in rs.phi.param_names.iter().zip(rhs) {
                out.push_str(&format!("{name}' = {}\n", pr.ratfun(f)));
            }
            if latex {
                for (i, f) in rhs.iter().enumerate() {
                    out.push_str(&format!("{}' = {}\n", pr.latex_name(i), pr.ratfun_latex(f)));
                }
            }
        }
        None => out.push_str("rhs has no exact form (numeric reference point)\n"),
    }
    for fi in &rs.first_integrals {
        out.push_str(&format!("first integral {:?}: {}\n", fi.psi, if fi.constant { "constant on Z".to_string() } else { pr.ratfun(&fi.tilde) }));
    }
    out
}

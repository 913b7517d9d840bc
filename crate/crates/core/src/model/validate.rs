use std::fmt;

use num_traits::Signed;
use serde::Serialize;

use super::{Expr, Model, ModelError, ModelKind, Speed};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub severity: Severity,
    pub message: String,
    /// Source line when known.
    pub line: Option<usize>,
}

impl Diagnostic {
    fn error(message: impl Into<String>, line: Option<usize>) -> Self {
        Diagnostic { severity: Severity::Error, message: message.into(), line }
    }

    fn warning(message: impl Into<String>, line: Option<usize>) -> Self {
        Diagnostic { severity: Severity::Warning, message: message.into(), line }
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        match self.line {
            Some(l) if l > 0 => write!(f, "{tag}: line {l}: {}", self.message),
            _ => write!(f, "{tag}: {}", self.message),
        }
    }
}

fn nonzero_line(l: usize) -> Option<usize> {
    (l > 0).then_some(l)
}

fn check_exprs<'a>(exprs: impl IntoIterator<Item = &'a Expr>, names: &[String], polynomial: bool, what: &str, out: &mut Vec<Diagnostic>) {
    for e in exprs {
        let res = if polynomial { e.to_poly(names).map(|_| ()) } else { e.to_ratfun(names).map(|_| ()) };
        match res {
            Ok(()) => {}
            Err(ModelError::UnknownIdentifier { name, line, .. }) => {
                out.push(Diagnostic::error(format!("unknown identifier '{name}' in {what}"), nonzero_line(line)))
            }
            Err(err) => out.push(Diagnostic::error(format!("{what}: {err}"), nonzero_line(e.line()))),
        }
    }
}

/// Parameter names used by `@phi`: the declared ones, or `v1..vs`.
pub(crate) fn param_names(m: &Model, s: usize) -> Vec<String> {
    if m.user.params.is_empty() {
        (1..=s).map(|i| format!("v{i}")).collect()
    } else {
        m.user.params.clone()
    }
}

/// Structural checks. An empty list means the model is well formed.
pub fn validate_model(m: &Model) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    if !m.epsilon.is_positive() {
        out.push(Diagnostic::error("epsilon must be positive", None));
    }
    let names = m.state_names();
    if names.is_empty() {
        out.push(Diagnostic::error("no species or state variables", None));
    }
    let mut s_expected = None;
    match &m.kind {
        ModelKind::Crn(c) => {
            if c.reactions_of(Speed::Fast).next().is_none() {
                out.push(Diagnostic::error("no fast reactions", None));
            }
            for r in &c.reactions {
                if !r.rate.is_positive() {
                    out.push(Diagnostic::error("rate constant is not positive", nonzero_line(r.line)));
                }
                if r.reactant == r.product {
                    out.push(Diagnostic::error("reactant and product complexes coincide", nonzero_line(r.line)));
                }
            }
            let n = c.n();
            let cols: Vec<Vec<i64>> = c
                .reactions_of(Speed::Fast)
                .map(|r| {
                    let (a, b) = (r.reactant.to_dense(n), r.product.to_dense(n));
                    (0..n).map(|i| b[i] - a[i]).collect()
                })
                .collect();
            if !cols.is_empty() {
                let rank = tfr_exact::QMatrix::from_i64_rows(&cols, n).rank();
                s_expected = Some(n - rank);
            }
            for sp in &c.species {
                let used = c.reactions.iter().any(|r| r.reactant.coefficient(sp.index) > 0 || r.product.coefficient(sp.index) > 0)
                    || c.fast_nodes.iter().any(|x| x.coefficient(sp.index) > 0);
                if !used {
                    out.push(Diagnostic::warning(format!("unused species {}", sp.name), None));
                }
            }
        }
        ModelKind::Generic(g) => {
            let n = g.vars.len();
            let r = g.mu.len();
            if r == 0 {
                out.push(Diagnostic::error("no fast equations (@mu is empty)", None));
            }
            if g.p.len() != n {
                out.push(Diagnostic::error(format!("dimension mismatch: P has {} rows, expected {n}", g.p.len()), None));
            }
            for (i, row) in g.p.iter().enumerate() {
                if row.len() != r {
                    out.push(Diagnostic::error(
                        format!("dimension mismatch: row {} of P has {} entries but mu has length {r}", i + 1, row.len()),
                        row.first().map(|e| e.line()).and_then(nonzero_line),
                    ));
                }
            }
            if g.h1.len() != n {
                out.push(Diagnostic::error(format!("dimension mismatch: h1 has length {}, expected {n}", g.h1.len()), None));
            }
            if r >= n && n > 0 {
                out.push(Diagnostic::error(format!("mu has length {r}, which leaves no slow directions in dimension {n}"), None));
            } else {
                s_expected = Some(n - r);
            }
            check_exprs(g.p.iter().flatten(), &names, true, "P", &mut out);
            check_exprs(&g.mu, &names, true, "mu", &mut out);
            check_exprs(&g.h1, &names, true, "h1", &mut out);
            let mut used = Vec::new();
            for e in g.p.iter().flatten().chain(&g.mu).chain(&g.h1) {
                e.variables(&mut used);
            }
            for v in &g.vars {
                if !used.contains(v) {
                    out.push(Diagnostic::warning(format!("unused variable {v}"), None));
                }
            }
        }
    }
    let n = names.len();
    if let Some(phi) = &m.user.phi {
        if phi.len() != n {
            out.push(Diagnostic::error(format!("dimension mismatch: @phi has {} entries, expected {n}", phi.len()), None));
        }
        let s = if m.user.params.is_empty() { s_expected.unwrap_or(0) } else { m.user.params.len() };
        if let Some(se) = s_expected {
            if s != se {
                out.push(Diagnostic::error(format!("dimension mismatch: {s} parameters but the slow dimension is {se}"), None));
            }
        }
        let pnames = param_names(m, s);
        check_exprs(phi, &pnames, false, "@phi", &mut out);
    }
    if let Some(l) = &m.user.l {
        if let Some(se) = s_expected {
            if l.len() != se {
                out.push(Diagnostic::error(format!("dimension mismatch: @L has {} rows, expected {se}", l.len()), None));
            }
        }
        for (i, row) in l.iter().enumerate() {
            if row.len() != n {
                out.push(Diagnostic::error(format!("dimension mismatch: row {} of @L has {} entries, expected {n}", i + 1, row.len()), None));
            }
        }
        check_exprs(l.iter().flatten(), &names, true, "@L", &mut out);
    }
    out
}

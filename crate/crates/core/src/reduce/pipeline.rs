use serde::Serialize;
use tfr_exact::{MultiPoly, PolyMatrix, Rational};

use super::{compute_r_general, compute_r_via_l, complex_balanced_reduced, reduced_system, reduced_system_numeric, ReducePath, ReduceError, ReducedSystem};
use crate::manifold::{
    check_noninteracting, complex_balanced_state, find_noninteracting_sets, monomial_parameterization, rational_parameterization, ParamKind,
    Parameterization, XStar,
};
use crate::system::FastSlowSystem;

/// Which parameterization to build.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParamChoice {
    /// Complex-balanced (weakly reversible, deficiency zero), then the first
    /// non-interacting set, then the user's.
    Auto,
    /// A given set of species indices, or the first qualifying set.
    NonInteracting(Option<Vec<usize>>),
    ComplexBalanced,
    User,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PathFailure {
    pub path: String,
    pub reason: String,
}

fn fail(path: &str, reason: impl ToString) -> PathFailure {
    PathFailure { path: path.to_string(), reason: reason.to_string() }
}

fn complex_balanced(sys: &FastSlowSystem, hint: Option<&XStar>) -> Result<Parameterization, PathFailure> {
    let crn = sys.crn.as_ref().ok_or_else(|| fail("complexbalanced", "model is not a reaction network"))?;
    if !crn.weakly_reversible_fast {
        return Err(fail("complexbalanced", "NotWeaklyReversible"));
    }
    let st = complex_balanced_state(&crn.split, hint).map_err(|e| fail("complexbalanced", format!("{e:?}")))?;
    let mut p = monomial_parameterization(st.x_star, crn.l_f.to_q()).map_err(|e| fail("complexbalanced", format!("{e:?}")))?;
    p.domain_note = format!("v > 0; x* from {}", st.method);
    Ok(p)
}

fn noninteracting(sys: &FastSlowSystem, set: Option<&[usize]>) -> Result<Parameterization, PathFailure> {
    let crn = sys.crn.as_ref().ok_or_else(|| fail("noninteracting", "model is not a reaction network"))?;
    let set = match set {
        Some(idx) => check_noninteracting(&crn.split, idx).map_err(|e| fail("noninteracting", e))?,
        None => find_noninteracting_sets(&crn.split).into_iter().next().ok_or_else(|| fail("noninteracting", "no non-interacting set"))?,
    };
    rational_parameterization(&set, &crn.split).map_err(|e| fail("noninteracting", format!("{e:?}")))
}

fn user(sys: &FastSlowSystem) -> Result<Parameterization, PathFailure> {
    let phi = sys.user_phi.clone().ok_or_else(|| fail("user", "model gives no @phi"))?;
    if phi.len() != sys.n() {
        return Err(fail("user", format!("@phi has {} components, expected {}", phi.len(), sys.n())));
    }
    Ok(Parameterization::user(phi, sys.param_names.clone()))
}

/// Builds a parameterization; on success also returns the paths tried before it.
pub fn build_parameterization(
    sys: &FastSlowSystem,
    choice: &ParamChoice,
    hint: Option<&XStar>,
) -> Result<(Parameterization, Vec<PathFailure>), Vec<PathFailure>> {
    match choice {
        ParamChoice::ComplexBalanced => complex_balanced(sys, hint).map(|p| (p, vec![])).map_err(|e| vec![e]),
        ParamChoice::NonInteracting(set) => noninteracting(sys, set.as_deref()).map(|p| (p, vec![])).map_err(|e| vec![e]),
        ParamChoice::User => user(sys).map(|p| (p, vec![])).map_err(|e| vec![e]),
        ParamChoice::Auto => {
            let mut failures = Vec::new();
            match &sys.crn {
                Some(c) if c.weakly_reversible_fast && c.deficiency_fast == 0 => match complex_balanced(sys, hint) {
                    Ok(p) => return Ok((p, failures)),
                    Err(e) => failures.push(e),
                },
                Some(_) => failures.push(fail("complexbalanced", "fast subnetwork is not weakly reversible with deficiency zero")),
                None => failures.push(fail("complexbalanced", "model is not a reaction network")),
            }
            match noninteracting(sys, None) {
                Ok(p) => return Ok((p, failures)),
                Err(e) => failures.push(e),
            }
            match user(sys) {
                Ok(p) => Ok((p, failures)),
                Err(e) => {
                    failures.push(e);
                    Err(failures)
                }
            }
        }
    }
}

/// `L` for the via-`L` path: the model's `@L`, else `L_f` for networks.
pub fn l_matrix(sys: &FastSlowSystem) -> Option<PolyMatrix> {
    if let Some(l) = &sys.user_l {
        return Some(l.clone());
    }
    let n = sys.n();
    sys.crn.as_ref().map(|c| c.l_f.map(MultiPoly::zero(n), |v| MultiPoly::constant(n, Rational::from_integer((*v).into()))))
}

/// Reduced system for `phi` by the preferred path: the closed form for
/// monomial maps with `B = L_f`, else via `L`, else the general solve.
pub fn reduce_with(sys: &FastSlowSystem, phi: &Parameterization) -> Result<ReducedSystem, ReduceError> {
    if phi.kind == ParamKind::Monomial {
        if let Some(c) = &sys.crn {
            if phi.monomial.as_ref().is_some_and(|m| m.b == c.l_f.to_q()) {
                return complex_balanced_reduced(sys, phi);
            }
        }
    }
    if !phi.is_exact() {
        let l = sys.crn.as_ref().map(|c| c.l_f.to_q()).ok_or(ReduceError::NotExact)?;
        return Ok(reduced_system_numeric(sys, phi, &l));
    }
    if let Some(l) = l_matrix(sys) {
        let r = compute_r_via_l(phi, &l)?;
        return reduced_system(sys, phi, r, ReducePath::ViaL);
    }
    let dec = super::decompose_p_mu(sys)?;
    let r = compute_r_general(phi, &dec)?;
    reduced_system(sys, phi, r, ReducePath::General)
}

use num_traits::Signed;
use serde::Serialize;
use tfr_exact::{rf_solve_linear, Matrix, MultiPoly, RatFun};

use super::{default_param_names, ManifoldError, ParamKind, Parameterization};
use crate::crn::{NetworkGraph, SlowFastSplit};
use crate::model::Complex;

/// Species set whose fast steady-state equations are linear in its members
/// and uniquely solvable for them.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NonInteractingSet {
    pub indices: Vec<usize>,
    /// Largest combined coefficient of set species on one side of a fast reaction.
    pub max_side_sum: u32,
    pub row_rank: usize,
}

fn side_sum(c: &Complex, set: &[usize]) -> u32 {
    set.iter().map(|&i| c.coefficient(i)).sum()
}

/// Checks conditions (i)-(iii) for `set`; the error names the first failure.
pub fn check_noninteracting(split: &SlowFastSplit, set: &[usize]) -> Result<NonInteractingSet, String> {
    let fast = &split.fast;
    let mut max_side_sum = 0;
    for (a, b) in fast.reactants.iter().zip(&fast.products) {
        let m = side_sum(a, set).max(side_sum(b, set));
        if m > 1 {
            return Err("set species interact in a fast reaction".into());
        }
        max_side_sum = max_side_sum.max(m);
    }
    let row_rank = fast.stoich.select_rows(set).to_q().rank();
    if row_rank != split.r {
        return Err(format!("rows of N_f have rank {row_rank}, expected {}", split.r));
    }
    let keep = |i: usize| set.contains(&i);
    let restricted: Vec<(Complex, Complex)> = fast
        .reactants
        .iter()
        .zip(&fast.products)
        .map(|(a, b)| (a.restrict(keep), b.restrict(keep)))
        .filter(|(a, b)| a != b)
        .collect();
    let g = NetworkGraph::build(restricted.iter().map(|(a, b)| (a, b)), &[]);
    let zero = g.node_index(&Complex::zero());
    for &i in set {
        let reaches = match (g.node_index(&Complex::single(i)), zero) {
            (Some(a), Some(z)) => g.reaches(a, z),
            _ => false,
        };
        if !reaches {
            return Err(format!("species {} has no path to 0 in the induced network", split.species[i]));
        }
    }
    Ok(NonInteractingSet { indices: set.to_vec(), max_side_sum, row_rank })
}

fn combinations(n: usize, k: usize, mut visit: impl FnMut(&[usize])) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        visit(&idx);
        let Some(pos) = (0..k).rev().find(|&i| idx[i] < n - k + i) else { return };
        idx[pos] += 1;
        for j in pos + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// All qualifying `r`-subsets in lexicographic order.
pub fn find_noninteracting_sets(split: &SlowFastSplit) -> Vec<NonInteractingSet> {
    let mut out = Vec::new();
    if split.r == 0 {
        return out;
    }
    combinations(split.n(), split.r, |set| {
        if let Ok(c) = check_noninteracting(split, set) {
            out.push(c);
        }
    });
    out
}

fn all_same_sign(p: &MultiPoly) -> Option<bool> {
    let mut it = p.coefficients();
    let first = it.next()?.is_positive();
    it.all(|c| c.is_positive() == first).then_some(first)
}

/// Solves `h0_I = 0` for the set species; the others become `v1..vs` in index order.
pub fn rational_parameterization(set: &NonInteractingSet, split: &SlowFastSplit) -> Result<Parameterization, ManifoldError> {
    let n = split.n();
    let idx = &set.indices;
    let free: Vec<usize> = (0..n).filter(|i| !idx.contains(i)).collect();
    let s = free.len();
    let r = idx.len();
    let mut to_v = vec![0usize; n];
    for (j, &f) in free.iter().enumerate() {
        to_v[f] = j;
    }
    let h0 = split.h0();
    let zero_set: Vec<MultiPoly> =
        (0..n).map(|i| if idx.contains(&i) { MultiPoly::zero(n) } else { MultiPoly::var(n, i) }).collect();
    let lower = |p: &MultiPoly| RatFun::from_poly(p.remap(s, &to_v));
    let mut a = Matrix::zeros(r, r, RatFun::zero(s));
    let mut b = Matrix::zeros(r, 1, RatFun::zero(s));
    for (row, &i) in idx.iter().enumerate() {
        for (col, &k) in idx.iter().enumerate() {
            let c = h0[i].partial(k);
            if idx.iter().any(|&m| c.degree_in(m) > 0) {
                return Err(ManifoldError::Invalid("equations are not linear in the set species".into()));
            }
            a[(row, col)] = lower(&c);
        }
        b[(row, 0)] = -lower(&h0[i].compose(&zero_set));
    }
    let x = rf_solve_linear(&a, &b).map_err(|_| ManifoldError::SingularLinearSystem)?;
    let mut phi = Vec::with_capacity(n);
    let mut warnings = Vec::new();
    for i in 0..n {
        match idx.iter().position(|&k| k == i) {
            Some(row) => {
                let f = x[(row, 0)].clone();
                let ok = match (all_same_sign(f.numer()), all_same_sign(f.denom())) {
                    (Some(a), Some(b)) => a == b,
                    _ => false,
                };
                if !ok {
                    warnings.push(format!("component {} does not have all coefficients positive", split.species[i]));
                }
                phi.push(f);
            }
            None => phi.push(RatFun::var(s, to_v[i])),
        }
    }
    let names = default_param_names(s);
    let note = format!(
        "v > 0; v = ({})",
        free.iter().map(|&f| split.species[f].clone()).collect::<Vec<_>>().join(", ")
    );
    let mut p = Parameterization::from_parts(ParamKind::Rational, names, Some(phi), None, note);
    p.eliminated = Some(idx.clone());
    p.warnings = warnings;
    Ok(p)
}

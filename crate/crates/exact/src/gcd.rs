//! Multivariate polynomial GCD over `Q`.
//!
//! Recursive primitive polynomial remainder sequences: the polynomial is
//! viewed as univariate in one variable with coefficients in the remaining
//! ones, contents are split off recursively and the primitive parts are
//! reduced by pseudo-division. The integer heuristic in `heugcd` is tried
//! first and settles almost every case.

use crate::heugcd::heu_gcd;
use crate::monomial::Monomial;
use crate::poly::MultiPoly;

/// Greatest common divisor, normalized to coprime integer coefficients and a
/// positive leading coefficient. `gcd(0, 0) = 0`.
pub fn poly_gcd(a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
    let n = a.nvars();
    if a.is_zero() {
        return b.primitive();
    }
    if b.is_zero() {
        return a.primitive();
    }
    if a.is_constant() || b.is_constant() {
        return MultiPoly::one(n);
    }
    let ma = a.monomial_content();
    let mb = b.monomial_content();
    let m = ma.gcd(&mb);
    let a1 = a.div_monomial(&ma).expect("monomial content divides");
    let b1 = b.div_monomial(&mb).expect("monomial content divides");
    let g = if a1.is_constant() || b1.is_constant() {
        MultiPoly::one(n)
    } else {
        heu_gcd(&a1, &b1).unwrap_or_else(|| gcd_no_monomial(&a1, &b1))
    };
    let mono = MultiPoly::term(m, num_traits::One::one());
    (&g * &mono).primitive()
}

fn gcd_no_monomial(a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
    let n = a.nvars();
    if a.is_constant() || b.is_constant() {
        return MultiPoly::one(n);
    }
    let pa = a.primitive();
    let pb = b.primitive();
    if pa == pb {
        return pa;
    }
    // Cheap trial division with the smaller operand.
    let (small, big) = if pa.num_terms() <= pb.num_terms() { (&pa, &pb) } else { (&pb, &pa) };
    if small.total_degree() <= big.total_degree() && big.div_exact(small).is_some() {
        return small.clone();
    }

    let va = pa.support_vars();
    let vb = pb.support_vars();
    if let Some(&v) = va.iter().find(|v| !vb.contains(v)) {
        return gcd_with_coefficients(&pb, &pa, v);
    }
    if let Some(&v) = vb.iter().find(|v| !va.contains(v)) {
        return gcd_with_coefficients(&pa, &pb, v);
    }

    // Main variable: the one of smallest combined degree keeps the PRS short.
    let x = *va
        .iter()
        .min_by_key(|&&v| (pa.degree_in(v).max(pb.degree_in(v)), v))
        .expect("non-constant polynomial has a variable");
    let ca = content_in(&pa, x);
    let cb = content_in(&pb, x);
    let ppa = pa.div_exact(&ca).expect("content divides");
    let ppb = pb.div_exact(&cb).expect("content divides");
    let c = poly_gcd(&ca, &cb);
    let g = prs_gcd(ppa, ppb, x);
    (&c * &g).primitive()
}

/// `gcd(start, coefficients of p with respect to x_var)`: used when `x_var`
/// occurs in `p` but not in `start`.
fn gcd_with_coefficients(start: &MultiPoly, p: &MultiPoly, var: usize) -> MultiPoly {
    let mut coeffs: Vec<MultiPoly> = p.coeffs_in(var).into_iter().filter(|c| !c.is_zero()).collect();
    coeffs.sort_by_key(|c| c.num_terms());
    let mut g = start.clone();
    for c in coeffs {
        g = poly_gcd(&g, &c);
        if g.is_constant() {
            return MultiPoly::one(start.nvars());
        }
    }
    g
}

/// GCD of the coefficients of `p` seen as a polynomial in `x_var`.
pub(crate) fn content_in(p: &MultiPoly, var: usize) -> MultiPoly {
    let mut coeffs: Vec<MultiPoly> = p.coeffs_in(var).into_iter().filter(|c| !c.is_zero()).collect();
    coeffs.sort_by_key(|c| c.num_terms());
    let mut it = coeffs.into_iter();
    let mut g = match it.next() {
        Some(c) => c.primitive(),
        None => return MultiPoly::one(p.nvars()),
    };
    for c in it {
        if g.is_constant() {
            break;
        }
        g = poly_gcd(&g, &c);
    }
    if g.is_constant() {
        MultiPoly::one(p.nvars())
    } else {
        g
    }
}

fn primitive_in(p: &MultiPoly, var: usize) -> MultiPoly {
    let c = content_in(p, var);
    p.div_exact(&c).expect("content divides").primitive()
}

/// Pseudo-remainder of `a` by `b` in `x_var`.
fn prem(a: &MultiPoly, b: &MultiPoly, var: usize) -> MultiPoly {
    let n = a.nvars();
    let db = b.degree_in(var);
    let bc = b.coeffs_in(var);
    let lb = bc[db as usize].clone();
    let mut r = a.clone();
    while !r.is_zero() && r.degree_in(var) >= db {
        let dr = r.degree_in(var);
        let lr = r.coeffs_in(var).swap_remove(dr as usize);
        let shift = Monomial::var(n, var);
        let mut xpow = MultiPoly::one(n);
        for _ in 0..(dr - db) {
            xpow = xpow.mul_monomial(&shift);
        }
        r = &(&lb * &r) - &(&(&lr * &xpow) * b);
    }
    r
}

/// GCD of two polynomials primitive with respect to `x_var`.
fn prs_gcd(a: MultiPoly, b: MultiPoly, var: usize) -> MultiPoly {
    let n = a.nvars();
    let (mut a, mut b) = if a.degree_in(var) >= b.degree_in(var) { (a, b) } else { (b, a) };
    loop {
        if b.degree_in(var) == 0 {
            return MultiPoly::one(n);
        }
        let r = prem(&a, &b, var);
        if r.is_zero() {
            return b.primitive();
        }
        a = b;
        b = primitive_in(&r, var);
    }
}

//! Heuristic polynomial GCD over `Z` (GCDHEU).
//!
//! Each variable in turn is replaced by a large integer `xi`; the GCD of the
//! images is computed recursively and lifted back by symmetric `xi`-adic
//! expansion. A candidate is accepted only after trial division, so a wrong
//! guess costs time but never correctness. After a few failed evaluation
//! points the caller falls back to remainder sequences.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::monomial::Monomial;
use crate::poly::MultiPoly;
use crate::rational::Rational;

#[derive(Clone, PartialEq, Debug)]
pub(crate) struct IntPoly {
    nvars: usize,
    terms: BTreeMap<Monomial, BigInt>,
}

impl IntPoly {
    fn zero(nvars: usize) -> Self {
        IntPoly { nvars, terms: BTreeMap::new() }
    }

    fn constant(nvars: usize, c: BigInt) -> Self {
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(nvars), c);
        }
        p
    }

    /// Scales a rational polynomial to coprime integer coefficients.
    pub(crate) fn from_poly(p: &MultiPoly) -> Self {
        let c = p.content();
        let c = if c.is_negative() { -c } else { c };
        let inv = c.recip();
        let terms = p
            .terms()
            .map(|(m, v)| {
                let q = v * &inv;
                debug_assert!(q.is_integer());
                (m.clone(), q.to_integer())
            })
            .collect();
        IntPoly { nvars: p.nvars(), terms }
    }

    pub(crate) fn to_poly(&self) -> MultiPoly {
        MultiPoly::from_terms(self.nvars, self.terms.iter().map(|(m, c)| (m.clone(), Rational::from_integer(c.clone()))))
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, m: Monomial, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    fn leading(&self) -> Option<(&Monomial, &BigInt)> {
        self.terms.iter().next_back()
    }

    fn content(&self) -> BigInt {
        self.terms.values().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    fn div_int(&self, d: &BigInt) -> Self {
        IntPoly { nvars: self.nvars, terms: self.terms.iter().map(|(m, c)| (m.clone(), c / d)).collect() }
    }

    fn scale(&self, d: &BigInt) -> Self {
        IntPoly { nvars: self.nvars, terms: self.terms.iter().map(|(m, c)| (m.clone(), c * d)).collect() }
    }

    fn max_norm(&self) -> BigInt {
        self.terms.values().map(|c| c.abs()).max().unwrap_or_default()
    }

    fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|m| m.exponent(var)).max().unwrap_or(0)
    }

    /// Content removed and sign fixed so the leading coefficient is positive.
    fn primitive(&self) -> Self {
        let c = self.content();
        let lead_neg = self.leading().is_some_and(|(_, c)| c.is_negative());
        let c = if lead_neg { -c } else { c };
        if c.is_zero() || c.is_one() {
            return self.clone();
        }
        self.div_int(&c)
    }

    fn eval_var(&self, var: usize, xi: &BigInt) -> Self {
        let mut pows = vec![BigInt::one()];
        let mut out = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.exponent(var) as usize;
            while pows.len() <= e {
                let next = pows.last().unwrap() * xi;
                pows.push(next);
            }
            out.add_term(m.with_exponent(var, 0), c * &pows[e]);
        }
        out
    }

    /// Exact quotient over `Z`, or `None`.
    fn div_exact(&self, d: &Self) -> Option<Self> {
        let (dm, dc) = d.leading()?;
        let (dm, dc) = (dm.clone(), dc.clone());
        for v in 0..self.nvars {
            if d.degree_in(v) > self.degree_in(v) {
                return None;
            }
        }
        let mut p = self.clone();
        let mut q = Self::zero(self.nvars);
        while let Some((pm, pc)) = p.leading().map(|(m, c)| (m.clone(), c.clone())) {
            let shift = pm.div(&dm)?;
            let (c, r) = pc.div_rem(&dc);
            if !r.is_zero() {
                return None;
            }
            for (m, v) in &d.terms {
                p.add_term(m.mul(&shift), -(v * &c));
            }
            q.add_term(shift, c);
        }
        Some(q)
    }
}

/// Symmetric `xi`-adic lifting of an image polynomial back into `var`.
fn interpolate(h: &IntPoly, xi: &BigInt, var: usize) -> IntPoly {
    let half = xi / 2;
    let mut h = h.clone();
    let mut out = IntPoly::zero(h.nvars);
    let mut e = 0u32;
    while !h.is_zero() {
        let mut digit = IntPoly::zero(h.nvars);
        for (m, c) in &h.terms {
            let mut r = c.mod_floor(xi);
            if r > half {
                r -= xi;
            }
            digit.add_term(m.clone(), r);
        }
        for (m, c) in &digit.terms {
            out.add_term(m.with_exponent(var, e), c.clone());
            h.add_term(m.clone(), -c.clone());
        }
        h = h.div_int(xi);
        e += 1;
        if e > 10_000 {
            break;
        }
    }
    if out.leading().is_some_and(|(_, c)| c.is_negative()) {
        out = out.scale(&BigInt::from(-1));
    }
    out
}

/// `(gcd, f / gcd, g / gcd)` over `Z[vars]`, or `None` if the heuristic gives up.
fn heu(f: &IntPoly, g: &IntPoly, vars: &[usize]) -> Option<(IntPoly, IntPoly, IntPoly)> {
    let n = f.nvars;
    if f.is_zero() || g.is_zero() {
        return None;
    }
    let c = f.content().gcd(&g.content());
    let f = f.div_int(&c);
    let g = g.div_int(&c);
    let Some((&main, rest)) = vars.split_first() else {
        // Both are integers once every variable is evaluated.
        let a = f.terms.values().next().cloned().unwrap_or_default();
        let b = g.terms.values().next().cloned().unwrap_or_default();
        let h = a.gcd(&b);
        return Some((IntPoly::constant(n, &h * &c), IntPoly::constant(n, &a / &h), IntPoly::constant(n, &b / &h)));
    };
    let fnorm = f.max_norm();
    let gnorm = g.max_norm();
    let b: BigInt = BigInt::from(2) * fnorm.clone().min(gnorm.clone()) + 29u32;
    let lf = f.leading().map(|(_, c)| c.abs()).unwrap();
    let lg = g.leading().map(|(_, c)| c.abs()).unwrap();
    let mut xi = b.clone().min(BigInt::from(99) * b.sqrt()).max(BigInt::from(2) * (&fnorm / lf).min(&gnorm / lg) + 2u32);
    for _ in 0..6 {
        let ff = f.eval_var(main, &xi);
        let gg = g.eval_var(main, &xi);
        if !ff.is_zero() && !gg.is_zero() {
            let (h, cff, cfg) = heu(&ff, &gg, rest)?;
            let h = interpolate(&h, &xi, main).primitive();
            if let (Some(a), Some(b)) = (f.div_exact(&h), g.div_exact(&h)) {
                return Some((h.scale(&c), a, b));
            }
            let cff = interpolate(&cff, &xi, main);
            if let Some(h) = f.div_exact(&cff) {
                if let Some(b) = g.div_exact(&h) {
                    return Some((h.scale(&c), cff, b));
                }
            }
            let cfg = interpolate(&cfg, &xi, main);
            if let Some(h) = g.div_exact(&cfg) {
                if let Some(a) = f.div_exact(&h) {
                    return Some((h.scale(&c), a, cfg));
                }
            }
        }
        xi = BigInt::from(73794) * &xi * xi.sqrt().sqrt() / BigInt::from(27011);
    }
    None
}

/// Primitive GCD of two nonzero polynomials with `Q` coefficients, if the heuristic succeeds.
pub(crate) fn heu_gcd(a: &MultiPoly, b: &MultiPoly) -> Option<MultiPoly> {
    let fa = IntPoly::from_poly(a);
    let fb = IntPoly::from_poly(b);
    let mut vars = a.support_vars();
    for v in b.support_vars() {
        if !vars.contains(&v) {
            vars.push(v);
        }
    }
    vars.sort_unstable();
    let (h, _, _) = heu(&fa, &fb, &vars)?;
    Some(h.primitive().to_poly())
}

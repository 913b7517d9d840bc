use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use crate::monomial::Monomial;
use crate::rational::{content, rational_to_f64, Rational};

/// Sparse multivariate polynomial over `Q` in a fixed number of variables.
///
/// Terms are kept in a `BTreeMap` keyed by grlex monomial; zero coefficients
/// are never stored, so structural equality is polynomial equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MultiPoly {
    nvars: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl MultiPoly {
    pub fn zero(nvars: usize) -> Self {
        MultiPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Rational::one())
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(nvars), c);
        }
        p
    }

    pub fn from_i64(nvars: usize, c: i64) -> Self {
        Self::constant(nvars, Rational::from_integer(c.into()))
    }

    /// The coordinate function `x_i`.
    pub fn var(nvars: usize, i: usize) -> Self {
        assert!(i < nvars, "variable index {i} out of range for {nvars} variables");
        Self::term(Monomial::var(nvars, i), Rational::one())
    }

    pub fn term(m: Monomial, c: Rational) -> Self {
        let mut p = Self::zero(m.nvars());
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut p = Self::zero(nvars);
        for (m, c) in terms {
            debug_assert_eq!(m.nvars(), nvars);
            p.add_term(m, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.constant_value().is_some_and(|c| c.is_one())
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms.keys().next().unwrap().is_one())
    }

    /// `Some(c)` when the polynomial is the constant `c` (including zero).
    pub fn constant_value(&self) -> Option<Rational> {
        if self.terms.is_empty() {
            return Some(Rational::zero());
        }
        if self.is_constant() {
            return self.terms.values().next().cloned();
        }
        None
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in descending grlex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter().rev()
    }

    pub fn coefficients(&self) -> impl Iterator<Item = &Rational> {
        self.terms.values()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coefficient(&self) -> Rational {
        self.leading_term().map(|(_, c)| c.clone()).unwrap_or_else(Rational::zero)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|m| m.exponent(var)).max().unwrap_or(0)
    }

    /// Variables that occur with a positive exponent.
    pub fn support_vars(&self) -> Vec<usize> {
        (0..self.nvars).filter(|&i| self.terms.keys().any(|m| m.exponent(i) > 0)).collect()
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: Rational) {
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

    /// `self -= c * m * d`, in place.
    fn sub_shifted(&mut self, d: &MultiPoly, m: &Monomial, c: &Rational) {
        for (dm, dc) in &d.terms {
            self.add_term(dm.mul(m), -(dc * c));
        }
    }

    pub fn scale(&self, c: &Rational) -> MultiPoly {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        MultiPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> MultiPoly {
        MultiPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(k, v)| (k.mul(m), v.clone())).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> MultiPoly {
        let mut result = Self::one(self.nvars);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    pub fn eval(&self, point: &[Rational]) -> Rational {
        assert_eq!(point.len(), self.nvars, "evaluation point has wrong dimension");
        let mut total = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(m.exponents()) {
                if e > 0 {
                    t *= num_traits::pow(x.clone(), e as usize);
                }
            }
            total += t;
        }
        total
    }

    pub fn eval_f64(&self, point: &[f64]) -> f64 {
        debug_assert_eq!(point.len(), self.nvars);
        self.terms
            .iter()
            .map(|(m, c)| {
                let mut t = rational_to_f64(c);
                for (x, &e) in point.iter().zip(m.exponents()) {
                    if e > 0 {
                        t *= x.powi(e as i32);
                    }
                }
                t
            })
            .sum()
    }

    /// Partial derivative with respect to `x_var`.
    pub fn partial(&self, var: usize) -> MultiPoly {
        let mut out = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.exponent(var);
            if e > 0 {
                out.add_term(m.with_exponent(var, e - 1), c * Rational::from_integer(e.into()));
            }
        }
        out
    }

    /// Substitutes polynomials for every variable.
    pub fn compose(&self, values: &[MultiPoly]) -> MultiPoly {
        assert_eq!(values.len(), self.nvars);
        let target = values.first().map(|p| p.nvars).unwrap_or(0);
        let mut out = Self::zero(target);
        let mut powers: Vec<Vec<MultiPoly>> = values.iter().map(|v| vec![Self::one(v.nvars), v.clone()]).collect();
        for (m, c) in &self.terms {
            let mut t = Self::constant(target, c.clone());
            for (i, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e as usize {
                    let next = &powers[i][powers[i].len() - 1] * &values[i];
                    powers[i].push(next);
                }
                t = &t * &powers[i][e as usize];
            }
            out = &out + &t;
        }
        out
    }

    /// Re-embeds into a ring with `nvars` variables, mapping variable `i` to `map[i]`.
    pub fn remap(&self, nvars: usize, map: &[usize]) -> MultiPoly {
        let mut out = Self::zero(nvars);
        for (m, c) in &self.terms {
            let mut e = vec![0u32; nvars];
            for (i, &k) in m.exponents().iter().enumerate() {
                e[map[i]] += k;
            }
            out.add_term(Monomial::from_exponents(&e), c.clone());
        }
        out
    }

    /// Coefficients with respect to `x_var`: entry `k` multiplies `x_var^k`.
    pub fn coeffs_in(&self, var: usize) -> Vec<MultiPoly> {
        let deg = self.degree_in(var) as usize;
        let mut out = vec![Self::zero(self.nvars); deg + 1];
        for (m, c) in &self.terms {
            let e = m.exponent(var) as usize;
            out[e].add_term(m.with_exponent(var, 0), c.clone());
        }
        out
    }

    pub fn from_coeffs_in(var: usize, nvars: usize, coeffs: &[MultiPoly]) -> MultiPoly {
        let mut out = Self::zero(nvars);
        for (k, c) in coeffs.iter().enumerate() {
            for (m, v) in &c.terms {
                out.add_term(m.with_exponent(var, m.exponent(var) + k as u32), v.clone());
            }
        }
        out
    }

    /// Largest monomial dividing every term.
    pub fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.keys();
        match it.next() {
            None => Monomial::one(self.nvars),
            Some(first) => it.fold(first.clone(), |acc, m| acc.gcd(m)),
        }
    }

    pub fn div_monomial(&self, m: &Monomial) -> Option<MultiPoly> {
        let mut out = Self::zero(self.nvars);
        for (k, v) in &self.terms {
            out.terms.insert(k.div(m)?, v.clone());
        }
        Some(out)
    }

    /// Rational content carrying the sign of the leading coefficient, so that
    /// `self / content()` has coprime integer coefficients and positive leading coefficient.
    pub fn content(&self) -> Rational {
        let lc = self.leading_term().map(|(_, c)| c.clone());
        content(self.terms.values(), lc.as_ref())
    }

    /// `self / content()`; zero stays zero.
    pub fn primitive(&self) -> MultiPoly {
        if self.is_zero() {
            return self.clone();
        }
        let c = self.content();
        if c.is_one() {
            return self.clone();
        }
        self.scale(&c.recip())
    }

    /// Multivariate division by a single divisor in grlex order.
    pub fn div_rem(&self, d: &MultiPoly) -> (MultiPoly, MultiPoly) {
        assert!(!d.is_zero(), "division by the zero polynomial");
        let (dm, dc) = d.leading_term().map(|(m, c)| (m.clone(), c.clone())).unwrap();
        let mut p = self.clone();
        let mut q = Self::zero(self.nvars);
        let mut r = Self::zero(self.nvars);
        while let Some((pm, pc)) = p.leading_term().map(|(m, c)| (m.clone(), c.clone())) {
            match pm.div(&dm) {
                Some(shift) => {
                    let c = pc / &dc;
                    p.sub_shifted(d, &shift, &c);
                    q.add_term(shift, c);
                }
                None => {
                    p.terms.remove(&pm);
                    r.add_term(pm, pc);
                }
            }
        }
        (q, r)
    }

    /// `Some(self / d)` when `d` divides `self` exactly.
    pub fn div_exact(&self, d: &MultiPoly) -> Option<MultiPoly> {
        assert!(!d.is_zero(), "division by the zero polynomial");
        if let Some(c) = d.constant_value() {
            return Some(self.scale(&c.recip()));
        }
        let (dm, dc) = d.leading_term().map(|(m, c)| (m.clone(), c.clone())).unwrap();
        let mut p = self.clone();
        let mut q = Self::zero(self.nvars);
        while let Some((pm, pc)) = p.leading_term().map(|(m, c)| (m.clone(), c.clone())) {
            // In an exact quotient the leading monomial of p is always divisible.
            let shift = pm.div(&dm)?;
            let c = pc / &dc;
            p.sub_shifted(d, &shift, &c);
            q.add_term(shift, c);
        }
        Some(q)
    }

    /// True when the leading coefficient is negative.
    pub fn leading_is_negative(&self) -> bool {
        self.leading_term().is_some_and(|(_, c)| c.is_negative())
    }

    /// Gradient as a vector of partial derivatives.
    pub fn gradient(&self) -> Vec<MultiPoly> {
        (0..self.nvars).map(|i| self.partial(i)).collect()
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (1..=self.nvars).map(|i| format!("x{i}")).collect();
        f.write_str(&crate::Printer::new(&names).poly(self))
    }
}

impl<'a> Add<&'a MultiPoly> for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &'a MultiPoly) -> MultiPoly {
        debug_assert_eq!(self.nvars, rhs.nvars);
        let (mut big, small) = if self.terms.len() >= rhs.terms.len() { (self.clone(), rhs) } else { (rhs.clone(), self) };
        for (m, c) in &small.terms {
            big.add_term(m.clone(), c.clone());
        }
        big
    }
}

impl<'a> Sub<&'a MultiPoly> for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &'a MultiPoly) -> MultiPoly {
        debug_assert_eq!(self.nvars, rhs.nvars);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl<'a> Mul<&'a MultiPoly> for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &'a MultiPoly) -> MultiPoly {
        debug_assert_eq!(self.nvars, rhs.nvars);
        let mut out = MultiPoly::zero(self.nvars);
        if self.is_zero() || rhs.is_zero() {
            return out;
        }
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        MultiPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr<MultiPoly> for MultiPoly {
            type Output = MultiPoly;
            fn $method(self, rhs: MultiPoly) -> MultiPoly {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $tr<&'a MultiPoly> for MultiPoly {
            type Output = MultiPoly;
            fn $method(self, rhs: &'a MultiPoly) -> MultiPoly {
                (&self).$method(rhs)
            }
        }
        impl $tr<MultiPoly> for &MultiPoly {
            type Output = MultiPoly;
            fn $method(self, rhs: MultiPoly) -> MultiPoly {
                self.$method(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn x(i: usize) -> MultiPoly {
        MultiPoly::var(3, i)
    }

    #[test]
    fn eval_examples() {
        let p = &(&x(0) * &x(1)) - &x(2);
        let ones = vec![int(1), int(1), int(1)];
        assert!(p.eval(&ones).is_zero());
        let sq = MultiPoly::var(1, 0).pow(2);
        assert_eq!(sq.eval(&[Rational::new(3.into(), 2.into())]), Rational::new(9.into(), 4.into()));
        assert!(MultiPoly::zero(3).eval(&ones).is_zero());
    }

    #[test]
    fn exact_division_and_remainder() {
        let a = &x(0) + &x(1);
        let b = &x(0) - &x(2);
        let prod = &a * &b;
        assert_eq!(prod.div_exact(&a).unwrap(), b);
        assert!((&prod + &MultiPoly::one(3)).div_exact(&a).is_none());
        let (q, r) = (&prod + &x(2)).div_rem(&a);
        assert_eq!(&(&q * &a) + &r, &prod + &x(2));
    }

    #[test]
    fn coefficient_decomposition_round_trip() {
        let p = &(&x(0).pow(2) * &x(1)) + &(&x(0) * &x(2)) - MultiPoly::from_i64(3, 7);
        let cs = p.coeffs_in(0);
        assert_eq!(cs.len(), 3);
        assert_eq!(MultiPoly::from_coeffs_in(0, 3, &cs), p);
    }

    #[test]
    fn partial_derivative() {
        let p = &x(0).pow(3) * &x(1);
        assert_eq!(p.partial(0), (&x(0).pow(2) * &x(1)).scale(&int(3)));
        assert!(p.partial(2).is_zero());
    }

    #[test]
    fn content_makes_primitive_integer() {
        let p = (&x(0).scale(&Rational::new(2.into(), 3.into())) - &x(1).scale(&Rational::new(4.into(), 9.into()))).scale(&int(-1));
        let prim = p.primitive();
        assert_eq!(prim, &x(0).scale(&int(3)) - &x(1).scale(&int(2)));
    }
}

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::gcd::poly_gcd;
use crate::poly::MultiPoly;
use crate::rational::Rational;
use crate::ExactError;

/// Element of `Q(x_1, ..., x_n)` in canonical form.
///
/// Invariant: `gcd(num, den) = 1`, `den` has coprime integer coefficients and
/// a positive grlex-leading coefficient, and zero is stored as `0/1`. Two equal
/// rational functions therefore have identical representations.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFun {
    num: MultiPoly,
    den: MultiPoly,
}

impl RatFun {
    pub fn new(num: MultiPoly, den: MultiPoly) -> Result<Self, ExactError> {
        if den.is_zero() {
            return Err(ExactError::DivisionByZero);
        }
        let g = poly_gcd(&num, &den);
        if g.is_one() {
            Ok(Self::normalized(num, den))
        } else {
            Ok(Self::normalized(
                num.div_exact(&g).expect("gcd divides numerator"),
                den.div_exact(&g).expect("gcd divides denominator"),
            ))
        }
    }

    /// Builds from a numerator/denominator pair already known to be coprime.
    fn normalized(num: MultiPoly, den: MultiPoly) -> Self {
        let n = num.nvars();
        if num.is_zero() {
            return RatFun { num, den: MultiPoly::one(n) };
        }
        let c = den.content();
        if c.is_one() {
            return RatFun { num, den };
        }
        let inv = c.recip();
        RatFun { num: num.scale(&inv), den: den.scale(&inv) }
    }

    pub fn from_poly(p: MultiPoly) -> Self {
        let n = p.nvars();
        RatFun { num: p, den: MultiPoly::one(n) }
    }

    pub fn zero(nvars: usize) -> Self {
        Self::from_poly(MultiPoly::zero(nvars))
    }

    pub fn one(nvars: usize) -> Self {
        Self::from_poly(MultiPoly::one(nvars))
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        Self::from_poly(MultiPoly::constant(nvars, c))
    }

    pub fn from_i64(nvars: usize, c: i64) -> Self {
        Self::from_poly(MultiPoly::from_i64(nvars, c))
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        Self::from_poly(MultiPoly::var(nvars, i))
    }

    pub fn numer(&self) -> &MultiPoly {
        &self.num
    }

    pub fn denom(&self) -> &MultiPoly {
        &self.den
    }

    pub fn nvars(&self) -> usize {
        self.num.nvars()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    pub fn constant_value(&self) -> Option<Rational> {
        if self.den.is_one() {
            self.num.constant_value()
        } else {
            None
        }
    }

    pub fn recip(&self) -> Result<RatFun, ExactError> {
        if self.is_zero() {
            return Err(ExactError::DivisionByZero);
        }
        Ok(Self::normalized(self.den.clone(), self.num.clone()))
    }

    pub fn scale(&self, c: &Rational) -> RatFun {
        if c.is_zero() {
            return Self::zero(self.nvars());
        }
        RatFun { num: self.num.scale(c), den: self.den.clone() }
    }

    pub fn pow(&self, e: i32) -> Result<RatFun, ExactError> {
        if e >= 0 {
            Ok(RatFun { num: self.num.pow(e as u32), den: self.den.pow(e as u32) }.renormalize())
        } else {
            self.recip()?.pow(-e)
        }
    }

    // Powers of a canonical pair stay coprime; only the content needs fixing.
    fn renormalize(self) -> RatFun {
        Self::normalized(self.num, self.den)
    }

    /// Exact value; `None` where the denominator vanishes.
    pub fn eval(&self, point: &[Rational]) -> Option<Rational> {
        let d = self.den.eval(point);
        if d.is_zero() {
            return None;
        }
        Some(self.num.eval(point) / d)
    }

    pub fn eval_f64(&self, point: &[f64]) -> f64 {
        self.num.eval_f64(point) / self.den.eval_f64(point)
    }

    pub fn partial(&self, var: usize) -> RatFun {
        let dn = self.num.partial(var);
        if self.den.is_one() {
            return Self::from_poly(dn);
        }
        let dd = self.den.partial(var);
        let num = &(&dn * &self.den) - &(&self.num * &dd);
        Self::new(num, self.den.pow(2)).expect("nonzero denominator")
    }

    pub fn gradient(&self) -> Vec<RatFun> {
        (0..self.nvars()).map(|i| self.partial(i)).collect()
    }

    fn add_impl(&self, other: &RatFun, negate: bool) -> RatFun {
        let b = if negate { -&other.num } else { other.num.clone() };
        if self.is_zero() {
            return RatFun { num: b, den: other.den.clone() };
        }
        if other.is_zero() {
            return self.clone();
        }
        if self.den == other.den {
            if self.den.is_one() {
                return Self::from_poly(&self.num + &b);
            }
            return Self::new(&self.num + &b, self.den.clone()).unwrap();
        }
        // Henrici: with g = gcd(d1, d2), the sum only needs reduction by gcd(t, g).
        let g = poly_gcd(&self.den, &other.den);
        if g.is_one() {
            let num = &(&self.num * &other.den) + &(&b * &self.den);
            let den = &self.den * &other.den;
            return Self::normalized(num, den);
        }
        let d1g = self.den.div_exact(&g).unwrap();
        let d2g = other.den.div_exact(&g).unwrap();
        let t = &(&self.num * &d2g) + &(&b * &d1g);
        if t.is_zero() {
            return Self::zero(self.nvars());
        }
        let h = poly_gcd(&t, &g);
        let (t, g) = if h.is_one() { (t, g) } else { (t.div_exact(&h).unwrap(), g.div_exact(&h).unwrap()) };
        Self::normalized(t, &(&d1g * &d2g) * &g)
    }

    fn mul_impl(&self, other: &RatFun) -> RatFun {
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.nvars());
        }
        if self.den.is_one() && other.den.is_one() {
            return Self::from_poly(&self.num * &other.num);
        }
        let g1 = poly_gcd(&self.num, &other.den);
        let g2 = poly_gcd(&other.num, &self.den);
        let cut = |p: &MultiPoly, g: &MultiPoly| if g.is_one() { p.clone() } else { p.div_exact(g).unwrap() };
        let num = &cut(&self.num, &g1) * &cut(&other.num, &g2);
        let den = &cut(&self.den, &g2) * &cut(&other.den, &g1);
        Self::normalized(num, den)
    }

    /// Substitutes rational functions for the variables of a polynomial.
    pub fn compose_poly(p: &MultiPoly, values: &[RatFun]) -> RatFun {
        assert_eq!(p.nvars(), values.len());
        let target = values.first().map(RatFun::nvars).unwrap_or(0);
        if values.iter().all(RatFun::is_polynomial) {
            let polys: Vec<MultiPoly> = values.iter().map(|v| v.num.clone()).collect();
            return Self::from_poly(p.compose(&polys));
        }
        // Put every term over the common denominator prod(den_i^maxdeg_i).
        let maxdeg: Vec<u32> = (0..p.nvars()).map(|i| p.degree_in(i)).collect();
        let mut num_pows: Vec<Vec<MultiPoly>> = values.iter().map(|v| vec![MultiPoly::one(target), v.num.clone()]).collect();
        let mut den_pows: Vec<Vec<MultiPoly>> = values.iter().map(|v| vec![MultiPoly::one(target), v.den.clone()]).collect();
        let power = |table: &mut Vec<Vec<MultiPoly>>, i: usize, e: usize| -> MultiPoly {
            while table[i].len() <= e {
                let next = &table[i][table[i].len() - 1] * &table[i][1];
                table[i].push(next);
            }
            table[i][e].clone()
        };
        let mut total = MultiPoly::zero(target);
        for (m, c) in p.terms() {
            let mut t = MultiPoly::constant(target, c.clone());
            for (i, &e) in m.exponents().iter().enumerate() {
                let e = e as usize;
                let d = maxdeg[i] as usize - e;
                if e > 0 {
                    t = &t * &power(&mut num_pows, i, e);
                }
                if d > 0 && !values[i].den.is_one() {
                    t = &t * &power(&mut den_pows, i, d);
                }
            }
            total = &total + &t;
        }
        let mut den = MultiPoly::one(target);
        for (i, &d) in maxdeg.iter().enumerate() {
            if d > 0 && !values[i].den.is_one() {
                den = &den * &power(&mut den_pows, i, d as usize);
            }
        }
        Self::new(total, den).unwrap()
    }

    /// Composition `self(values)`.
    pub fn compose(&self, values: &[RatFun]) -> Result<RatFun, ExactError> {
        let n = Self::compose_poly(&self.num, values);
        if self.den.is_one() {
            return Ok(n);
        }
        let d = Self::compose_poly(&self.den, values);
        Ok(&n * &d.recip()?)
    }
}

impl fmt::Debug for RatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for RatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (1..=self.nvars()).map(|i| format!("x{i}")).collect();
        f.write_str(&crate::Printer::new(&names).ratfun(self))
    }
}

impl From<MultiPoly> for RatFun {
    fn from(p: MultiPoly) -> Self {
        Self::from_poly(p)
    }
}

impl<'a> Add<&'a RatFun> for &RatFun {
    type Output = RatFun;
    fn add(self, rhs: &'a RatFun) -> RatFun {
        self.add_impl(rhs, false)
    }
}

impl<'a> Sub<&'a RatFun> for &RatFun {
    type Output = RatFun;
    fn sub(self, rhs: &'a RatFun) -> RatFun {
        self.add_impl(rhs, true)
    }
}

impl<'a> Mul<&'a RatFun> for &RatFun {
    type Output = RatFun;
    fn mul(self, rhs: &'a RatFun) -> RatFun {
        self.mul_impl(rhs)
    }
}

/// Panics on division by zero, like integer division.
impl<'a> Div<&'a RatFun> for &RatFun {
    type Output = RatFun;
    fn div(self, rhs: &'a RatFun) -> RatFun {
        self.mul_impl(&rhs.recip().expect("division by zero rational function"))
    }
}

impl Neg for &RatFun {
    type Output = RatFun;
    fn neg(self) -> RatFun {
        RatFun { num: -&self.num, den: self.den.clone() }
    }
}

impl Neg for RatFun {
    type Output = RatFun;
    fn neg(self) -> RatFun {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr<RatFun> for RatFun {
            type Output = RatFun;
            fn $method(self, rhs: RatFun) -> RatFun {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $tr<&'a RatFun> for RatFun {
            type Output = RatFun;
            fn $method(self, rhs: &'a RatFun) -> RatFun {
                (&self).$method(rhs)
            }
        }
        impl $tr<RatFun> for &RatFun {
            type Output = RatFun;
            fn $method(self, rhs: RatFun) -> RatFun {
                self.$method(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

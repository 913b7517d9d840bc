use num_traits::{One, Signed};

use crate::poly::MultiPoly;
use crate::ratfun::RatFun;
use crate::rational::Rational;

/// Renders polynomials and rational functions with caller-supplied variable names.
///
/// Terms appear in descending grlex order. Plain output uses `*`, `^` and
/// `/`; LaTeX output splits trailing digits of a name into a subscript.
#[derive(Clone, Debug)]
pub struct Printer {
    names: Vec<String>,
}

impl Printer {
    pub fn new<S: AsRef<str>>(names: &[S]) -> Self {
        Printer { names: names.iter().map(|s| s.as_ref().to_string()).collect() }
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn poly(&self, p: &MultiPoly) -> String {
        self.render_poly(p, false)
    }

    pub fn ratfun(&self, f: &RatFun) -> String {
        if f.denom().is_one() {
            return self.poly(f.numer());
        }
        let num = self.poly(f.numer());
        let den = self.poly(f.denom());
        let num = if f.numer().num_terms() > 1 { format!("({num})") } else { num };
        let den = if needs_parens(f.denom()) { format!("({den})") } else { den };
        format!("{num}/{den}")
    }

    pub fn poly_latex(&self, p: &MultiPoly) -> String {
        self.render_poly(p, true)
    }

    pub fn ratfun_latex(&self, f: &RatFun) -> String {
        if f.denom().is_one() {
            return self.poly_latex(f.numer());
        }
        format!("\\frac{{{}}}{{{}}}", self.poly_latex(f.numer()), self.poly_latex(f.denom()))
    }

    pub fn latex_name(&self, i: usize) -> String {
        latex_name(&self.names[i])
    }

    fn render_poly(&self, p: &MultiPoly, latex: bool) -> String {
        if p.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (k, (m, c)) in p.terms().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if k == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mut factors: Vec<String> = Vec::new();
            for (i, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let name = if latex { latex_name(&self.names[i]) } else { self.names[i].clone() };
                factors.push(match (e, latex) {
                    (1, _) => name,
                    (_, false) => format!("{name}^{e}"),
                    (_, true) => format!("{name}^{{{e}}}"),
                });
            }
            let coeff = if a.is_one() && !factors.is_empty() { None } else { Some(coeff_str(&a, latex)) };
            let sep = if latex { " " } else { "*" };
            let body = match coeff {
                Some(c) => std::iter::once(c).chain(factors).collect::<Vec<_>>().join(sep),
                None => factors.join(sep),
            };
            out.push_str(&body);
        }
        out
    }
}

fn coeff_str(a: &Rational, latex: bool) -> String {
    if a.is_integer() {
        a.numer().to_string()
    } else if latex {
        format!("\\frac{{{}}}{{{}}}", a.numer(), a.denom())
    } else {
        format!("{}/{}", a.numer(), a.denom())
    }
}

fn needs_parens(p: &MultiPoly) -> bool {
    match p.leading_term() {
        None => false,
        Some((m, c)) => {
            p.num_terms() > 1 || (!m.is_one() && (!c.is_one() || m.exponents().iter().filter(|&&e| e > 0).count() > 1))
        }
    }
}

fn latex_name(name: &str) -> String {
    let split = name.trim_end_matches(|c: char| c.is_ascii_digit()).len();
    let (stem, digits) = name.split_at(split);
    let stem = stem.trim_end_matches('_');
    if digits.is_empty() || stem.is_empty() {
        name.to_string()
    } else {
        format!("{stem}_{{{digits}}}")
    }
}

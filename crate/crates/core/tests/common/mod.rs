//! Shared helpers: model texts with chosen rate constants and closed-form
//! reduced systems written out by hand.
#![allow(dead_code)]

use std::ops::{Add, Div, Mul, Neg, Sub};

use tfreduce::exact::{rational_to_string, RatFun, Rational};
use tfreduce::model::parse_model;
use tfreduce::system::FastSlowSystem;

pub fn q(p: i64, d: i64) -> Rational {
    Rational::new(p.into(), d.into())
}

pub fn qi(p: i64) -> Rational {
    q(p, 1)
}

fn t(k: &Rational) -> String {
    rational_to_string(k)
}

pub fn system(text: &str) -> FastSlowSystem {
    FastSlowSystem::from_model(&parse_model(text).expect("model parses")).expect("model lowers")
}

pub fn fixture(name: &str) -> String {
    let path = format!("{}/fixtures/{name}", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"))
}

/// Rational function in `s` variables with owned arithmetic.
#[derive(Clone, Debug, PartialEq)]
pub struct F(pub RatFun);

impl F {
    pub fn var(s: usize, i: usize) -> F {
        F(RatFun::var(s, i))
    }

    pub fn c(s: usize, c: &Rational) -> F {
        F(RatFun::constant(s, c.clone()))
    }

    pub fn pow(&self, e: i32) -> F {
        F(self.0.pow(e).expect("nonzero"))
    }
}

impl Add for F {
    type Output = F;
    fn add(self, o: F) -> F {
        F(&self.0 + &o.0)
    }
}

impl Sub for F {
    type Output = F;
    fn sub(self, o: F) -> F {
        F(&self.0 - &o.0)
    }
}

impl Mul for F {
    type Output = F;
    fn mul(self, o: F) -> F {
        F(&self.0 * &o.0)
    }
}

impl Div for F {
    type Output = F;
    fn div(self, o: F) -> F {
        F(&self.0 / &o.0)
    }
}

impl Neg for F {
    type Output = F;
    fn neg(self) -> F {
        F(-self.0)
    }
}

/// Variables `v1..vs` and a constant constructor.
pub struct Vars {
    pub s: usize,
}

impl Vars {
    pub fn v(&self, i: usize) -> F {
        F::var(self.s, i - 1)
    }

    pub fn k(&self, c: &Rational) -> F {
        F::c(self.s, c)
    }

    pub fn n(&self, c: i64) -> F {
        F::c(self.s, &qi(c))
    }
}

/// Rate constant sets used for the closed-form comparisons.
pub fn rate_sets() -> Vec<Vec<Rational>> {
    vec![
        vec![qi(1); 9],
        vec![qi(2), qi(3), qi(5), qi(7), qi(11), qi(13), qi(17), qi(19), qi(23)],
        vec![q(1, 2), q(3, 4), q(5, 3), qi(2), q(7, 5), q(2, 9), qi(3), q(4, 7), q(9, 8)],
        vec![q(10, 3), q(1, 7), qi(4), q(3, 11), q(5, 2), qi(6), q(1, 3), q(8, 5), qi(2)],
    ]
}

// ---- example 1: X1 + X2 <-> X3 fast, X1 + X3 <-> 2 X2 slow ----

pub fn example1_text(k1: &Rational, km1: &Rational, k2: &Rational, km2: &Rational) -> String {
    format!("@species X1 X2 X3\n@fast\nX1 + X2 <-> X3 : {}, {}\n@slow\nX1 + X3 <-> 2 X2 : {}, {}\n", t(k1), t(km1), t(k2), t(km2))
}

/// Reduced system on `Phi = (v1, v2, K v1 v2)`.
pub fn example1_rhs(k1: &Rational, km1: &Rational, k2: &Rational, km2: &Rational) -> Vec<RatFun> {
    let x = Vars { s: 2 };
    let kk = x.k(&(k1 / km1));
    let (v1, v2) = (x.v(1), x.v(2));
    let f = (x.k(k2) * kk.clone() * v1.pow(2) * v2.clone() - x.k(km2) * v2.pow(2)) / (x.n(1) + kk.clone() * (v1.clone() + v2.clone()));
    vec![(f.clone() * (x.n(-2) - x.n(3) * kk.clone() * v1)).0, (f * (x.n(1) + x.n(3) * kk * v2)).0]
}

// ---- example 2: Michaelis-Menten with slow product release, X4 kept ----

pub fn example2_text(k1: &Rational, km1: &Rational, k2: &Rational) -> String {
    format!("@species X1 X2 X3 X4\n@fast\nX1 + X2 <-> X3 : {}, {}\n@slow\nX3 -> X1 + X4 : {}\n", t(k1), t(km1), t(k2))
}

/// On `Phi = (v1, v2, K v1 v2, v3)`: the first two components as printed for
/// the three-species system, the third from the conservation law
/// `x2 + x3 + x4`.
pub fn example2_rhs(k1: &Rational, km1: &Rational, k2: &Rational) -> Vec<RatFun> {
    let x = Vars { s: 3 };
    let kk = x.k(&(k1 / km1));
    let (v1, v2) = (x.v(1), x.v(2));
    let f = x.k(k2) * kk.clone() * v1.clone() * v2.clone() / (x.n(1) + kk.clone() * (v1.clone() + v2.clone()));
    let d1 = f.clone() * kk.clone() * v1.clone();
    let d2 = -(f * (x.n(1) + kk.clone() * v2.clone()));
    // d/dt (v2 + K v1 v2 + v3) = 0
    let d3 = -(d2.clone() + kk * (d1.clone() * v2 + v1 * d2.clone()));
    vec![d1.0, d2.0, d3.0]
}

// ---- example 3: 2 X1 + 2 X2 <-> 3 X3 fast, with kappa^3 = k1/k-1 ----

pub fn example3_text(kappa: &Rational, km1: &Rational, k2: &Rational, km2: &Rational) -> String {
    let k1 = kappa * kappa * kappa * km1;
    format!(
        "@species X1 X2 X3\n@fast\n2 X1 + 2 X2 <-> 3 X3 : {}, {}\n@slow\nX1 + X3 <-> 2 X2 : {}, {}\n@phi\nv1^3\nv2^3\n{}*v1^2*v2^2\n@L\n1, -1, 0\n3, 0, 2\n",
        t(&k1),
        t(km1),
        t(k2),
        t(km2),
        t(kappa)
    )
}

/// `1/(3 v1 v2 (4K(v1^3 + v2^3) + 9 v1 v2)) M L h1(Phi)` with `K` the
/// coefficient of the third component of `Phi`.
pub fn example3_rhs(kappa: &Rational, k2: &Rational, km2: &Rational) -> Vec<RatFun> {
    let x = Vars { s: 2 };
    let kk = x.k(kappa);
    let (v1, v2) = (x.v(1), x.v(2));
    let (x1, x2, x3) = (v1.pow(3), v2.pow(3), kk.clone() * v1.pow(2) * v2.pow(2));
    let w = x.k(km2) * x2.pow(2) - x.k(k2) * x1 * x3;
    let h = [w.clone(), x.n(-2) * w.clone(), w];
    let lh = [h[0].clone() - h[1].clone(), x.n(3) * h[0].clone() + x.n(2) * h[2].clone()];
    let m = [
        [x.n(4) * kk.clone() * v1.pow(2) * v2.clone(), x.n(3) * v2.pow(2)],
        [-(x.n(9) * v1.pow(2)) - x.n(4) * kk.clone() * v1.clone() * v2.pow(2), x.n(3) * v1.pow(2)],
    ];
    let den = x.n(3) * v1.clone() * v2.clone() * (x.n(4) * kk * (v1.pow(3) + v2.pow(3)) + x.n(9) * v1 * v2);
    m.iter().map(|row| ((row[0].clone() * lh[0].clone() + row[1].clone() * lh[1].clone()) / den.clone()).0).collect()
}

// ---- two-component system ----

pub fn two_component_text(k: &[Rational], dead_end: bool) -> String {
    let mut s = format!(
        "@species X1 X2 X3 X4 X5 X6\n@fast\nX1 <-> X2 : {}, {}\nX2 + X3 <-> X5 : {}, {}\nX5 <-> X1 + X4 : {}, {}\n@slow\nX4 -> X3 : {}\n",
        t(&k[0]),
        t(&k[1]),
        t(&k[2]),
        t(&k[3]),
        t(&k[4]),
        t(&k[5]),
        t(&k[6])
    );
    if dead_end {
        s.push_str(&format!("X1 + X3 <-> X6 : {}, {}\n", t(&k[7]), t(&k[8])));
    }
    s.push_str("@fastnodes X6\n");
    s
}

/// First reference point `(1, k1/k2, k2k4k6/(k1k3k5), 1, k6/k5, 1)`.
pub fn two_component_xstar_a(k: &[Rational]) -> Vec<Rational> {
    let one = qi(1);
    vec![one.clone(), &k[0] / &k[1], &k[1] * &k[3] * &k[5] / (&k[0] * &k[2] * &k[4]), one.clone(), &k[5] / &k[4], one]
}

/// Second reference point `(1, k1/k2, 1, k1k3k5/(k2k4k6), k1k3/(k2k4), 1)`.
pub fn two_component_xstar_b(k: &[Rational]) -> Vec<Rational> {
    let one = qi(1);
    vec![one.clone(), &k[0] / &k[1], one.clone(), &k[0] * &k[2] * &k[4] / (&k[1] * &k[3] * &k[5]), &k[0] * &k[2] / (&k[1] * &k[3]), one]
}

fn kv(x: &Vars, k: &[Rational]) -> Vec<F> {
    k.iter().map(|c| x.k(c)).collect()
}

/// Reduced system for the first reference point.
pub fn two_component_rhs_a(k: &[Rational]) -> Vec<RatFun> {
    let x = Vars { s: 3 };
    let kk = kv(&x, k);
    let [k1, k2, k3, k4, k5, k6, _k7, k8, k9] = [0, 1, 2, 3, 4, 5, 6, 7, 8].map(|i| kk[i].clone());
    let (v1, v2, v3) = (x.v(1), x.v(2), x.v(3));
    let a = k1.clone() * k3.clone() * k5.clone() + k2.clone() * k4.clone() * k6.clone();
    let b = -(k2.clone() * k4.clone() * k6.clone() * k8.clone() * v1.clone() * v2.clone()) + k1.clone() * k3.clone() * k5.clone() * k9.clone() * v3;
    let xi = k1.clone() * (k1.clone() * k3.clone() * k5.clone() + k2.clone() * k3.clone() * k5.clone()) * k6.clone() * v1
        + k2.clone() * a.clone() * k6.clone() * v2
        + k5.clone() * (k1.clone() + k2.clone()) * a.clone();
    vec![
        (k2.clone() / (k1.clone() * k3.clone()) * a * b.clone() / xi.clone()).0,
        (k5.clone() * (k1.clone() + k2) * b.clone() / xi).0,
        (-b / (k1 * k3 * k5)).0,
    ]
}

/// Reduced system for the second reference point (equivalently the
/// elimination of `{X2, X4, X5}`).
pub fn two_component_rhs_b(k: &[Rational]) -> Vec<RatFun> {
    let x = Vars { s: 3 };
    let kk = kv(&x, k);
    let [k1, k2, k3, k4, k5, k6, _k7, k8, k9] = [0, 1, 2, 3, 4, 5, 6, 7, 8].map(|i| kk[i].clone());
    let (v1, v2, v3) = (x.v(1), x.v(2), x.v(3));
    let a = k1.clone() * k3.clone() * k5 + k2.clone() * k4.clone() * k6.clone();
    let w = k8 * v1.clone() * v2.clone() - k9 * v3;
    let qv = k1.clone() * k3.clone() * a.clone() * v2
        + k1.clone() * k3 * k4.clone() * k6.clone() * (k1.clone() + k2.clone()) * v1
        + k4.clone() * (k1.clone() + k2.clone()) * a.clone();
    vec![
        (-(k2.clone() * k4.clone() / qv.clone()) * a * w.clone()).0,
        (-(k2.clone() * k4.clone() / qv) * k4 * k6 * (k1 + k2) * w.clone()).0,
        w.0,
    ]
}

// ---- dual phosphorylation ----

pub fn dual_text(k: &[Rational]) -> String {
    format!(
        "@species X1 X2 X3 X4 X5 X6\n@fast\nX1 + X2 <-> X3 : {}, {}\nX3 -> X4 : {}\nX4 <-> X1 + X5 : {}, {}\nX5 -> X2 : {}\n@slow\nX1 + X5 -> X1 + X6 : {}\nX6 -> X5 : {}\n",
        t(&k[0]),
        t(&k[1]),
        t(&k[2]),
        t(&k[3]),
        t(&k[4]),
        t(&k[5]),
        t(&k[6]),
        t(&k[7])
    )
}

/// `xi1/xi2 (...)` for the elimination of `{X3, X4, X5}`.
pub fn dual_rhs(k: &[Rational]) -> Vec<RatFun> {
    let x = Vars { s: 3 };
    let kk = kv(&x, k);
    let [k1, k2, k3, k4, k5, k6, k7, k8] = [0, 1, 2, 3, 4, 5, 6, 7].map(|i| kk[i].clone());
    let (v1, v2, v3) = (x.v(1), x.v(2), x.v(3));
    let s23 = k2.clone() + k3.clone();
    let xi1 = k1.clone() * k3.clone() * k7 * v1.pow(2) * v2.clone() - s23.clone() * k6.clone() * k8 * v3;
    let xi2 = k1.clone() * k1.clone() * k3.clone() * k3.clone() * k5.clone() * v1.pow(2) * v2.clone()
        + s23.clone()
            * (k1.clone() * k3.clone() * k5.clone() * k6.clone() * v1.pow(2)
                + x.n(2) * k1.clone() * k3.clone() * k5.clone() * k6.clone() * v1.clone() * v2.clone()
                + k1.clone() * k6.clone() * (k3.clone() * k4.clone() + k3.clone() * k6.clone() + k4.clone() * k6.clone()) * v1.clone()
                + k1.clone() * (k3.clone() + k4.clone()) * k6.clone() * k6.clone() * v2.clone()
                + k4.clone() * s23.clone() * k6.clone() * k6.clone());
    let f = xi1.clone() / xi2;
    vec![
        (f.clone() * k1.clone() * (k3.clone() * k5.clone() * v1.clone() + k3.clone() * k6.clone() + k4.clone() * k6.clone()) * v1.clone()).0,
        (-(f
            * (x.n(2) * k1.clone() * k3.clone() * k5 * v1 * v2.clone()
                + k1.clone() * k3.clone() * k6.clone() * v2.clone()
                + k1 * k4.clone() * k6.clone() * v2
                + k2 * k4.clone() * k6.clone()
                + k3 * k4 * k6.clone())))
        .0,
        (xi1 / (k6 * s23)).0,
    ]
}

// ---- coupled oscillators ----

pub fn oscillator_text(a: &Rational, b: &Rational, c: &Rational) -> String {
    format!(
        "@generic\n@vars x1 x2\n@P\nx1\n{}*x2\n@mu\n{}*x1 + {}*x2\n@h1\nx1^3\n-x2^4\n@params v\n@phi\n{}*v\n{}*v\n@L\n{}*x2, -x1\n",
        t(c),
        t(a),
        t(b),
        t(b),
        t(&-a),
        t(c)
    )
}

/// `v' = -1/(ab(1-c)) (ac, b) h1(Phi(v))` with `h1(Phi(v)) = (b^3 v^3, -a^4 v^4)`.
pub fn oscillator_rhs(a: &Rational, b: &Rational, c: &Rational) -> Vec<RatFun> {
    let x = Vars { s: 1 };
    let v = x.v(1);
    let pre = -(x.n(1) / (x.k(a) * x.k(b) * (x.n(1) - x.k(c))));
    let h = [x.k(&(b * b * b)) * v.pow(3), -(x.k(&(a * a * a * a)) * v.pow(4))];
    vec![(pre * (x.k(&(a * c)) * h[0].clone() + x.k(b) * h[1].clone())).0]
}

//! Exact arithmetic kernel.
//!
//! Arbitrary-precision rationals, sparse multivariate polynomials over `Q`
//! in graded-lexicographic order, canonical rational functions, dense
//! matrices over any of these, and fraction-free (Bareiss) elimination over
//! the rational-function field.
//!
//! Polynomials do not carry variable names; they carry an arity. Names are
//! supplied at print time through [`Printer`].

mod error;
mod gcd;
mod heugcd;
mod matrix;
mod monomial;
mod poly;
mod print;
mod ratfun;
mod rational;
mod rfalg;
mod vecops;

pub use error::ExactError;
pub use gcd::poly_gcd;
pub use matrix::{Matrix, QMatrix, Scalar};
pub use monomial::Monomial;
pub use poly::MultiPoly;
pub use print::Printer;
pub use ratfun::RatFun;
pub use rational::{
    parse_rational, rational_from_f64, rational_to_f64, rational_to_string, Rational,
};
pub use rfalg::{rf_det, rf_rank, rf_solve_linear, PolyMatrix, RFMatrix};
pub use vecops::{hadamard, monomial_pow};

//! The exact arithmetic layer on its own: rational functions, gradients and a
//! symbolic linear solve.

use tfreduce::exact::{rf_solve_linear, Matrix, Printer, RatFun, Rational};

fn main() {
    let p = Printer::new(&["a", "b"]);
    let (a, b) = (RatFun::var(2, 0), RatFun::var(2, 1));
    let one = RatFun::one(2);
    let f = &(&a * &b) / &(&one + &a);
    println!("f = {}", p.ratfun(&f));
    for (i, g) in f.gradient().iter().enumerate() {
        println!("df/d{} = {}", p.names()[i], p.ratfun(g));
    }
    let half = Rational::new(1.into(), 2.into());
    println!("f(1/2, 3) = {}", f.eval(&[half, Rational::from_integer(3.into())]).unwrap());

    // [[a, 1], [1, b]] x = [1, 0]
    let zero = RatFun::zero(2);
    let m = Matrix::from_rows(vec![vec![a.clone(), one.clone()], vec![one.clone(), b.clone()]], 2, zero.clone());
    let rhs = Matrix::column(vec![one.clone(), zero.clone()], zero);
    let x = rf_solve_linear(&m, &rhs).expect("nonsingular").col(0);
    for (i, xi) in x.iter().enumerate() {
        println!("x{} = {}", i + 1, p.ratfun(xi));
    }
    println!("latex: {}", p.ratfun_latex(&x[0]));
}

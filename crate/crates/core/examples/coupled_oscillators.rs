//! A generic polynomial system with a user-supplied parameterization and a
//! state-dependent left factor `L`.

use tfreduce::cli::{invariant_suite, render_plain};
use tfreduce::model::parse_model;
use tfreduce::reduce::{build_parameterization, reduce_with, ParamChoice, DEFAULT_SAMPLES, DEFAULT_SEED};
use tfreduce::system::FastSlowSystem;

const MODEL: &str = "
@generic
@vars x1 x2
@P
x1
-3*x2
@mu
-x1 + 2*x2
@h1
x1^3
-x2^4
@params v
@phi
2*v
v
@L
-3*x2, -x1
";

fn main() {
    let sys = FastSlowSystem::from_model(&parse_model(MODEL).unwrap()).unwrap();
    let (phi, _) = build_parameterization(&sys, &ParamChoice::User, None).unwrap();
    let rs = reduce_with(&sys, &phi).unwrap();
    print!("{}", render_plain(&rs, true));
    for c in invariant_suite(&sys, &phi, DEFAULT_SAMPLES, DEFAULT_SEED) {
        println!("{:<32} {}", c.name, if c.passed { "PASS" } else { "FAIL" });
    }
}

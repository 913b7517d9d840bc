//! A two-component signalling motif whose fast part is complex balanced. The
//! same reduced system comes out of the monomial parameterization and of
//! eliminating a noninteracting set.

use tfreduce::cli::render_plain;
use tfreduce::model::parse_model;
use tfreduce::reduce::{build_parameterization, reduce_with, ParamChoice};
use tfreduce::system::FastSlowSystem;

const MODEL: &str = include_str!("../fixtures/two_component.tfr");

fn main() {
    let sys = FastSlowSystem::from_model(&parse_model(MODEL).unwrap()).unwrap();
    let crn = sys.crn.as_ref().unwrap();
    println!("deficiency {}, weakly reversible {}", crn.deficiency_fast, crn.weakly_reversible_fast);

    let (phi, _) = build_parameterization(&sys, &ParamChoice::ComplexBalanced, None).unwrap();
    let cb = reduce_with(&sys, &phi).unwrap();
    println!("-- monomial parameterization");
    print!("{}", render_plain(&cb, false));

    let (phi, _) = build_parameterization(&sys, &ParamChoice::NonInteracting(Some(vec![1, 3, 4])), None).unwrap();
    let ni = reduce_with(&sys, &phi).unwrap();
    println!("-- eliminate X2, X4, X5");
    print!("{}", render_plain(&ni, false));
}

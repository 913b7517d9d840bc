//! Michaelis-Menten with a fast binding step: eliminate the complex and print
//! the reduced system with its inherited first integral.

use tfreduce::cli::render_plain;
use tfreduce::model::parse_model;
use tfreduce::reduce::{build_parameterization, reduce_with, ParamChoice};
use tfreduce::system::FastSlowSystem;

const MODEL: &str = "
@species S E C P
@fast
S + E <-> C : 2, 1
@slow
C -> E + P : 1
";

fn main() {
    let sys = FastSlowSystem::from_model(&parse_model(MODEL).unwrap()).unwrap();
    let eliminate = vec![sys.names.iter().position(|n| n == "C").unwrap()];
    let (phi, _) = build_parameterization(&sys, &ParamChoice::NonInteracting(Some(eliminate)), None).expect("noninteracting set");
    let rs = reduce_with(&sys, &phi).expect("reduction");
    print!("{}", render_plain(&rs, false));
}

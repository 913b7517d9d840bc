//! Parse a network, lower it, and print its structural data.

use tfreduce::model::{parse_model, validate_model};
use tfreduce::system::FastSlowSystem;

const MODEL: &str = "
@species X1 X2 X3 X4 X5 X6
@fast
X1 + X2 <-> X3 : 1, 2
X3 -> X4 : 3
X4 <-> X1 + X5 : 1, 1
X5 -> X2 : 2
@slow
X1 + X5 -> X1 + X6 : 1
X6 -> X5 : 1
";

fn main() {
    let model = parse_model(MODEL).expect("valid model");
    for d in validate_model(&model) {
        println!("{d}");
    }
    let sys = FastSlowSystem::from_model(&model).expect("lowers");
    let crn = sys.crn.as_ref().expect("network");
    println!("species: {}", sys.names.join(" "));
    println!("n = {}, r = {}, s = {}", sys.names.len(), sys.r, sys.s);
    println!("fast deficiency: {}", crn.deficiency_fast);
    println!("fast part weakly reversible: {}", crn.weakly_reversible_fast);
    println!("conservation laws:");
    for i in 0..sys.conservation.nrows() {
        let row: Vec<String> = (0..sys.conservation.ncols()).map(|j| sys.conservation[(i, j)].to_string()).collect();
        println!("  [{}]", row.join(", "));
    }
    println!("h0:");
    let printer = tfreduce::exact::Printer::new(&sys.names);
    for (name, p) in sys.names.iter().zip(&sys.h0) {
        println!("  {name}' = {}", printer.poly(p));
    }
}

//! Integrate the full system for decreasing epsilon and compare against the
//! reduced flow lifted by the parameterization.

use tfreduce::model::parse_model;
use tfreduce::reduce::{build_parameterization, reduce_with, ParamChoice};
use tfreduce::sim::{convergence_study, Window};
use tfreduce::system::FastSlowSystem;

const MODEL: &str = "
@species X1 X2 X3
@fast
X1 + X2 <-> X3 : 1, 1
@slow
X1 + X3 <-> 2 X2 : 1, 1
";

fn main() {
    let sys = FastSlowSystem::from_model(&parse_model(MODEL).unwrap()).unwrap();
    let (phi, _) = build_parameterization(&sys, &ParamChoice::Auto, None).unwrap();
    let rs = reduce_with(&sys, &phi).unwrap();
    let ladder = [0.04, 0.02, 0.01, 0.005];
    let window = Window { tau_min: Some(0.1), tau_max: 5.0 };
    let res = convergence_study(&sys, &rs, &[1.0, 2.0], None, &ladder, window, 1e-10).expect("integration");
    println!("{:>8} {:>12}", "eps", "max error");
    for (eps, err) in ladder.iter().zip(&res.errors) {
        println!("{eps:>8} {err:>12.4e}");
    }
    let ratios: Vec<String> = res.ratios.iter().map(|r| format!("{r:.3}")).collect();
    println!("successive ratios: {}", ratios.join(", "));
    println!("monotone: {}", res.monotone);
}

//! Dual phosphorylation: reduce, then check attractivity of the critical
//! manifold with Routh-Hurwitz at sample points.

use tfreduce::cli::render_plain;
use tfreduce::model::parse_model;
use tfreduce::reduce::{build_parameterization, decompose_p_mu, reduce_with, stability_analysis, ParamChoice, DEFAULT_SAMPLES, DEFAULT_SEED};
use tfreduce::system::FastSlowSystem;

const MODEL: &str = "
@species X1 X2 X3 X4 X5 X6
@fast
X1 + X2 <-> X3 : 1, 1
X3 -> X4 : 1
X4 <-> X1 + X5 : 1, 1
X5 -> X2 : 1
@slow
X1 + X5 -> X1 + X6 : 1
X6 -> X5 : 1
";

fn main() {
    let sys = FastSlowSystem::from_model(&parse_model(MODEL).unwrap()).unwrap();
    let (phi, _) = build_parameterization(&sys, &ParamChoice::NonInteracting(Some(vec![2, 3, 4])), None).unwrap();
    let rs = reduce_with(&sys, &phi).unwrap();
    print!("{}", render_plain(&rs, false));

    let dec = decompose_p_mu(&sys).unwrap();
    let st = stability_analysis(&sys, &dec, &phi, DEFAULT_SAMPLES, DEFAULT_SEED);
    println!("stability method: {:?}", st.method);
    for (v, h) in st.samples.iter().zip(&st.hurwitz).take(5) {
        let v: Vec<String> = v.iter().map(|x| format!("{x:.3}")).collect();
        let h: Vec<String> = h.iter().map(|x| format!("{x:.3e}")).collect();
        println!("  v = ({}): Hurwitz determinants {}", v.join(", "), h.join(", "));
    }
    println!("all {} samples stable: {}", st.verdicts.len(), st.all_stable());
}

mod common;

use common::*;
use tfreduce::exact::{RatFun, Rational};
use tfreduce::manifold::XStar;
use tfreduce::reduce::{
    build_parameterization, compute_r_general, compute_r_graph_case, decompose_p_mu, reduce_with, ParamChoice, ReducePath, ReducedSystem,
};
use tfreduce::system::FastSlowSystem;

fn reduce(sys: &FastSlowSystem, choice: ParamChoice, hint: Option<Vec<Rational>>) -> ReducedSystem {
    let hint = hint.map(XStar::Exact);
    let (phi, _) = build_parameterization(sys, &choice, hint.as_ref()).expect("parameterization");
    reduce_with(sys, &phi).expect("reduction")
}

fn exact_rhs(rs: &ReducedSystem) -> Vec<RatFun> {
    rs.rhs.as_exact().expect("exact rhs").to_vec()
}

#[test]
fn example_one_noninteracting_matches_closed_form() {
    for k in rate_sets() {
        let sys = system(&example1_text(&k[0], &k[1], &k[2], &k[3]));
        let rs = reduce(&sys, ParamChoice::NonInteracting(Some(vec![2])), None);
        assert_eq!(exact_rhs(&rs), example1_rhs(&k[0], &k[1], &k[2], &k[3]), "k = {k:?}");
    }
}

#[test]
fn example_one_complex_balanced_with_exact_hint() {
    for k in rate_sets() {
        let sys = system(&example1_text(&k[0], &k[1], &k[2], &k[3]));
        let kk = &k[0] / &k[1];
        let rs = reduce(&sys, ParamChoice::ComplexBalanced, Some(vec![qi(1), qi(1), kk]));
        assert_eq!(rs.path, ReducePath::ComplexBalanced);
        assert_eq!(exact_rhs(&rs), example1_rhs(&k[0], &k[1], &k[2], &k[3]));
    }
}

#[test]
fn example_two_keeps_product_and_inherits_integral() {
    for k in rate_sets() {
        let sys = system(&example2_text(&k[0], &k[1], &k[2]));
        let rs = reduce(&sys, ParamChoice::NonInteracting(Some(vec![2])), None);
        assert_eq!(exact_rhs(&rs), example2_rhs(&k[0], &k[1], &k[2]));
        let x = Vars { s: 3 };
        let kk = x.k(&(&k[0] / &k[1]));
        let psi = x.v(1) + kk * x.v(1) * x.v(2);
        assert!(rs.first_integrals.iter().any(|fi| fi.psi == vec![1, 0, 1, 0] && fi.tilde == psi.0));
    }
}

#[test]
fn example_three_user_parameterization() {
    for (kappa, k) in [qi(1), qi(2), q(1, 3), q(3, 2)].iter().zip(rate_sets()) {
        let sys = system(&example3_text(kappa, &k[1], &k[2], &k[3]));
        let rs = reduce(&sys, ParamChoice::User, None);
        assert_eq!(rs.path, ReducePath::ViaL);
        assert_eq!(exact_rhs(&rs), example3_rhs(kappa, &k[2], &k[3]), "kappa = {kappa}");
    }
}

#[test]
fn two_component_first_reference_point() {
    for k in rate_sets() {
        let sys = system(&two_component_text(&k, true));
        let rs = reduce(&sys, ParamChoice::ComplexBalanced, Some(two_component_xstar_a(&k)));
        assert_eq!(exact_rhs(&rs), two_component_rhs_a(&k), "k = {k:?}");
    }
}

#[test]
fn two_component_second_reference_point_and_elimination() {
    for k in rate_sets() {
        let sys = system(&two_component_text(&k, true));
        let rs = reduce(&sys, ParamChoice::ComplexBalanced, Some(two_component_xstar_b(&k)));
        let want = two_component_rhs_b(&k);
        assert_eq!(exact_rhs(&rs), want, "k = {k:?}");
        let rs = reduce(&sys, ParamChoice::NonInteracting(Some(vec![1, 3, 4])), None);
        assert_eq!(exact_rhs(&rs), want);
    }
}

#[test]
fn two_component_without_dead_end_is_trivial() {
    for k in rate_sets() {
        let sys = system(&two_component_text(&k, false));
        let rs = reduce(&sys, ParamChoice::NonInteracting(None), None);
        assert!(rs.trivial);
        assert!(exact_rhs(&rs).iter().all(RatFun::is_zero));
    }
}

#[test]
fn dual_phosphorylation_elimination() {
    for k in rate_sets() {
        let sys = system(&dual_text(&k));
        let rs = reduce(&sys, ParamChoice::NonInteracting(Some(vec![2, 3, 4])), None);
        assert_eq!(exact_rhs(&rs), dual_rhs(&k), "k = {k:?}");
    }
}

#[test]
fn oscillator_reduced_equation() {
    for (a, b, c) in [(qi(-1), qi(2), qi(-3)), (qi(-2), qi(3), q(-1, 2)), (q(-1, 3), qi(5), qi(-2))] {
        let sys = system(&oscillator_text(&a, &b, &c));
        let rs = reduce(&sys, ParamChoice::User, None);
        assert_eq!(exact_rhs(&rs), oscillator_rhs(&a, &b, &c));
    }
}

#[test]
fn general_and_graph_case_agree_with_via_l() {
    for text in [fixture("example1.tfr"), fixture("example3.tfr"), fixture("dual_phosphorylation.tfr"), fixture("oscillator.tfr")] {
        let sys = system(&text);
        let choice = if sys.user_phi.is_some() { ParamChoice::User } else { ParamChoice::NonInteracting(None) };
        let (phi, _) = build_parameterization(&sys, &choice, None).unwrap();
        let dec = decompose_p_mu(&sys).unwrap();
        let rs = reduce_with(&sys, &phi).unwrap();
        let r = rs.r.clone().unwrap();
        assert_eq!(compute_r_general(&phi, &dec).unwrap(), r);
        assert_eq!(compute_r_graph_case(&phi, &dec).unwrap().r, r);
    }
}

mod common;

use common::*;
use proptest::prelude::*;
use tfreduce::model::{parse_model, validate_model, Complex, Model, ModelError, ModelKind, Reaction, Speed};
use tfreduce::system::FastSlowSystem;

const FIXTURES: [&str; 8] = [
    "example1.tfr",
    "example2.tfr",
    "example3.tfr",
    "oscillator.tfr",
    "two_component.tfr",
    "two_component_trivial.tfr",
    "dual_phosphorylation.tfr",
    "corrupt_phi.tfr",
];

fn strip_lines(m: &Model) -> Vec<(Complex, Complex, String, Speed)> {
    m.as_crn()
        .map(|c| c.reactions.iter().map(|r: &Reaction| (r.reactant.clone(), r.product.clone(), r.rate.to_string(), r.speed)).collect())
        .unwrap_or_default()
}

#[test]
fn fixtures_parse_and_validate() {
    for name in FIXTURES {
        let m = parse_model(&fixture(name)).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert!(validate_model(&m).iter().all(|d| !d.is_error()), "{name}");
    }
}

#[test]
fn printed_model_parses_to_the_same_system() {
    for name in FIXTURES {
        let m = parse_model(&fixture(name)).unwrap();
        let again = parse_model(&m.to_string()).unwrap_or_else(|e| panic!("{name}: {e}\n{m}"));
        assert_eq!(strip_lines(&m), strip_lines(&again), "{name}");
        let (a, b) = (FastSlowSystem::from_model(&m).unwrap(), FastSlowSystem::from_model(&again).unwrap());
        assert_eq!(a.h0, b.h0, "{name}");
        assert_eq!(a.h1, b.h1, "{name}");
        assert_eq!(a.user_phi, b.user_phi, "{name}");
        assert_eq!(a.user_l, b.user_l, "{name}");
    }
}

#[test]
fn example_networks_have_expected_shapes() {
    let m = parse_model(&fixture("dual_phosphorylation.tfr")).unwrap();
    let c = m.as_crn().unwrap();
    assert_eq!(c.n(), 6);
    assert_eq!(c.reactions_of(Speed::Fast).count(), 6);
    assert_eq!(c.reactions_of(Speed::Slow).count(), 2);
    let m = parse_model(&fixture("oscillator.tfr")).unwrap();
    assert!(matches!(m.kind, ModelKind::Generic(_)));
    assert_eq!(m.n(), 2);
}

#[test]
fn error_locations() {
    let cases: [(&str, fn(&ModelError) -> bool); 5] = [
        ("@species A B\n@fast\nA -> B : 1\nA -> C : 1\n", |e| matches!(e, ModelError::UnknownIdentifier { line: 4, .. })),
        ("@species A B A\n", |e| matches!(e, ModelError::DuplicateSpecies { .. })),
        ("@fast\nA -> B : 0\n", |e| matches!(e, ModelError::NonPositiveRate { line: 2, .. })),
        ("@fast\nA + -> B : 1\n", |e| matches!(e, ModelError::Syntax { line: 2, .. })),
        ("\n# only a comment\n", |e| matches!(e, ModelError::Empty)),
    ];
    for (text, ok) in cases {
        let err = parse_model(text).unwrap_err();
        assert!(ok(&err), "{text:?} gave {err}");
    }
}

#[test]
fn generic_dimension_mismatch_is_an_error() {
    let m = parse_model("@generic\n@vars x y\n@P\nx\n@mu\nx - y\n@h1\nx\ny\n").unwrap();
    assert!(validate_model(&m).iter().any(|d| d.is_error() && d.message.contains("dimension mismatch")));
    assert!(FastSlowSystem::from_model(&m).is_err());
}

fn complex_strategy() -> impl Strategy<Value = Vec<u32>> {
    prop::collection::vec(0u32..3, 4)
}

fn network_text(reactions: &[(Vec<u32>, Vec<u32>, i64, i64, bool)]) -> String {
    let side = |c: &[u32]| {
        let terms: Vec<String> = c
            .iter()
            .enumerate()
            .filter(|(_, &a)| a > 0)
            .map(|(i, &a)| if a == 1 { format!("X{}", i + 1) } else { format!("{a} X{}", i + 1) })
            .collect();
        if terms.is_empty() {
            "0".to_string()
        } else {
            terms.join(" + ")
        }
    };
    let mut out = String::from("@species X1 X2 X3 X4\n");
    for fast in [true, false] {
        out.push_str(if fast { "@fast\n" } else { "@slow\n" });
        for (a, b, p, d, _) in reactions.iter().filter(|r| r.4 == fast) {
            out.push_str(&format!("{} -> {} : {p}/{d}\n", side(a), side(b)));
        }
    }
    out
}

proptest! {
    #[test]
    fn random_networks_round_trip(
        reactions in prop::collection::vec((complex_strategy(), complex_strategy(), 1i64..50, 1i64..50, any::<bool>()), 1..8)
    ) {
        let reactions: Vec<_> = reactions.into_iter().filter(|r| r.0 != r.1).collect();
        prop_assume!(!reactions.is_empty());
        let m = parse_model(&network_text(&reactions)).unwrap();
        let again = parse_model(&m.to_string()).unwrap();
        prop_assert_eq!(strip_lines(&m), strip_lines(&again));
        let c = m.as_crn().unwrap();
        prop_assert_eq!(c.reactions.len(), reactions.len());
        for (r, (a, b, p, d, fast)) in c.reactions_of(Speed::Fast).chain(c.reactions_of(Speed::Slow)).zip(
            reactions.iter().filter(|r| r.4).chain(reactions.iter().filter(|r| !r.4)),
        ) {
            prop_assert_eq!(&r.reactant.to_dense(4), &a.iter().map(|&x| x as i64).collect::<Vec<_>>());
            prop_assert_eq!(&r.product.to_dense(4), &b.iter().map(|&x| x as i64).collect::<Vec<_>>());
            prop_assert_eq!(&r.rate, &q(*p, *d));
            prop_assert_eq!(r.speed == Speed::Fast, *fast);
        }
    }
}

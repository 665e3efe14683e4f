//! The shipped example files stay parseable and serialization stays a
//! fixed point of parse -> serialize.

use std::path::PathBuf;

use matroid_markets::files::{
    instance_from_str, instance_to_string, load_instance, load_matching, FileError,
};
use matroid_markets::market::{MarketError, MatchingViolation};
use matroid_markets::matroid::MatroidError;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn read(name: &str) -> String {
    std::fs::read_to_string(fixture(name)).unwrap()
}

const INSTANCES: [&str; 5] =
    ["tie.json", "strict.json", "laminar.json", "explicit.json", "empty.json"];

#[test]
fn instance_fixtures_parse() {
    for name in INSTANCES {
        let inst = instance_from_str(&read(name)).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert!(inst.n_doctors() > 0, "{name}");
    }
}

#[test]
fn serialization_is_a_fixed_point() {
    for name in INSTANCES {
        let first = instance_from_str(&read(name)).unwrap();
        let text = instance_to_string(&first);
        let second = instance_from_str(&text).unwrap();
        assert_eq!(first, second, "{name}: round trip changed the instance");
        assert_eq!(text, instance_to_string(&second), "{name}: serialization not a fixed point");
    }
}

#[test]
fn bad_matroid_fixture_is_rejected_as_a_bad_matroid() {
    let err = instance_from_str(&read("bad_matroid.json")).unwrap_err();
    match err {
        FileError::Market(MarketError::BadMatroid { hospital, source }) => {
            assert_eq!(hospital, "h1");
            assert!(matches!(source, MatroidError::NotAMatroid(_)));
        }
        other => panic!("unexpected error: {other}"),
    }
}

#[test]
fn matching_fixtures_parse_against_their_instances() {
    for (inst_name, mu_name, edges) in [
        ("tie.json", "tie_d1.matching.json", 1),
        ("tie.json", "tie_empty.matching.json", 0),
        ("strict.json", "strict_stable.matching.json", 2),
        ("strict.json", "strict_block.matching.json", 2),
    ] {
        let inst = load_instance(&fixture(inst_name)).unwrap();
        let mu = load_matching(&inst, &fixture(mu_name)).unwrap();
        assert_eq!(mu.len(), edges, "{mu_name}");
        inst.require_matching(mu).unwrap();
    }
}

#[test]
fn overfull_matching_fixture_violates_the_hospital_matroid() {
    let inst = load_instance(&fixture("laminar.json")).unwrap();
    let mu = load_matching(&inst, &fixture("laminar_overfull.matching.json")).unwrap();
    let err = inst.require_matching(mu).unwrap_err();
    match err {
        MarketError::NotAMatching(MatchingViolation::DependentAssignment { hospital, .. }) => {
            assert_eq!(hospital, "h1");
        }
        other => panic!("unexpected error: {other}"),
    }
}

//! The five-condition worked example and its two hand-checked suites.

use std::path::PathBuf;

use eqrobin::formats::SuiteJson;
use eqrobin::*;

const D: &str = "a && (!b || !c) && d || e";

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

fn load_suite(name: &str) -> (Expr, Vec<TestVector>) {
    let text = std::fs::read_to_string(fixture(name)).unwrap();
    let doc: SuiteJson = serde_json::from_str(&text).unwrap();
    let e = parse(doc.expression.as_deref().unwrap()).unwrap();
    let vs = doc.vectors(&e).unwrap();
    (e, vs)
}

fn d() -> Expr {
    parse(D).unwrap()
}

#[test]
fn baseline_structure() {
    let b = baseline_normalize(&d()).unwrap();
    assert_eq!(b, parse("(!b || !c) && a && d || e").unwrap());
    assert_eq!(b.to_string(), "(!b || !c) && a && d || e");
    assert_eq!(validate_sbe(&d()).unwrap().len(), 5);
}

#[test]
fn baseline_suite_is_complete() {
    let (e, vs) = load_suite("baseline_suite.json");
    assert_eq!(vs.len(), 6);
    let r = check_unique_cause(&e, &vs).unwrap();
    assert!(r.pass());
    assert_eq!(r.percentage(), 100.0);
    assert_eq!(r.pair_for("a").unwrap().test_cases(), (2, 4));
    assert_eq!(
        find_pair(&e, &vs, "a").unwrap().unwrap().test_cases(),
        (2, 4)
    );
    assert!(verify_minimal(&e, &vs).unwrap());
}

#[test]
fn baseline_suite_without_tc4_loses_only_a() {
    let (e, vs) = load_suite("baseline_suite_without_tc4.json");
    let r = check_unique_cause(&e, &vs).unwrap();
    assert!(!r.pass());
    assert_eq!(r.covered, 4);
    assert_eq!(r.percentage(), 80.0);
    let uncovered: Vec<String> = r.uncovered().map(|c| c.label()).collect();
    assert_eq!(uncovered, ["a"]);
    assert!(!verify_minimal(&e, &vs).unwrap());
}

#[test]
fn rearranged_suite_is_complete() {
    let (e, vs) = load_suite("rearranged_suite.json");
    assert_eq!(e, parse("(a && d) && (!b || !c) || e").unwrap());
    let r = check_unique_cause(&e, &vs).unwrap();
    assert!(r.pass());
    assert_eq!(r.pair_for("a").unwrap().test_cases(), (1, 3));
    assert!(verify_minimal(&e, &vs).unwrap());
}

#[test]
fn fixture_outcomes_agree_with_evaluation() {
    for name in ["baseline_suite.json", "rearranged_suite.json"] {
        let text = std::fs::read_to_string(fixture(name)).unwrap();
        let doc: SuiteJson = serde_json::from_str(&text).unwrap();
        let e = parse(doc.expression.as_deref().unwrap()).unwrap();
        for (v, t) in doc.vectors(&e).unwrap().iter().zip(&doc.tests) {
            assert_eq!(e.evaluate(v).unwrap(), t.outcome.unwrap(), "{name}");
        }
    }
}

#[test]
fn rearranged_suite_has_the_expected_a_pair() {
    let e = parse("(a && d) && (!b || !c) || e").unwrap();
    let s = generate_suite(&e).unwrap();
    assert_eq!(s.size(), 6);
    let vars = e.variables();
    // a=T d=T !b=T !c=F e=F and its a=F partner
    let hi = TestVector::from_pairs(
        &vars,
        [
            ("a", true),
            ("d", true),
            ("b", false),
            ("c", true),
            ("e", false),
        ],
    )
    .unwrap();
    let lo = hi.clone().with("a", false).unwrap();
    assert!(s.contains(&hi) && s.contains(&lo));
    assert!(check_unique_cause(&e, s.vectors()).unwrap().pass());
}

#[test]
fn family_is_sixteen_variants_of_six_tests() {
    let f = generate_family(&d(), &VariantOptions::default()).unwrap();
    assert_eq!(f.variant_count, 16);
    assert!(!f.truncated);
    // frozen from execution; pairwise distinctness is checked in properties
    assert_eq!(f.distinct_count(), 6);
    for m in &f.members {
        assert_eq!(m.suite.size(), 6);
        assert!(verify_minimal(&m.suite.expression, m.suite.vectors()).unwrap());
        assert!(equivalent(&m.suite.expression, &d(), EquivalenceMode::Exhaustive).unwrap());
    }
}

#[test]
fn structure_changes_the_suite() {
    let a = generate_suite(&parse("(!b || !c) && a && d || e").unwrap()).unwrap();
    let b = generate_suite(&parse("(a && d) && (!b || !c) || e").unwrap()).unwrap();
    assert!(!a.same_set(&b));
}

#[test]
fn cost_with_expensive_e() {
    let s = generate_suite(&baseline_normalize(&d()).unwrap()).unwrap();
    assert_eq!(s.vectors().filter(|v| v.get("e") == Some(true)).count(), 1);
    assert_eq!(cost_of(&s, &CostModel::default()).unwrap(), 30.0);
    let cm = CostModel::default().with_assignment("e", true, 10.0);
    assert_eq!(cost_of(&s, &cm).unwrap(), 39.0);
}

#[test]
fn forbidding_the_a_partner_is_recovered() {
    let baseline = generate_suite(&baseline_normalize(&d()).unwrap()).unwrap();
    let pair = find_pair(&baseline.expression, baseline.vectors(), "a")
        .unwrap()
        .unwrap();
    let partner = &baseline.tests[pair.second].vector;
    assert!(!baseline.tests[pair.second].outcome);

    let text = std::fs::read_to_string(fixture("forbid_baseline_a_partner.json")).unwrap();
    let cs: ConstraintSet = serde_json::from_str(&text).unwrap();
    assert!(is_illegal(partner, &cs).unwrap());

    let f = generate_family(&d(), &VariantOptions::default()).unwrap();
    let r = select(&f, &cs, None).unwrap();
    let m = r.selected.expect("a clean suite survives");
    let s = &f.members[m].suite;
    assert!(verify_minimal(&s.expression, s.vectors()).unwrap());
    assert!(s.vectors().all(|v| !is_illegal(v, &cs).unwrap()));
    assert!(!r.discarded.is_empty());
    // the source structure's own suite contains the partner
    assert!(r.discarded.iter().any(|x| x.member == 0));
}

#[test]
fn forbidding_e_false_leaves_nothing() {
    let text = std::fs::read_to_string(fixture("forbid_e_false.json")).unwrap();
    let cs: ConstraintSet = serde_json::from_str(&text).unwrap();
    let f = generate_family(&d(), &VariantOptions::default()).unwrap();
    let r = select(&f, &cs, None).unwrap();
    assert_eq!(r.rationale, Rationale::NoneValid);
    assert_eq!(r.selected, None);
    assert!(r.discarded.iter().all(|x| !x.offending.is_empty()));
}

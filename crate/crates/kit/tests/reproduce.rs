use melnikov_kit::golden::{Agreement, Golden};
use melnikov_kit::reproduce::{golden_text, reproduce, reproduce_with, Outcome, CASES};

fn assert_case(case: &str, errata: &[&str]) {
    let r = reproduce(case, 7).unwrap();
    for l in &r.lines {
        let want_erratum = errata.contains(&l.key.as_str());
        match &l.outcome {
            Outcome::Match(a) => assert!(a.ok() && !want_erratum, "{case}/{}: {:?}", l.key, l.outcome),
            Outcome::Erratum { agreement, notes } => {
                assert!(want_erratum, "{case}/{}: unexpected erratum {notes:?}", l.key);
                assert_eq!(*agreement, Agreement::Exact);
            }
            o => panic!("{case}/{}: {o:?}", l.key),
        }
    }
    assert!(r.passed());
}

#[test]
fn appendix() {
    assert_case("appendix-p2", &[]);
}

#[test]
fn six_cycles() {
    assert_case("thm7", &["H", "b2", "b4", "b6", "bt6"]);
}

#[test]
fn four_cycles() {
    assert_case("thm8", &[]);
}

#[test]
fn symmetric_families() {
    assert_case("thm9", &["c02"]);
    assert_case("thm9p", &[]);
    assert_case("thm10", &["b2", "b3", "bt2", "bt3"]);
}

#[test]
fn phi_and_hstar() {
    assert_case("bhf2", &["e6", "h5"]);
}

#[test]
fn every_golden_file_parses() {
    for case in CASES {
        let g = Golden::parse(golden_text(case).unwrap()).unwrap();
        assert!(!g.keys.is_empty(), "{case}");
        for k in &g.keys {
            g.expand(k, true).unwrap();
        }
    }
}

#[test]
fn wrong_reference_is_reported() {
    let text = golden_text("thm8").unwrap().replace("cycles = 4", "cycles = 5");
    let r = reproduce_with("thm8", &Golden::parse(&text).unwrap(), 7).unwrap();
    assert!(!r.passed());
    assert!(matches!(r.line("cycles").unwrap().outcome, Outcome::Mismatch(_)));
    assert!(reproduce("thm99", 7).is_err());
}

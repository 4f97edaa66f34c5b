use melnikov_core::melnikov::CenterKind;
use melnikov_kit::system::{Body, SystemFile};
use melnikov_kit::KitError;

const SIX: &str = include_str!("../systems/six_cycles.sys");

fn input_error(text: &str) -> (usize, String) {
    match SystemFile::parse(text) {
        Err(KitError::Input { line, message }) => (line, message),
        other => panic!("expected an input error, got {other:?}"),
    }
}

#[test]
fn quartic_file_declares_one_parameter_and_six_deltas() {
    let f = SystemFile::parse(SIX).unwrap();
    assert_eq!(f.params, ["r"]);
    assert_eq!(f.deltas, ["c00", "c01", "c02", "c10", "c11", "c20"]);
    let spec = f.spec().unwrap();
    assert_eq!(spec.kind, CenterKind::Elementary);
    assert_eq!(spec.deltas.len(), 6);
}

#[test]
fn empty_perturbation_is_zero_divergence() {
    let f = SystemFile::parse("H = 1/2*x^2 + 1/2*y^2 + x^3\n").unwrap();
    assert!(f.divergence.is_zero());
    assert!(f.deltas.is_empty());
}

#[test]
fn p_and_q_give_the_divergence() {
    let f = SystemFile::parse(include_str!("../systems/harmonic.sys")).unwrap();
    assert_eq!(f.divergence.to_string(), "2");
}

#[test]
fn symmetric_constraint_violation() {
    let (line, msg) = input_error("symmetric = true\nh02 = 2\nh04 = 1\n");
    assert_eq!(line, 3);
    assert!(msg.contains("constraint violation"), "{msg}");
    assert!(msg.contains("h04 = -1"), "{msg}");
    // The consistent value is accepted.
    SystemFile::parse("symmetric = true\nh02 = 2\nh04 = -1\n").unwrap();
}

#[test]
fn diagnostics_carry_line_numbers() {
    let (line, msg) = input_error("param A\n\nH = 1/2*y^2 + A*x^4 + Q*x^2*y\n");
    assert_eq!(line, 3);
    assert!(msg.contains("undeclared symbol `Q`"), "{msg}");
    let (line, msg) = input_error("H = 1/2*y^2 + x^4 +\n");
    assert_eq!(line, 1);
    assert!(msg.contains("end of expression"), "{msg}");
    let (line, _) = input_error("H = 1/2*y^2 + x^4\nfrobnicate = 3\n");
    assert_eq!(line, 2);
    let (line, _) = input_error("H = 1/2*y^2 + x^4\ndelta c00\ndiv = c00 + c11*x*y\n");
    assert_eq!(line, 3);
    let (line, _) = input_error("H = 1/2*y^2 + x + x^4\n");
    assert_eq!(line, 1);
}

#[test]
fn round_trip() {
    for text in [
        SIX,
        include_str!("../systems/nilpotent_form.sys"),
        include_str!("../systems/symmetric_elementary.sys"),
        include_str!("../systems/symmetric_nilpotent.sys"),
        include_str!("../systems/harmonic.sys"),
    ] {
        let a = SystemFile::parse(text).unwrap();
        let b = SystemFile::parse(&a.to_text()).unwrap();
        assert_eq!(a, b, "{}", a.to_text());
    }
}

#[test]
fn symmetric_files_reach_a_normal_form() {
    let f = SystemFile::parse(include_str!("../systems/symmetric_nilpotent.sys")).unwrap();
    assert!(matches!(f.body, Body::Symmetric { .. }));
    let spec = f.spec().unwrap();
    assert_eq!(spec.kind, CenterKind::Nilpotent);
    let f = SystemFile::parse(include_str!("../systems/symmetric_elementary.sys")).unwrap();
    assert_eq!(f.spec().unwrap().kind, CenterKind::Elementary);
}

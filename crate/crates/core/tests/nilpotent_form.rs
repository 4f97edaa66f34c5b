use melnikov_core::cyclicity::*;
use melnikov_core::melnikov::*;
use melnikov_core::normal_form::*;
use melnikov_core::poly::*;

#[test]
fn certify() {
    let h = nilpotent_center_form("A", "B");
    let sys = SystemSpec::new(h, full_quadratic_divergence(), q(1), CenterKind::Nilpotent).unwrap();
    let deltas: Vec<Var> = ["c00", "c10", "c01", "c02", "c11", "c20"].iter().map(|d| var(d)).collect();
    let exp = melnikov_expansion(&sys, 4, &ExpansionOptions::default()).unwrap();
    let lin = LinearCoeffSystem::from_expansion(&exp, &deltas).unwrap();
    let lin = lin.eval_partial(&[(var("B"), q(1))].into_iter().collect()).unwrap();
    let order = ["c00", "c20", "c02"].iter().map(|d| Some(var(d))).collect();
    let plan = CertifyPlan { order, chain: vec![var("A")], root_hint: Some(q(0)), ..Default::default() };
    let c = certify_cycles(&lin, &plan).unwrap();
    assert_eq!(c.cycles, 4);
}

use std::collections::BTreeMap;

use melnikov_core::bipoly::BiPoly;
use melnikov_core::cyclicity::*;
use melnikov_core::melnikov::*;
use melnikov_core::normal_form::*;
use melnikov_core::poly::*;

fn system() -> SystemSpec {
    let mut s = SymmetricSystem::generic().normalize_elementary();
    let vals: BTreeMap<Var, Q> = [("h11", 0), ("h22", 0), ("h31", 1)].iter().map(|(k, v)| (var(k), q(*v))).collect();
    s = s.eval_partial(&vals);
    s.h40 = Poly::var("r");
    let nf = elementary_normal_form(&s, &BiPoly::zero()).unwrap();
    SystemSpec::new(nf.hamiltonian, full_quadratic_divergence(), q(1), CenterKind::Elementary).unwrap()
}

#[test]
fn six_cycles() {
    let deltas: Vec<Var> = ["c00", "c10", "c01", "c02", "c11", "c20"].iter().map(|d| var(d)).collect();
    let exp = melnikov_expansion(&system(), 6, &ExpansionOptions::default()).unwrap();
    let lin = LinearCoeffSystem::from_expansion(&exp, &deltas).unwrap();
    let order = ["c00", "c02", "c11", "c10", "c20"].iter().map(|d| Some(var(d))).collect();
    let plan = CertifyPlan { order, chain: vec![var("r")], ..Default::default() };
    let c = certify_cycles(&lin, &plan).unwrap();
    assert!(c.established);
    assert_eq!(c.cycles, 6);
}

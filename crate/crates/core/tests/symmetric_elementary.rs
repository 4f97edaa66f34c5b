use std::collections::BTreeMap;

use melnikov_core::cyclicity::*;
use melnikov_core::melnikov::*;
use melnikov_core::normal_form::*;
use melnikov_core::poly::*;

fn symmetric_divergence() -> melnikov_core::bipoly::BiPoly {
    quadratic_divergence(&[("c00", 0, 0), ("c20", 2, 0), ("c11", 1, 1), ("c02", 0, 2)])
}

#[test]
fn five_cycles() {
    let mut s = SymmetricSystem::generic().normalize_elementary();
    s = s.eval_partial(&[(var("h11"), q(0))].into_iter().collect());
    let nf = elementary_normal_form(&s, &symmetric_divergence()).unwrap();
    let sys = SystemSpec::new(nf.hamiltonian, nf.divergence, q(1), CenterKind::Elementary).unwrap();
    let exp = melnikov_expansion(&sys, 5, &ExpansionOptions::default()).unwrap();
    let deltas: Vec<Var> = ["c00", "c02", "c11", "c20"].iter().map(|d| var(d)).collect();
    let lin = LinearCoeffSystem::from_expansion(&exp, &deltas).unwrap();
    let lin = lin.eval_partial(&[(var("h31"), qr(1, 10))].into_iter().collect::<BTreeMap<_, _>>()).unwrap();
    let order = ["c00", "c20", "c02"].iter().map(|d| Some(var(d))).collect();
    let plan = CertifyPlan { order, chain: vec![var("h40"), var("h22")], ..Default::default() };
    let c = certify_cycles(&lin, &plan).unwrap();
    assert_eq!(c.cycles, 5);
}

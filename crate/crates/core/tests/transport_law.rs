use melnikov_core::bipoly::BiPoly;
use melnikov_core::melnikov::*;
use melnikov_core::normal_form::*;
use melnikov_core::poly::*;
use melnikov_core::radical::RadExpr;
use proptest::prelude::*;

fn rq(n: i64, d: i64) -> RadExpr {
    RadExpr::from_q(qr(n, d))
}

fn random_bipoly(cs: &[i64], degrees: std::ops::RangeInclusive<u32>) -> BiPoly {
    let mut out = BiPoly::zero();
    let mut it = cs.iter();
    for n in degrees {
        for j in 0..=n {
            if let Some(&c) = it.next() {
                out.add_term(n - j, j, rq(c, 3));
            }
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn expansion_commutes_with_affine_change(
        hs in prop::collection::vec(-4i64..=4, 9),
        cs in prop::collection::vec(-4i64..=4, 6),
        omega in 1i64..=3,
        a in -3i64..=3,
        b in 1i64..=3,
        k in prop::sample::select(vec![-3i64, -2, -1, 1, 2, 3]),
        reflect in any::<bool>(),
    ) {
        let w = q(omega);
        let mut h = BiPoly::zero();
        h.add_term(2, 0, RadExpr::from_q(&w / q(2)));
        h.add_term(0, 2, RadExpr::from_q(&w / q(2)));
        let h = h.add(&random_bipoly(&hs, 3..=4));
        let div = random_bipoly(&cs, 0..=2);
        let sys = SystemSpec::new(h.clone(), div.clone(), w.clone(), CenterKind::Elementary).unwrap();
        let opts = ExpansionOptions::default();
        let exp = melnikov_expansion(&sys, 3, &opts).unwrap();

        // Conformal (a = d, c = -b) or reflection (c = b, d = -a) linear part.
        let (c, d) = if reflect { (b, -a) } else { (-b, a) };
        let ch = AffineChange::new(rq(a, 1), rq(b, 1), rq(c, 1), rq(d, 1), RadExpr::zero(), RadExpr::zero(), rq(k, 1)).unwrap();
        let det = a * d - b * c;
        let w2 = &w * qr(det, k * (a * a + b * b));
        prop_assume!(w2 > q(0));
        let h2 = transport_hamiltonian(&h, &ch, &RadExpr::zero()).unwrap();
        let div2 = transport_divergence(&div, &ch).unwrap();
        let sys2 = SystemSpec::new(h2, div2, w2, CenterKind::Elementary).unwrap();
        let direct = melnikov_expansion(&sys2, 3, &opts).unwrap();
        let law = transport_melnikov(&exp, &ch).unwrap();
        for l in 0..4 {
            prop_assert!(direct.coefficients[l].sub(&law.coefficients[l]).is_zero(),
                "b{}: {} vs {}", l, direct.coefficients[l], law.coefficients[l]);
        }
    }
}

use melnikov_core::bipoly::BiPoly;
use melnikov_core::melnikov::*;
use melnikov_core::normal_form::*;
use melnikov_core::parse::parse_poly;
use melnikov_core::poly::*;
use melnikov_core::radical::RadExpr;

fn rp(s: &str) -> RadExpr {
    RadExpr::from_poly(parse_poly(s, None).unwrap())
}

#[test]
fn branch_and_restricted_hamiltonian() {
    let s = SymmetricSystem::generic().normalize_nilpotent();
    let h = nilpotent_normal_form(&s, &BiPoly::zero()).unwrap().hamiltonian;
    let phi = solve_phi(&h, &q(1), 8).unwrap();
    let h0 = hstar_decompose(&h, &phi, 8).unwrap().swap_remove(0);
    let e = [
        (2, "-4*h20 + 2*h11^2"),
        (3, "-4*(2*h11*h20 + h31)"),
        (4, "-2*(h11^2 - 2*h20)^2"),
        (5, "16*(h11^2 - 2*h20)*(2*h11*h20 + h31)"),
        (6, "4*(h11^6 - 6*h11^4*h20 - 12*h11^2*h20^2 - 8*h20^3 - 24*h11*h20*h31 - 6*h31^2)"),
    ];
    for (j, w) in e {
        assert_eq!(phi.coeff(j), &rp(w), "e{j}");
    }
    let hs =
        [(3, "4*(2*h11*h20 + h31)"), (4, "8*h11*(2*h11*h20 + h31) - 8*(h20^2 + h40)"), (6, "-8*(2*h11*h20 + h31)^2")];
    for (j, w) in hs {
        assert_eq!(h0.coeff(j), &rp(w), "h{j}");
    }
    // The fifth coefficient carries h20 where the printed table has h02.
    assert_eq!(h0.coeff(5), &rp("8*(h11^2 - 2*h20)*(2*h11*h20 + h31)"));
    let printed = rp("8*(h11^2 - 2*h02)*(2*h11*h20 + h31)")
        .eval_partial(&[(var("h02"), qr(1, 2))].into_iter().collect())
        .unwrap();
    assert_ne!(h0.coeff(5), &printed);
}

use std::collections::BTreeMap;
use std::f64::consts::PI;

use melnikov_core::melnikov::{melnikov_expansion, ExpansionOptions};
use melnikov_core::poly::{var, Q};
use melnikov_kit::numeric::*;
use melnikov_kit::SystemFile;

fn harmonic() -> NumericSystem {
    let h = FPoly(vec![(2, 0, 0.5), (0, 2, 0.5)]);
    NumericSystem::from_divergence(h, &FPoly(vec![(0, 0, 2.0)]), 1)
}

fn vals(pairs: &[(&str, i64)]) -> BTreeMap<melnikov_core::poly::Var, Q> {
    pairs.iter().map(|&(k, v)| (var(k), Q::from_integer(v.into()))).collect()
}

#[test]
fn harmonic_oscillator() {
    let sys = harmonic();
    for h in [1e-3, 0.1, 2.0] {
        let o = trace_level_curve(&sys, h, &TraceOptions::default()).unwrap();
        assert!((o.melnikov - 4.0 * PI * h).abs() < 1e-9 * h, "{h}: {}", o.melnikov);
        assert!((o.period - 2.0 * PI).abs() < 1e-9);
        assert!(o.max_energy_error < 1e-12 * (1.0 + h));
        assert!((o.area() - 2.0 * PI * h).abs() < 5e-3 * 2.0 * PI * h, "area {}", o.area());
    }
}

#[test]
fn explicit_p_and_q() {
    // p = x, q = y has divergence 2.
    let h = FPoly(vec![(2, 0, 0.5), (0, 2, 0.5)]);
    let sys = NumericSystem::new(h, FPoly(vec![(1, 0, 1.0)]), FPoly(vec![(0, 1, 1.0)]), 1);
    let (m, _) = melnikov_numeric(&sys, 0.3, &TraceOptions::default()).unwrap();
    assert!((m - 4.0 * PI * 0.3).abs() < 1e-9);
}

#[test]
fn closure_fails_beyond_the_separatrix() {
    // Saddle at (1, 0) with energy 1/6.
    let h = FPoly(vec![(2, 0, 0.5), (0, 2, 0.5), (3, 0, -1.0 / 3.0)]);
    let sys = NumericSystem::from_divergence(h, &FPoly(vec![(0, 0, 1.0)]), 1);
    let e = saddle_energy(&sys, 16, 10.0).unwrap();
    assert!((e - 1.0 / 6.0).abs() < 1e-9, "{e}");
    let err = trace_level_curve(&sys, 0.2, &TraceOptions::default()).unwrap_err();
    assert!(err.to_string().contains("not a periodic orbit"));
    assert!(trace_level_curve(&sys, e / 16.0, &TraceOptions::default()).is_ok());
}

#[test]
fn error_estimate_shrinks_with_tolerance() {
    let h = FPoly(vec![(2, 0, 0.5), (0, 2, 0.5), (3, 0, -1.0 / 3.0), (1, 2, 1.0)]);
    let div = FPoly(vec![(0, 0, 1.0), (2, 0, 3.0), (1, 1, -1.0)]);
    let sys = NumericSystem::from_divergence(h, &div, 1);
    let mut last = f64::INFINITY;
    for tol in [1e-8, 1e-10, 1e-12] {
        let o = trace_level_curve(&sys, 0.01, &TraceOptions { tol, ..Default::default() }).unwrap();
        assert!(o.err_est < last, "{tol}: {} !< {last}", o.err_est);
        last = o.err_est;
    }
}

#[test]
fn nilpotent_leading_coefficient() {
    let text = include_str!("../systems/nilpotent_form.sys");
    let f = SystemFile::parse(text).unwrap();
    let f = f.with_values(&vals(&[("A", 0), ("B", 1)])).unwrap();
    let exp = melnikov_expansion(&f.spec().unwrap(), 0, &ExpansionOptions::default()).unwrap();
    let d = vals(&[("c00", 1), ("c10", 0), ("c01", 0), ("c20", 0), ("c11", 0), ("c02", 0)]);
    let b0 = exp.coefficients[0].eval(&d, 128).unwrap().to_f64();
    let g = f.with_values(&d).unwrap();
    let sys = NumericSystem::from_spec(&g.spec().unwrap()).unwrap();
    assert_eq!(sys.p_value, 2);
    let h = 1e-4;
    let (m, _) = melnikov_numeric(&sys, h, &TraceOptions::default()).unwrap();
    let want = b0 * h.powf(0.75);
    assert!((m - want).abs() < 1e-2 * want.abs(), "{m} vs {want}");
}

#[test]
fn fit_recovers_synthetic_coefficients() {
    let bs = [1.5, -0.25, 3.0];
    for p in [1u32, 2] {
        let pf = p as f64;
        let samples: Vec<(f64, f64)> = h_ladder(0.01, 8)
            .into_iter()
            .map(|h| {
                let m = bs.iter().enumerate().map(|(l, b)| b * h.powf((pf + 1.0) / (2.0 * pf) + l as f64 / pf)).sum();
                (h, m)
            })
            .collect();
        let fit = fit_expansion(&samples, p, 2).unwrap();
        for (got, want) in fit.coeffs.iter().zip(bs) {
            assert!((got - want).abs() < 1e-6 * want.abs().max(1.0), "p={p}: {got} vs {want}");
        }
        assert!(fit.warnings.is_empty());
        assert!(fit.condition.is_finite());
    }
    assert!(fit_expansion(&[(1.0, 1.0)], 1, 2).is_err());
}

#[test]
fn fitted_harmonic_expansion() {
    let sys = harmonic();
    let hs = h_ladder(0.05, 7);
    let orbits = sample_ladder(&sys, &hs, &TraceOptions::default()).unwrap();
    let samples: Vec<_> = orbits.iter().map(|o| (o.h, o.melnikov)).collect();
    let fit = fit_expansion(&samples, 1, 2).unwrap();
    assert!((fit.coeffs[0] - 4.0 * PI).abs() < 1e-6);
    assert!(fit.coeffs[1].abs() < 1e-4);
}

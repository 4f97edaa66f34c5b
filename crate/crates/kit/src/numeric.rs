//! Floating-point Melnikov integrals along traced level curves, used as an
//! independent check of the symbolic coefficients.
//!
//! Orbits of `ẋ = H_y, ẏ = -H_x` are integrated with the 4-stage
//! Gauss–Legendre method (order 8), projected back onto `H = h` after every
//! step, and closed on a half-line from the origin through the starting
//! point. `M(h) = ∮ q dx - p dy = ∫₀ᵀ (q H_y + p H_x) dt` is carried as an
//! extra component of the same integrator.

use std::collections::BTreeMap;

use melnikov_core::bipoly::BiPoly;
use melnikov_core::melnikov::{CenterKind, SystemSpec};
use melnikov_core::mixed::eval_rad;
use melnikov_core::poly::{Var, Q};
use nalgebra::{DMatrix, DVector};

use crate::error::{KitError, Result};

/// A polynomial in `x, y` with `f64` coefficients.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct FPoly(pub Vec<(u32, u32, f64)>);

impl FPoly {
    pub fn from_bipoly(b: &BiPoly, vals: &BTreeMap<Var, Q>) -> Result<FPoly> {
        let mut out = Vec::new();
        for (&(i, j), c) in b.terms() {
            let v = eval_rad(c, vals, 128)
                .ok_or_else(|| KitError::Numeric(format!("coefficient {c} of x^{i} y^{j} is not numeric")))?;
            out.push((i, j, v.to_f64()));
        }
        Ok(FPoly(out))
    }

    pub fn eval(&self, x: f64, y: f64) -> f64 {
        self.0.iter().map(|&(i, j, c)| c * x.powi(i as i32) * y.powi(j as i32)).sum()
    }

    pub fn dx(&self) -> FPoly {
        FPoly(self.0.iter().filter(|t| t.0 > 0).map(|&(i, j, c)| (i - 1, j, c * i as f64)).collect())
    }

    pub fn dy(&self) -> FPoly {
        FPoly(self.0.iter().filter(|t| t.1 > 0).map(|&(i, j, c)| (i, j - 1, c * j as f64)).collect())
    }

    /// `∫₀ˣ f(s, y) ds`.
    pub fn integrate_x(&self) -> FPoly {
        FPoly(self.0.iter().map(|&(i, j, c)| (i + 1, j, c / (i + 1) as f64)).collect())
    }
}

#[derive(Clone, Debug)]
pub struct NumericSystem {
    pub h: FPoly,
    pub p: FPoly,
    pub q: FPoly,
    /// `b_l` multiplies `h^{(p+1)/(2p) + l/p}`.
    pub p_value: u32,
    hx: FPoly,
    hy: FPoly,
}

impl NumericSystem {
    pub fn new(h: FPoly, p: FPoly, q: FPoly, p_value: u32) -> Self {
        let (hx, hy) = (h.dx(), h.dy());
        NumericSystem { h, p, q, p_value, hx, hy }
    }

    /// Perturbation `p = ∫₀ˣ div dx`, `q = 0`, which has the given divergence.
    pub fn from_divergence(h: FPoly, div: &FPoly, p_value: u32) -> Self {
        NumericSystem::new(h, div.integrate_x(), FPoly::default(), p_value)
    }

    /// Numeric version of a fully specialised system.
    pub fn from_spec(spec: &SystemSpec) -> Result<Self> {
        let none = BTreeMap::new();
        let h = FPoly::from_bipoly(&spec.hamiltonian, &none)?;
        let div = FPoly::from_bipoly(&spec.divergence, &none)?;
        let p = match spec.kind {
            CenterKind::Nilpotent => 2,
            _ => 1,
        };
        Ok(NumericSystem::from_divergence(h, &div, p))
    }

    fn field(&self, z: &[f64; 3]) -> [f64; 3] {
        let (x, y) = (z[0], z[1]);
        let (hx, hy) = (self.hx.eval(x, y), self.hy.eval(x, y));
        [hy, -hx, self.q.eval(x, y) * hy + self.p.eval(x, y) * hx]
    }

    /// Newton steps along `∇H` back onto `H = h`.
    fn project(&self, z: &mut [f64; 3], h: f64) {
        for _ in 0..3 {
            let (x, y) = (z[0], z[1]);
            let r = self.h.eval(x, y) - h;
            let (gx, gy) = (self.hx.eval(x, y), self.hy.eval(x, y));
            let g2 = gx * gx + gy * gy;
            if g2 == 0.0 || r == 0.0 {
                return;
            }
            z[0] -= r * gx / g2;
            z[1] -= r * gy / g2;
        }
    }
}

const GL_B: [f64; 4] =
    [0.173_927_422_568_726_9, 0.326_072_577_431_273_1, 0.326_072_577_431_273_1, 0.173_927_422_568_726_9];
const GL_A: [[f64; 4]; 4] = [
    [0.086_963_711_284_363_46, -0.026_604_180_084_998_79, 0.012_627_462_689_404_74, -0.003_555_149_685_795_683],
    [0.188_118_117_499_868_1, 0.163_036_288_715_636_5, -0.027_880_428_602_470_9, 0.006_735_500_594_538_155],
    [0.167_191_921_974_188_8, 0.353_953_006_033_743_8, 0.163_036_288_715_636_5, -0.014_190_694_931_141_14],
    [0.177_482_572_254_522_6, 0.313_445_114_741_868_3, 0.352_676_757_516_271_9, 0.086_963_711_284_363_46],
];

/// Polyline points per accepted step.
const DENSE: usize = 8;

/// One implicit Gauss–Legendre step, stages by fixed-point iteration.
fn gl_step(sys: &NumericSystem, z: &[f64; 3], dt: f64) -> [f64; 3] {
    let f0 = sys.field(z);
    // Relative to the local speed: small orbits need the same relative
    // accuracy as large ones. The M component does not feed back.
    let speed = f0[0].abs() + f0[1].abs();
    let mut k = [f0; 4];
    for _ in 0..60 {
        let mut next = k;
        let mut delta: f64 = 0.0;
        for (s, row) in GL_A.iter().enumerate() {
            let mut zs = *z;
            for (kr, a) in k.iter().zip(row) {
                for c in 0..3 {
                    zs[c] += dt * a * kr[c];
                }
            }
            next[s] = sys.field(&zs);
            for c in 0..2 {
                delta = delta.max((next[s][c] - k[s][c]).abs());
            }
        }
        k = next;
        if delta <= 1e-15 * speed {
            break;
        }
    }
    let mut out = *z;
    for (ks, b) in k.iter().zip(GL_B) {
        for c in 0..3 {
            out[c] += dt * b * ks[c];
        }
    }
    out
}

#[derive(Clone, Debug)]
pub struct OrbitSample {
    pub h: f64,
    pub points: Vec<[f64; 2]>,
    pub period: f64,
    /// `∮ q dx - p dy` along the orbit.
    pub melnikov: f64,
    pub err_est: f64,
    pub max_energy_error: f64,
}

impl OrbitSample {
    /// Shoelace area of the polyline.
    pub fn area(&self) -> f64 {
        let n = self.points.len();
        let mut s = 0.0;
        for i in 0..n {
            let (a, b) = (self.points[i], self.points[(i + 1) % n]);
            s += a[0] * b[1] - a[1] * b[0];
        }
        (s / 2.0).abs()
    }
}

#[derive(Clone, Debug)]
pub struct TraceOptions {
    pub tol: f64,
    pub max_steps: usize,
    /// Direction of the Poincaré half-line (and of the starting point).
    pub angle: f64,
}

impl Default for TraceOptions {
    fn default() -> Self {
        TraceOptions { tol: 1e-12, max_steps: 200_000, angle: 0.0 }
    }
}

/// First point on the ray at angle `angle` with `H = h`, if the ray reaches
/// level `h` before `H` turns back.
fn ray_start(sys: &NumericSystem, h: f64, angle: f64) -> Option<f64> {
    let (c, s) = (angle.cos(), angle.sin());
    let f = |r: f64| sys.h.eval(r * c, r * s);
    let mut lo = 0.0;
    let mut r = 1e-6;
    let mut prev = f(0.0);
    while r < 1e6 {
        let v = f(r);
        if v >= h {
            let mut hi = r;
            for _ in 0..200 {
                let m = 0.5 * (lo + hi);
                if f(m) >= h {
                    hi = m;
                } else {
                    lo = m;
                }
            }
            return Some(0.5 * (lo + hi));
        }
        if v < prev {
            return None;
        }
        prev = v;
        lo = r;
        r *= 1.1;
    }
    None
}

/// Trace the closed level curve `H = h` and integrate the Melnikov form.
pub fn trace_level_curve(sys: &NumericSystem, h: f64, opts: &TraceOptions) -> Result<OrbitSample> {
    let not_periodic = || KitError::Numeric(format!("not a periodic orbit at this h = {h:e}"));
    if h <= 0.0 {
        return Err(KitError::Numeric(format!("energy h = {h:e} must be positive")));
    }
    let r0 = ray_start(sys, h, opts.angle).ok_or_else(not_periodic)?;
    let d = [opts.angle.cos(), opts.angle.sin()];
    let side = |z: &[f64; 3]| d[0] * z[1] - d[1] * z[0];
    let along = |z: &[f64; 3]| d[0] * z[0] + d[1] * z[1];
    let mut z = [r0 * d[0], r0 * d[1], 0.0];
    let f0 = sys.field(&z);
    let dir = (d[0] * f0[1] - d[1] * f0[0]).signum();
    if dir == 0.0 {
        return Err(not_periodic());
    }
    let speed = (f0[0] * f0[0] + f0[1] * f0[1]).sqrt();
    let mut dt = 1e-3 * r0 / speed.max(1e-300);
    let mut t = 0.0;
    let mut err = 0.0;
    let mut points = vec![[z[0], z[1]]];
    let mut max_e: f64 = 0.0;
    let mut m_max: f64 = 0.0;
    let mut left = false;
    for _ in 0..opts.max_steps {
        // Step doubling: the difference bounds the local error of order 8.
        let full = gl_step(sys, &z, dt);
        let half = gl_step(sys, &gl_step(sys, &z, dt / 2.0), dt / 2.0);
        // Errors relative to the orbit size and to the running |M|.
        let scale = r0.max(half[0].abs() + half[1].abs());
        let e_pos = ((full[0] - half[0]).abs() + (full[1] - half[1]).abs()) / scale;
        let e_m = (full[2] - half[2]).abs() / m_max.max(half[2].abs()).max(1e-300);
        let e = e_pos.max(e_m) / 255.0;
        if e > opts.tol && dt > 1e-300 {
            dt *= (0.9 * (opts.tol / e).powf(1.0 / 9.0)).clamp(0.1, 0.9);
            continue;
        }
        let mut next = half;
        sys.project(&mut next, h);
        let crossed = left && dir * side(&z) < 0.0 && dir * side(&next) >= 0.0 && along(&next) > 0.0;
        if crossed {
            // Bisect on the step length for the crossing.
            let (mut lo, mut hi) = (0.0, dt);
            for _ in 0..60 {
                let m = 0.5 * (lo + hi);
                let mut zm = gl_step(sys, &z, m);
                sys.project(&mut zm, h);
                if dir * side(&zm) >= 0.0 {
                    hi = m;
                } else {
                    lo = m;
                }
            }
            let mut zc = gl_step(sys, &z, hi);
            sys.project(&mut zc, h);
            err += (full[2] - half[2]).abs() / 255.0;
            let gap = ((zc[0] - r0 * d[0]).powi(2) + (zc[1] - r0 * d[1]).powi(2)).sqrt();
            if gap > 1e-6 * r0.max(1e-12) {
                return Err(not_periodic());
            }
            return Ok(OrbitSample {
                h,
                points,
                period: t + hi,
                melnikov: zc[2],
                err_est: err,
                max_energy_error: max_e,
            });
        }
        err += (full[2] - half[2]).abs() / 255.0;
        t += dt;
        let dt_taken = dt;
        z = next;
        if !z.iter().all(|v| v.is_finite()) || z[0].abs() + z[1].abs() > 1e3 * (1.0 + r0) {
            return Err(not_periodic());
        }
        max_e = max_e.max((sys.h.eval(z[0], z[1]) - h).abs());
        m_max = m_max.max(z[2].abs());
        points.push([z[0], z[1]]);
        for k in 1..DENSE {
            let zk = gl_step(sys, &z, dt_taken * k as f64 / DENSE as f64);
            points.push([zk[0], zk[1]]);
        }
        if dir * side(&z) < 0.0 {
            left = true;
        }
        if e < opts.tol / 512.0 {
            dt *= 2.0;
        } else {
            dt *= (0.9 * (opts.tol / e.max(1e-300)).powf(1.0 / 9.0)).clamp(0.2, 2.0);
        }
    }
    Err(not_periodic())
}

/// `(M(h), error estimate)`.
pub fn melnikov_numeric(sys: &NumericSystem, h: f64, opts: &TraceOptions) -> Result<(f64, f64)> {
    let o = trace_level_curve(sys, h, opts)?;
    Ok((o.melnikov, o.err_est))
}

/// Lowest energy at which `H` turns back along one of `n` rays from the
/// origin; level curves below it are taken to be closed.
pub fn saddle_energy(sys: &NumericSystem, n: usize, r_max: f64) -> Option<f64> {
    let mut best: Option<f64> = None;
    for k in 0..n {
        let a = std::f64::consts::TAU * k as f64 / n as f64;
        let (c, s) = (a.cos(), a.sin());
        let mut r = 1e-4;
        let mut prev = sys.h.eval(r * c, r * s);
        while r < r_max {
            let rn = r * 1.02;
            let v = sys.h.eval(rn * c, rn * s);
            if v < prev {
                // Refine the maximum by golden section on [r/1.02, rn].
                let (mut lo, mut hi) = (r / 1.02, rn);
                let f = |t: f64| sys.h.eval(t * c, t * s);
                for _ in 0..100 {
                    let m1 = lo + (hi - lo) * 0.381_966;
                    let m2 = lo + (hi - lo) * 0.618_034;
                    if f(m1) < f(m2) {
                        lo = m1;
                    } else {
                        hi = m2;
                    }
                }
                let e = f(0.5 * (lo + hi));
                best = Some(best.map_or(e, |b: f64| b.min(e)));
                break;
            }
            prev = v;
            r = rn;
        }
    }
    best
}

/// `h_max · 4^{-i}`, `i = 0..n`.
pub fn h_ladder(h_max: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| h_max * 0.25f64.powi(i as i32)).collect()
}

#[derive(Clone, Debug)]
pub struct Fit {
    pub coeffs: Vec<f64>,
    pub residual: f64,
    /// Condition number of the column-scaled basis.
    pub condition: f64,
    pub warnings: Vec<String>,
}

pub const CONDITION_LIMIT: f64 = 1e12;

/// Least squares in the basis `h^{(p+1)/(2p) + l/p}`, `l = 0..=order`.
pub fn fit_expansion(samples: &[(f64, f64)], p: u32, order: usize) -> Result<Fit> {
    let n = order + 1;
    if samples.len() < n + 1 {
        return Err(KitError::Numeric(format!("{} samples cannot fit {n} coefficients robustly", samples.len())));
    }
    let pf = p as f64;
    let expo = |l: usize| (pf + 1.0) / (2.0 * pf) + l as f64 / pf;
    let m = samples.len();
    let mut a = DMatrix::<f64>::zeros(m, n);
    let mut b = DVector::<f64>::zeros(m);
    // Rows are weighted by h^{-(p+1)/(2p)} so that small h carry equal weight.
    for (r, &(h, mv)) in samples.iter().enumerate() {
        let w = h.powf(-expo(0));
        for l in 0..n {
            a[(r, l)] = w * h.powf(expo(l));
        }
        b[r] = w * mv;
    }
    let mut scales = vec![1.0; n];
    for (l, s) in scales.iter_mut().enumerate() {
        let norm = a.column(l).norm();
        if norm > 0.0 {
            *s = norm;
            a.column_mut(l).scale_mut(1.0 / norm);
        }
    }
    let svd = a.clone().svd(true, true);
    let sv = &svd.singular_values;
    let condition = sv.max() / sv.min();
    let mut warnings = Vec::new();
    if !condition.is_finite() || condition > CONDITION_LIMIT {
        warnings.push(format!("ill-conditioned basis (condition {condition:.3e})"));
    }
    let x = svd.solve(&b, 1e-14 * sv.max()).map_err(|e| KitError::Numeric(e.to_string()))?;
    let residual = (&a * &x - &b).norm();
    let coeffs = (0..n).map(|l| x[l] / scales[l]).collect();
    Ok(Fit { coeffs, residual, condition, warnings })
}

/// Trace several levels in parallel.
pub fn sample_ladder(sys: &NumericSystem, hs: &[f64], opts: &TraceOptions) -> Result<Vec<OrbitSample>> {
    std::thread::scope(|s| {
        let handles: Vec<_> = hs.iter().map(|&h| s.spawn(move || trace_level_curve(sys, h, opts))).collect();
        handles.into_iter().map(|j| j.join().expect("trace thread panicked")).collect()
    })
}

#[derive(Clone, Debug)]
pub struct LadderFit {
    pub h_max: f64,
    pub orbits: Vec<OrbitSample>,
    pub fit: Fit,
}

/// Sample `h_max · 4^{-i}`, `i < levels`, and fit `order + 1` coefficients.
/// Without an explicit `h_max` it is taken as 1/16 of the lowest saddle
/// energy seen along rays from the origin.
pub fn ladder_fit(
    sys: &NumericSystem,
    h_max: Option<f64>,
    levels: usize,
    order: usize,
    opts: &TraceOptions,
) -> Result<LadderFit> {
    let h_max = match h_max {
        Some(h) => h,
        None => saddle_energy(sys, 32, 100.0)
            .map(|e| e / 16.0)
            .ok_or_else(|| KitError::Numeric("no saddle found; pass an explicit h_max".into()))?,
    };
    let orbits = sample_ladder(sys, &h_ladder(h_max, levels), opts)?;
    let samples: Vec<_> = orbits.iter().map(|o| (o.h, o.melnikov)).collect();
    let fit = fit_expansion(&samples, sys.p_value, order)?;
    Ok(LadderFit { h_max, orbits, fit })
}

//! Independent numerical oracles shared by the integration tests.
#![allow(dead_code)]

use ccs_core::C64;

#[allow(clippy::too_many_arguments)]
fn simpson_step<F: Fn(f64) -> C64>(f: &F, a: f64, b: f64, fa: C64, fm: C64, fb: C64, whole: C64, tol: f64, depth: u32) -> C64 {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = (fa + flm * 4.0 + fm) * ((m - a) / 6.0);
    let right = (fm + frm * 4.0 + fb) * ((b - m) / 6.0);
    let delta = left + right - whole;
    if depth == 0 || delta.norm() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
        + simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
}

/// Adaptive Simpson quadrature of a complex function on `[a, b]`.
pub fn simpson<F: Fn(f64) -> C64>(f: F, a: f64, b: f64, tol: f64) -> C64 {
    let (fa, fb) = (f(a), f(b));
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (fa + fm * 4.0 + fb) * ((b - a) / 6.0);
    simpson_step(&f, a, b, fa, fm, fb, whole, tol, 50)
}

/// `Li2(z) = -int_0^1 Log(1 - z t) / t dt`, valid off the cut `[1, inf)`.
pub fn li2_quadrature(z: C64) -> C64 {
    let f = |t: f64| {
        let u = z * t;
        if u.norm() < 0.25 {
            // -Log(1 - u) / t = z sum u^{k-1} / k, free of cancellation near t = 0
            let mut s = C64::new(0.0, 0.0);
            let mut p = C64::new(1.0, 0.0);
            for k in 1..=40 {
                s += p / k as f64;
                p *= u;
            }
            z * s
        } else {
            -(C64::new(1.0, 0.0) - u).ln() / t
        }
    };
    simpson(f, 0.0, 1.0, 1e-14)
}

/// Rogers' dilogarithm on `(0, 1)` from the quadrature value of `Li2`.
pub fn rogers_quadrature(x: f64) -> f64 {
    let li = li2_quadrature(C64::new(x, 0.0)).re;
    0.5 * x.ln() * (1.0 - x).ln() + li - std::f64::consts::PI.powi(2) / 6.0
}

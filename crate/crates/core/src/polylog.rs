//! Principal logarithm, the dilogarithm, Rogers' dilogarithm and its lift
//! to the covering surface, and the oriented volume of an ideal simplex.
//!
//! Branch conventions: `Arg` takes values in `(-pi, pi]` and `Log` has `Arg`
//! as imaginary part. On the cut `(1, inf)` the dilogarithm needs an explicit
//! side; functions that must evaluate there (Rogers' `L` and its lift) use the
//! limit from the upper half plane, which agrees with the principal values of
//! `Log z` and `Log(1/(1 - z))` used by the covering coordinates.

use std::f64::consts::PI;
use std::sync::OnceLock;

use crate::bloch::{CoveringPoint, PreBlochElement};
use crate::error::{CcsError, Result};
use crate::geometry::{C64, ONE, ZERO};
use crate::tol::TOL_ZERO;

pub const PI2_6: f64 = PI * PI / 6.0;
pub const TWO_PI_SQ: f64 = 2.0 * PI * PI;
pub(crate) const I_PI: C64 = C64::new(0.0, PI);

/// Principal argument in `(-pi, pi]`; negative reals get exactly `+pi`
/// regardless of the sign of a zero imaginary part.
pub fn parg(z: C64) -> f64 {
    if z.im == 0.0 && z.re < 0.0 {
        PI
    } else {
        z.im.atan2(z.re)
    }
}

pub fn plog(z: C64) -> Result<C64> {
    if z.norm() <= TOL_ZERO {
        return Err(CcsError::LogOfZero);
    }
    Ok(plog_nz(z))
}

/// `plog` for arguments already known to be nonzero.
pub(crate) fn plog_nz(z: C64) -> C64 {
    C64::new(z.norm().ln(), parg(z))
}

/// Side of the cut `(1, inf)` a real argument is approached from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum CutSide {
    /// `x + 0i`
    Above,
    /// `x - 0i`
    Below,
}

/// `B_{2k} / (2k + 1)!` for `k = 1..=20`.
fn bernoulli_coefficients() -> &'static [f64; 20] {
    static COEFFS: OnceLock<[f64; 20]> = OnceLock::new();
    COEFFS.get_or_init(|| {
        let mut out = [0.0; 20];
        let two_pi = 2.0 * PI;
        for (idx, slot) in out.iter_mut().enumerate() {
            let k = idx as i32 + 1;
            let zeta = match k {
                1 => PI.powi(2) / 6.0,
                2 => PI.powi(4) / 90.0,
                3 => PI.powi(6) / 945.0,
                4 => PI.powi(8) / 9450.0,
                _ => (1..=200).rev().map(|n| (n as f64).powi(-2 * k)).sum(),
            };
            let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
            *slot = sign * 2.0 * zeta / ((2 * k + 1) as f64 * two_pi.powi(2 * k));
        }
        out
    })
}

/// Series in `u = -Log(1 - z)`; used for `|z| <= 1`, `Re z <= 1/2`, where `|u| < 1.8`.
fn li2_bernoulli(z: C64) -> C64 {
    let u = -plog_nz(ONE - z);
    let u2 = u * u;
    let mut term = u * u2;
    let mut sum = ZERO;
    for c in bernoulli_coefficients() {
        let t = term * *c;
        sum += t;
        if t.norm() < 1e-17 * sum.norm() {
            break;
        }
        term *= u2;
    }
    u - u2 * 0.25 + sum
}

fn li2_unit_disc(z: C64) -> C64 {
    if z.re > 0.5 {
        let w = ONE - z;
        C64::from(PI2_6) - plog_nz(z) * plog_nz(w) - li2_bernoulli(w)
    } else {
        li2_bernoulli(z)
    }
}

/// `Li2(x +- 0i)` for real `x > 1`.
fn li2_on_cut(x: f64, side: CutSide) -> C64 {
    let ln = x.ln();
    let re = PI * PI / 3.0 - 0.5 * ln * ln - li2_unit_disc((1.0 / x).into()).re;
    let im = PI * ln;
    match side {
        CutSide::Above => C64::new(re, im),
        CutSide::Below => C64::new(re, -im),
    }
}

/// Principal branch of the dilogarithm.
pub fn li2(z: C64) -> Result<C64> {
    li2_with_side(z, None)
}

/// Dilogarithm with an optional side flag, required on the cut `(1, inf)`.
pub fn li2_with_side(z: C64, side: Option<CutSide>) -> Result<C64> {
    if z.im == 0.0 && z.re > 1.0 {
        return match side {
            Some(s) => Ok(li2_on_cut(z.re, s)),
            None => Err(CcsError::OnCut(z.re)),
        };
    }
    Ok(li2_off_cut(z))
}

fn li2_off_cut(z: C64) -> C64 {
    if z == ZERO {
        return ZERO;
    }
    if z == ONE {
        return PI2_6.into();
    }
    if z.norm_sqr() > 1.0 {
        let l = plog_nz(-z);
        -li2_unit_disc(ONE / z) - C64::from(PI2_6) - l * l * 0.5
    } else {
        li2_unit_disc(z)
    }
}

fn check_regular(z: C64) -> Result<()> {
    if z.norm() <= TOL_ZERO || (z - ONE).norm() <= TOL_ZERO {
        return Err(CcsError::SingularPoint(format!("{z}")));
    }
    Ok(())
}

/// Rogers' dilogarithm `-1/2 Log(z) Log(1/(1-z)) + Li2(z) - pi^2/6`,
/// evaluated from above on the cuts.
pub fn rogers_l(z: C64) -> Result<C64> {
    check_regular(z)?;
    let li = li2_with_side(z, Some(CutSide::Above))?;
    Ok(-0.5 * plog_nz(z) * plog_nz(ONE / (ONE - z)) + li - PI2_6)
}

/// The discontinuous real extension of Rogers' dilogarithm to all of R.
pub fn rogers_l_real(x: f64) -> f64 {
    let on_unit = |t: f64| -> f64 {
        let l = rogers_l(t.into()).expect("argument lies in (0, 1)");
        l.re
    };
    if x == 0.0 {
        -PI2_6
    } else if x == 1.0 {
        0.0
    } else if x > 1.0 {
        -on_unit(1.0 / x)
    } else if x < 0.0 {
        -on_unit(x / (x - 1.0))
    } else {
        on_unit(x)
    }
}

/// Oriented hyperbolic volume of the ideal simplex with cross-ratio `z`
/// (the Bloch-Wigner function).
pub fn vol(z: C64) -> f64 {
    if z.im == 0.0 {
        return 0.0;
    }
    parg(ONE - z) * z.norm().ln() + li2_off_cut(z).im
}

/// `L(z) + (pi i / 2)(q Log z - p Log(1/(1-z)))`.
pub fn lhat(pt: &CoveringPoint) -> C64 {
    let z = pt.z();
    let (lz, l1) = (plog_nz(z), pt.log_inv());
    let li = li2_with_side(z, Some(CutSide::Above)).expect("covering points avoid 0 and 1");
    let l = -0.5 * lz * l1 + li - PI2_6;
    l + I_PI * 0.5 * (lz * pt.q() as f64 - l1 * pt.p() as f64)
}

/// `[e^{2 pi i r}; 0, 2] - [e^{2 pi i r}; 0, 0]` for `r = num / den` in `(0, 1)`.
pub fn chi_hat(num: i64, den: i64) -> Result<PreBlochElement> {
    let r = num as f64 / den as f64;
    if den <= 0 || !(0.0..1.0).contains(&r) {
        return Err(CcsError::ChiOutOfRange(r));
    }
    if num == 0 {
        return Err(CcsError::ChiAtZero);
    }
    let (s, c) = (2.0 * PI * r).sin_cos();
    let z = C64::new(c, s);
    let mut e = PreBlochElement::zero();
    e.push(1, CoveringPoint::new(z, 0, 2)?);
    e.push(-1, CoveringPoint::new(z, 0, 0)?);
    Ok(e)
}

/// `x mod m` in `[0, m)`.
pub fn reduce_mod(x: f64, m: f64) -> f64 {
    let r = x.rem_euclid(m);
    if r >= m {
        0.0
    } else {
        r
    }
}

/// Distance from `x` to the nearest multiple of `m`.
pub fn dist_to_lattice(x: f64, m: f64) -> f64 {
    let r = reduce_mod(x, m);
    r.min(m - r)
}

/// `-raw / (2 pi^2)` with the real part reduced into `[0, 1)`.
pub fn to_unit_circle_value(raw: C64) -> C64 {
    let v = -raw / TWO_PI_SQ;
    C64::new(reduce_mod(v.re, 1.0), v.im)
}

/// Distance between two values of C/Z.
pub fn dist_mod_one(a: C64, b: C64) -> f64 {
    let d = a - b;
    dist_to_lattice(d.re, 1.0).hypot(d.im)
}

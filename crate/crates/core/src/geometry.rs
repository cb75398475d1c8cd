//! Matrices in SL(2,C), vectors in C^2 \ {0}, the Moebius action on the
//! Riemann sphere, the Hopf map and the cross-ratio.

use std::f64::consts::PI;
use std::fmt;
use std::ops::{Mul, Neg};

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{CcsError, Result};
use crate::tol::{TOL_CMP, TOL_DET, TOL_ZERO};

pub type C64 = Complex64;

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);

/// Entrywise closeness scaled by the magnitude of the values compared.
pub(crate) fn close(a: C64, b: C64, tol: f64) -> bool {
    (a - b).norm() <= tol * 1f64.max(a.norm()).max(b.norm())
}

/// An element of SL(2,C), stored as the matrix `((a, b), (c, d))`.
#[derive(Clone, Copy, PartialEq)]
pub struct GroupElement {
    pub a: C64,
    pub b: C64,
    pub c: C64,
    pub d: C64,
}

impl GroupElement {
    pub const IDENTITY: GroupElement = GroupElement {
        a: ONE,
        b: ZERO,
        c: ZERO,
        d: ONE,
    };

    pub fn new(a: C64, b: C64, c: C64, d: C64) -> Result<Self> {
        Self::with_tolerance(a, b, c, d, TOL_DET)
    }

    /// Fails when `|ad - bc - 1| > tol`. The determinant is never renormalized.
    pub fn with_tolerance(a: C64, b: C64, c: C64, d: C64, tol: f64) -> Result<Self> {
        let g = Self { a, b, c, d };
        let det = g.det();
        if !(det - ONE).norm().le(&tol) {
            return Err(CcsError::Determinant {
                det: format!("{det}"),
                tol,
            });
        }
        Ok(g)
    }

    pub fn real(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        Self::new(a.into(), b.into(), c.into(), d.into())
    }

    /// Skips the determinant check; for products and inverses of checked elements.
    pub(crate) fn from_entries_unchecked(a: C64, b: C64, c: C64, d: C64) -> Self {
        Self { a, b, c, d }
    }

    pub fn entries(&self) -> [C64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn det(&self) -> C64 {
        self.a * self.d - self.b * self.c
    }

    pub fn inverse(&self) -> Self {
        Self::from_entries_unchecked(self.d, -self.b, -self.c, self.a)
    }

    pub fn conj(&self) -> Self {
        Self::from_entries_unchecked(self.a.conj(), self.b.conj(), self.c.conj(), self.d.conj())
    }

    /// `h g h^{-1}`
    pub fn conjugated_by(&self, h: &GroupElement) -> Self {
        *h * *self * h.inverse()
    }

    pub fn apply(&self, v: &ProjVector) -> ProjVector {
        ProjVector {
            v1: self.a * v.v1 + self.b * v.v2,
            v2: self.c * v.v1 + self.d * v.v2,
        }
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.entries()
            .iter()
            .zip(other.entries().iter())
            .all(|(x, y)| close(*x, *y, tol))
    }

    /// `self = other` or `self = -other` within `tol`.
    pub fn approx_eq_up_to_sign(&self, other: &Self, tol: f64) -> bool {
        self.approx_eq(other, tol) || self.approx_eq(&-*other, tol)
    }

    pub fn is_identity(&self, tol: f64) -> bool {
        self.approx_eq(&Self::IDENTITY, tol)
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.entries().iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Random element with entries uniform in the box `[-1,1] + i[-1,1]`,
    /// brought to determinant one by rescaling the first column.
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        loop {
            let mut e = [ZERO; 4];
            for z in e.iter_mut() {
                *z = C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            }
            let det = e[0] * e[3] - e[1] * e[2];
            if det.norm() < 0.1 {
                continue;
            }
            return Self::from_entries_unchecked(e[0] / det, e[1], e[2] / det, e[3]);
        }
    }
}

impl Mul for GroupElement {
    type Output = GroupElement;
    fn mul(self, r: GroupElement) -> GroupElement {
        GroupElement::from_entries_unchecked(
            self.a * r.a + self.b * r.c,
            self.a * r.b + self.b * r.d,
            self.c * r.a + self.d * r.c,
            self.c * r.b + self.d * r.d,
        )
    }
}

impl Neg for GroupElement {
    type Output = GroupElement;
    fn neg(self) -> GroupElement {
        GroupElement::from_entries_unchecked(-self.a, -self.b, -self.c, -self.d)
    }
}

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}

/// Row-major `[[re, im]; 4]`.
impl Serialize for GroupElement {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let pairs: [[f64; 2]; 4] = self.entries().map(|z| [z.re, z.im]);
        pairs.serialize(s)
    }
}

/// Deserialization does not check the determinant; callers validate.
impl<'de> Deserialize<'de> for GroupElement {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let p = <[[f64; 2]; 4]>::deserialize(d)?;
        let z = p.map(|[re, im]| C64::new(re, im));
        Ok(GroupElement::from_entries_unchecked(z[0], z[1], z[2], z[3]))
    }
}

/// Matrix of the rotation by `2 pi k / n`.
pub fn rotation(n: u32, k: i64) -> GroupElement {
    assert!(n >= 1, "rotation order must be positive");
    let k = k.rem_euclid(n as i64);
    let theta = 2.0 * PI * k as f64 / n as f64;
    let (s, c) = theta.sin_cos();
    GroupElement::from_entries_unchecked(c.into(), (-s).into(), s.into(), c.into())
}

/// A nonzero vector of C^2.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProjVector {
    pub v1: C64,
    pub v2: C64,
}

impl ProjVector {
    pub fn new(v1: C64, v2: C64) -> Result<Self> {
        if v1.norm().max(v2.norm()) <= TOL_ZERO {
            return Err(CcsError::ZeroVector);
        }
        Ok(Self { v1, v2 })
    }

    pub fn real(v1: f64, v2: f64) -> Result<Self> {
        Self::new(v1.into(), v2.into())
    }

    pub fn norm(&self) -> f64 {
        (self.v1.norm_sqr() + self.v2.norm_sqr()).sqrt()
    }

    pub fn scale(&self, s: C64) -> Self {
        Self {
            v1: self.v1 * s,
            v2: self.v2 * s,
        }
    }

    pub fn conj(&self) -> Self {
        Self {
            v1: self.v1.conj(),
            v2: self.v2.conj(),
        }
    }

    /// Uniform sample from the complex unit bidisc.
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let mut disc = || loop {
            let z = C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            if z.norm_sqr() <= 1.0 {
                return z;
            }
        };
        loop {
            let v = Self {
                v1: disc(),
                v2: disc(),
            };
            if v.norm() > 1e-3 {
                return v;
            }
        }
    }
}

/// `v1 w2 - v2 w1`
pub fn det_pair(v: &ProjVector, w: &ProjVector) -> C64 {
    v.v1 * w.v2 - v.v2 * w.v1
}

/// A point of the Riemann sphere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtComplex {
    Finite(C64),
    Infinity,
}

impl ExtComplex {
    pub fn finite(z: C64) -> Self {
        if z.re.is_finite() && z.im.is_finite() {
            ExtComplex::Finite(z)
        } else {
            ExtComplex::Infinity
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, ExtComplex::Infinity)
    }

    pub fn as_finite(&self) -> Option<C64> {
        match self {
            ExtComplex::Finite(z) => Some(*z),
            ExtComplex::Infinity => None,
        }
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        match (self, other) {
            (ExtComplex::Infinity, ExtComplex::Infinity) => true,
            (ExtComplex::Finite(a), ExtComplex::Finite(b)) => close(*a, *b, tol),
            _ => false,
        }
    }
}

impl From<C64> for ExtComplex {
    fn from(z: C64) -> Self {
        ExtComplex::finite(z)
    }
}

impl From<f64> for ExtComplex {
    fn from(x: f64) -> Self {
        ExtComplex::finite(x.into())
    }
}

/// The Hopf map `(v1, v2) -> v1 / v2`.
pub fn hopf(v: &ProjVector) -> ExtComplex {
    if v.v2.norm() > TOL_ZERO {
        ExtComplex::Finite(v.v1 / v.v2)
    } else {
        ExtComplex::Infinity
    }
}

pub fn moebius(g: &GroupElement, z: ExtComplex) -> ExtComplex {
    match z {
        ExtComplex::Infinity => {
            if g.c.norm() <= TOL_ZERO {
                ExtComplex::Infinity
            } else {
                ExtComplex::Finite(g.a / g.c)
            }
        }
        ExtComplex::Finite(z) => {
            let den = g.c * z + g.d;
            if den.norm() <= TOL_ZERO {
                ExtComplex::Infinity
            } else {
                ExtComplex::Finite((g.a * z + g.b) / den)
            }
        }
    }
}

fn first_coincidence(z: &[ExtComplex; 4], tol: f64) -> Option<(usize, usize)> {
    for i in 0..4 {
        for j in i + 1..4 {
            if z[i].approx_eq(&z[j], tol) {
                return Some((i, j));
            }
        }
    }
    None
}

/// `(z0 - z3)(z1 - z2) / ((z0 - z2)(z1 - z3))`. Factors containing an
/// infinite entry cancel in pairs and are dropped.
pub fn cross_ratio(z0: ExtComplex, z1: ExtComplex, z2: ExtComplex, z3: ExtComplex) -> Result<C64> {
    let z = [z0, z1, z2, z3];
    if let Some((i, j)) = first_coincidence(&z, TOL_CMP) {
        return Err(CcsError::DegenerateTuple(i, j));
    }
    let factor = |i: usize, j: usize| match (z[i], z[j]) {
        (ExtComplex::Finite(a), ExtComplex::Finite(b)) => a - b,
        _ => ONE,
    };
    Ok(factor(0, 3) * factor(1, 2) / (factor(0, 2) * factor(1, 3)))
}

/// Cross-ratio extended by zero on tuples with repeated entries.
pub fn cross_ratio_ext(z0: ExtComplex, z1: ExtComplex, z2: ExtComplex, z3: ExtComplex) -> C64 {
    cross_ratio(z0, z1, z2, z3).unwrap_or(ZERO)
}

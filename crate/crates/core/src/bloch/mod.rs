//! The covering surface of `C \ {0, 1}`, combinatorial flattenings, the
//! extended pre-Bloch group and the map into `C ^ C`.

mod element;
mod wedge;

pub use element::{
    check_flattening_condition, five_tuple, flattening_condition_exact, nu_hat, nu_hat_ledger,
    FlatteningReport, PreBlochElement, PreBlochTerm, EDGE_LABELS,
};
pub use wedge::{Atom, AtomLabel, LogCombination, WedgeElement, WedgeVerdict};

use crate::error::{CcsError, Result};
use crate::geometry::{close, C64, ONE};
use crate::polylog::{plog_nz, I_PI};
use crate::tol::{TOL_CMP, TOL_ZERO};

const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

/// A point `(z; p, q)` of the covering surface: `z` avoids 0 and 1, and the
/// even integers `p, q` select the logarithm branches
/// `Log z + p pi i` and `Log(1/(1 - z)) + q pi i`.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct CoveringPoint {
    z: C64,
    p: i64,
    q: i64,
    /// `Log(1/(1 - z))`, kept from the flattening when there is one since
    /// recomputing it from `z` loses digits near `z = 1`.
    #[serde(skip)]
    log_inv: C64,
}

impl PartialEq for CoveringPoint {
    fn eq(&self, other: &Self) -> bool {
        self.z == other.z && self.p == other.p && self.q == other.q
    }
}

impl CoveringPoint {
    pub fn new(z: C64, p: i64, q: i64) -> Result<Self> {
        if p % 2 != 0 {
            return Err(CcsError::NotEven { which: "p", value: p as f64 });
        }
        if q % 2 != 0 {
            return Err(CcsError::NotEven { which: "q", value: q as f64 });
        }
        if !(z.re.is_finite() && z.im.is_finite()) || z.norm() <= TOL_ZERO || (z - ONE).norm() <= TOL_ZERO {
            return Err(CcsError::SingularPoint(format!("{z}")));
        }
        Ok(Self {
            z,
            p,
            q,
            log_inv: plog_nz(ONE / (ONE - z)),
        })
    }

    pub fn z(&self) -> C64 {
        self.z
    }

    pub fn p(&self) -> i64 {
        self.p
    }

    pub fn q(&self) -> i64 {
        self.q
    }

    /// Principal `Log(1/(1 - z))`.
    pub fn log_inv(&self) -> C64 {
        self.log_inv
    }

    pub fn conj(&self) -> Self {
        let z = self.z.conj();
        Self {
            z,
            p: -self.p,
            q: -self.q,
            // conjugation leaves the principal branch only on the cut itself
            log_inv: if z.im == 0.0 {
                plog_nz(ONE / (ONE - z))
            } else {
                self.log_inv.conj()
            },
        }
    }

    /// Same point within `tol` on `z`; branches must agree exactly.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.p == other.p && self.q == other.q && close(self.z, other.z, tol)
    }
}

/// Log-parameters of the two derived atoms attached to a flattening.
#[derive(Debug, Clone, PartialEq)]
pub struct TripleLedger {
    pub w0: LogCombination,
    pub w1: LogCombination,
}

impl TripleLedger {
    pub fn w2(&self) -> LogCombination {
        self.w0.plus(&self.w1).negated()
    }
}

/// A combinatorial flattening `(w0, w1, w2)` with `w0 + w1 + w2 = 0`,
/// `e^{w0} = z` and `e^{w1} = 1/(1 - z)`.
#[derive(Debug, Clone, PartialEq)]
pub struct FlatteningTriple {
    w0: C64,
    w1: C64,
    ledger: Option<TripleLedger>,
}

impl FlatteningTriple {
    pub fn new(w0: C64, w1: C64) -> Result<Self> {
        let z = w0.exp();
        if z.norm() <= TOL_ZERO || (z - ONE).norm() <= TOL_ZERO {
            return Err(CcsError::SingularPoint(format!("{z}")));
        }
        let target = ONE / (ONE - z);
        // relative errors in z are amplified by |z / (1 - z)| in 1/(1 - z)
        let cond = 1f64.max(z.norm() / (ONE - z).norm());
        if (w1.exp() - target).norm() > TOL_CMP * cond * target.norm() {
            return Err(CcsError::InvalidFlattening);
        }
        Ok(Self { w0, w1, ledger: None })
    }

    /// Accepts a full triple; `w2` must agree with `-w0 - w1` and is then
    /// replaced by it.
    pub fn from_parts(w0: C64, w1: C64, w2: C64) -> Result<Self> {
        let scale = 1f64.max(w0.norm()).max(w1.norm());
        if (w0 + w1 + w2).norm() > TOL_CMP * scale {
            return Err(CcsError::InvalidFlattening);
        }
        Self::new(w0, w1)
    }

    /// Values are taken from the ledger.
    pub fn from_ledger(ledger: TripleLedger) -> Result<Self> {
        let mut t = Self::new(ledger.w0.value(), ledger.w1.value())?;
        t.ledger = Some(ledger);
        Ok(t)
    }

    pub fn w0(&self) -> C64 {
        self.w0
    }

    pub fn w1(&self) -> C64 {
        self.w1
    }

    pub fn w2(&self) -> C64 {
        -self.w0 - self.w1
    }

    pub fn w(&self) -> [C64; 3] {
        [self.w0, self.w1, self.w2()]
    }

    pub fn ledger(&self) -> Option<&TripleLedger> {
        self.ledger.as_ref()
    }

    pub fn cross_ratio(&self) -> C64 {
        self.w0.exp()
    }

    pub fn perturbed(&self, dw0: C64) -> Self {
        Self {
            w0: self.w0 + dw0,
            w1: self.w1,
            ledger: None,
        }
    }
}

fn branch_integer(diff: C64, which: &'static str) -> Result<i64> {
    let x = diff / I_PI;
    let n = x.re.round();
    if (x.re - n).abs() > 1e-6 || x.im.abs() > 1e-6 || (n as i64) % 2 != 0 {
        return Err(CcsError::NotEven { which, value: x.re });
    }
    Ok(n as i64)
}

/// The bijection from flattenings to the covering surface:
/// `z = e^{w0}`, `p = (w0 - Log z)/(pi i)`, `q = (w1 - Log(1/(1-z)))/(pi i)`.
pub fn to_covering_point(t: &FlatteningTriple) -> Result<CoveringPoint> {
    let mut z = t.cross_ratio();
    // e^{w0} for real z picks up a rounding-level imaginary part of either sign
    if z.im.abs() <= 4.0 * f64::EPSILON * z.norm() {
        z.im = 0.0;
    }
    let p = branch_integer(t.w0 - plog_nz(z), "p")?;
    // w1 itself is accurate; only its sheet is read off from z
    let rough = plog_nz(ONE / (ONE - z));
    let turns = ((t.w1.im - rough.im) / TWO_PI).round();
    let log_inv = C64::new(t.w1.re, t.w1.im - TWO_PI * turns);
    let q = branch_integer(t.w1 - log_inv, "q")?;
    let mut pt = CoveringPoint::new(z, p, q)?;
    pt.log_inv = log_inv;
    Ok(pt)
}

pub fn from_covering_point(pt: &CoveringPoint) -> FlatteningTriple {
    let z = pt.z;
    FlatteningTriple {
        w0: plog_nz(z) + I_PI * pt.p as f64,
        w1: pt.log_inv + I_PI * pt.q as f64,
        ledger: None,
    }
}

/// The ledger of a covering point over its own cross-ratio atoms.
pub(crate) fn point_ledger(pt: &CoveringPoint, index: u32) -> TripleLedger {
    let z = pt.z;
    let mut w0 = LogCombination::atom(Atom::new(AtomLabel::LogZ(index), plog_nz(z)));
    w0.add_atom(pt.p, Atom::PI_I);
    let mut w1 = LogCombination::atom(Atom::new(AtomLabel::LogInvOneMinusZ(index), pt.log_inv));
    w1.add_atom(pt.q, Atom::PI_I);
    TripleLedger { w0, w1 }
}

use serde::{Deserialize, Serialize};

use super::wedge::{LogCombination, WedgeElement, WedgeVerdict};
use super::{point_ledger, CoveringPoint, FlatteningTriple, TripleLedger};
use crate::error::{CcsError, Result};
use crate::geometry::{close, C64, ONE};
use crate::polylog::{lhat, vol};
use crate::tol::{TOL_CMP, TOL_FLAT, TOL_ZERO};

/// Integer combination of symbols `[z; p, q]`, normalized: no two terms share
/// a point (z within `TOL_CMP`, branches exactly) and no zero coefficients.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PreBlochElement {
    terms: Vec<(i64, CoveringPoint)>,
}

impl PreBlochElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn push(&mut self, coef: i64, pt: CoveringPoint) {
        if coef == 0 {
            return;
        }
        if let Some(pos) = self.terms.iter().position(|(_, q)| q.approx_eq(&pt, TOL_CMP)) {
            self.terms[pos].0 += coef;
            if self.terms[pos].0 == 0 {
                self.terms.remove(pos);
            }
        } else {
            self.terms.push((coef, pt));
        }
    }

    pub fn add(&mut self, coef: i64, other: &PreBlochElement) {
        for (c, pt) in &other.terms {
            self.push(coef * c, *pt);
        }
    }

    pub fn terms(&self) -> &[(i64, CoveringPoint)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// `sum coef * Lhat(point)`, not reduced.
    pub fn lhat_sum(&self) -> C64 {
        self.terms.iter().map(|(c, pt)| lhat(pt) * *c as f64).sum()
    }

    /// `sum coef * Vol(z)`.
    pub fn volume(&self) -> f64 {
        self.terms.iter().map(|(c, pt)| vol(pt.z()) * *c as f64).sum()
    }

    pub fn conj(&self) -> Self {
        let mut out = Self::zero();
        for (c, pt) in &self.terms {
            out.push(*c, pt.conj());
        }
        out
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PreBlochTerm {
    pub coef: i64,
    pub z: [f64; 2],
    pub p: i64,
    pub q: i64,
}

impl Serialize for PreBlochElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let terms: Vec<PreBlochTerm> = self
            .terms
            .iter()
            .map(|(c, pt)| PreBlochTerm {
                coef: *c,
                z: [pt.z().re, pt.z().im],
                p: pt.p(),
                q: pt.q(),
            })
            .collect();
        terms.serialize(s)
    }
}

impl<'de> Deserialize<'de> for PreBlochElement {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let terms = Vec::<PreBlochTerm>::deserialize(d)?;
        let mut e = PreBlochElement::zero();
        for t in terms {
            let pt = CoveringPoint::new(C64::new(t.z[0], t.z[1]), t.p, t.q).map_err(serde::de::Error::custom)?;
            e.push(t.coef, pt);
        }
        Ok(e)
    }
}

fn degenerate(z: C64) -> bool {
    !(z.re.is_finite() && z.im.is_finite()) || z.norm() <= TOL_ZERO || close(z, ONE, TOL_CMP)
}

/// `(x, y, y/x, (1 - 1/x)/(1 - 1/y), (1 - x)/(1 - y))`
pub fn five_tuple(x: C64, y: C64) -> Result<[C64; 5]> {
    if degenerate(x) {
        return Err(CcsError::DegenerateFiveTuple(0));
    }
    if degenerate(y) {
        return Err(CcsError::DegenerateFiveTuple(1));
    }
    let out = [
        x,
        y,
        y / x,
        (ONE - ONE / x) / (ONE - ONE / y),
        (ONE - x) / (ONE - y),
    ];
    for (i, v) in out.iter().enumerate().skip(2) {
        if degenerate(*v) {
            return Err(CcsError::DegenerateFiveTuple(i));
        }
    }
    Ok(out)
}

/// Edges of the five-point configuration, in the order the residuals are reported.
pub const EDGE_LABELS: [&str; 10] = [
    "z0z1", "z1z2", "z2z3", "z3z4", "z4z0", "z0z2", "z1z3", "z2z4", "z3z0", "z4z1",
];

/// Signed log-parameter sums around each edge: `(sign, simplex, component)`.
/// Simplex `i` omits vertex `i`; component `j` is `w_j`.
const EDGE_EQUATIONS: [[(i64, usize, usize); 3]; 10] = [
    [(1, 2, 0), (-1, 3, 0), (1, 4, 0)],
    [(1, 0, 0), (-1, 3, 1), (1, 4, 1)],
    [(1, 0, 1), (-1, 1, 1), (1, 4, 0)],
    [(1, 0, 0), (-1, 1, 0), (1, 2, 0)],
    [(-1, 1, 1), (1, 2, 1), (-1, 3, 1)],
    [(-1, 1, 0), (-1, 3, 2), (1, 4, 2)],
    [(1, 0, 2), (1, 2, 1), (1, 4, 2)],
    [(1, 0, 2), (-1, 1, 2), (-1, 3, 0)],
    [(-1, 1, 2), (1, 2, 2), (1, 4, 1)],
    [(1, 0, 1), (1, 2, 2), (-1, 3, 2)],
];

#[derive(Debug, Clone, Serialize)]
pub struct FlatteningReport {
    pub residuals: [f64; 10],
    pub max_residual: f64,
    pub holds: bool,
}

pub fn check_flattening_condition(t: &[FlatteningTriple; 5]) -> FlatteningReport {
    check_flattening_condition_with(t, TOL_FLAT)
}

pub fn check_flattening_condition_with(t: &[FlatteningTriple; 5], tol: f64) -> FlatteningReport {
    let mut residuals = [0.0; 10];
    for (r, eq) in residuals.iter_mut().zip(EDGE_EQUATIONS.iter()) {
        let s: C64 = eq.iter().map(|&(sign, i, j)| t[i].w()[j] * sign as f64).sum();
        *r = s.norm();
    }
    let max_residual = residuals.iter().cloned().fold(0.0, f64::max);
    FlatteningReport {
        residuals,
        max_residual,
        holds: max_residual <= tol,
    }
}

/// The ten edge sums computed in atoms; `true` iff all vanish identically.
pub fn flattening_condition_exact(ledgers: &[&TripleLedger; 5]) -> bool {
    let w: Vec<[LogCombination; 3]> = ledgers
        .iter()
        .map(|l| [l.w0.clone(), l.w1.clone(), l.w2()])
        .collect();
    EDGE_EQUATIONS.iter().all(|eq| {
        let mut s = LogCombination::zero();
        for &(sign, i, j) in eq {
            s.add_scaled(sign, &w[i][j]);
        }
        s.is_zero()
    })
}

/// `sum coef * (w0 ^ w1)` over ledger-backed flattenings.
pub fn nu_hat_ledger<'a>(terms: impl IntoIterator<Item = (i64, &'a FlatteningTriple)>) -> Option<WedgeElement> {
    let mut w = WedgeElement::zero();
    for (c, t) in terms {
        let l = t.ledger()?;
        w.add_wedge(c, &l.w0, &l.w1);
    }
    Some(w)
}

/// `[z; p, q] -> (Log z + p pi i) ^ (Log(1/(1-z)) + q pi i)` over per-point
/// atoms. Without provenance only the numeric verdict is meaningful: relations
/// between logarithms of different cross-ratios are invisible here.
pub fn nu_hat(e: &PreBlochElement) -> (WedgeElement, WedgeVerdict) {
    let mut distinct: Vec<C64> = Vec::new();
    let mut w = WedgeElement::zero();
    for (c, pt) in e.terms() {
        let idx = match distinct.iter().position(|z| close(*z, pt.z(), TOL_CMP)) {
            Some(i) => i,
            None => {
                distinct.push(pt.z());
                distinct.len() - 1
            }
        };
        let l = point_ledger(pt, idx as u32);
        w.add_wedge(*c, &l.w0, &l.w1);
    }
    let verdict = w.verdict(1e-9);
    (w, verdict)
}

#[cfg(test)]
mod tests {
    use super::super::{from_covering_point, Atom, AtomLabel};
    use super::*;
    use crate::polylog::{plog_nz, I_PI};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn principal(z: C64) -> FlatteningTriple {
        from_covering_point(&CoveringPoint::new(z, 0, 0).unwrap())
    }

    #[test]
    fn five_tuple_examples() {
        let t = five_tuple(c(0.5, 0.0), c(0.25, 0.0)).unwrap();
        let expected = [0.5, 0.25, 0.5, 1.0 / 3.0, 2.0 / 3.0];
        for (a, b) in t.iter().zip(expected) {
            assert!((a - c(b, 0.0)).norm() < 1e-15);
        }
        let t = five_tuple(c(2.0, 0.0), c(3.0, 0.0)).unwrap();
        let expected = [2.0, 3.0, 1.5, 0.75, 0.5];
        for (a, b) in t.iter().zip(expected) {
            assert!((a - c(b, 0.0)).norm() < 1e-15);
        }
        assert_eq!(five_tuple(c(0.4, 0.1), c(0.4, 0.1)), Err(CcsError::DegenerateFiveTuple(2)));
        assert_eq!(five_tuple(c(1.0, 0.0), c(0.4, 0.1)), Err(CcsError::DegenerateFiveTuple(0)));
    }

    #[test]
    fn principal_flattenings_on_real_five_tuples() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..200 {
            let x: f64 = rng.gen_range(0.05..0.95);
            let y: f64 = rng.gen_range(0.01..x - 0.01);
            let ft = five_tuple(x.into(), y.into()).unwrap();
            let triples = ft.map(principal);
            let rep = check_flattening_condition(&triples);
            assert!(rep.holds, "{:?}", rep.residuals);
        }
    }

    #[test]
    fn perturbation_breaks_an_edge() {
        let ft = five_tuple(c(0.6, 0.0), c(0.2, 0.0)).unwrap();
        let mut triples = ft.map(principal);
        triples[0] = triples[0].perturbed(c(0.0, 2.0 * std::f64::consts::PI));
        let rep = check_flattening_condition(&triples);
        assert!(!rep.holds);
        let two_pi = 2.0 * std::f64::consts::PI;
        assert!(rep.residuals.iter().any(|r| (r - two_pi).abs() < 1e-12));
    }

    #[test]
    fn element_normalization() {
        let z = c(0.3, 0.2);
        let mut e = PreBlochElement::zero();
        e.push(2, CoveringPoint::new(z, 0, 0).unwrap());
        e.push(-2, CoveringPoint::new(z + c(1e-12, 0.0), 0, 0).unwrap());
        assert!(e.is_empty());
        e.push(1, CoveringPoint::new(z, 0, 0).unwrap());
        e.push(1, CoveringPoint::new(z, 0, 2).unwrap());
        assert_eq!(e.len(), 2);
        e.push(0, CoveringPoint::new(z, 2, 2).unwrap());
        assert_eq!(e.len(), 2);
    }

    #[test]
    fn element_json_shape() {
        let mut e = PreBlochElement::zero();
        e.push(3, CoveringPoint::new(c(0.5, -0.25), 2, -4).unwrap());
        let s = serde_json::to_string(&e).unwrap();
        assert_eq!(s, r#"[{"coef":3,"z":[0.5,-0.25],"p":2,"q":-4}]"#);
        let back: PreBlochElement = serde_json::from_str(&s).unwrap();
        assert_eq!(back, e);
        assert!(serde_json::from_str::<PreBlochElement>(r#"[{"coef":1,"z":[0.5,0],"p":1,"q":0}]"#).is_err());
    }

    #[test]
    fn nu_hat_self_wedge_vanishes() {
        // w0 and w1 built from the same atom
        let a = Atom::new(AtomLabel::Class(0), c(0.2, 0.1));
        let t = TripleLedger {
            w0: LogCombination::atom(a),
            w1: LogCombination::atom(a),
        };
        let w = WedgeElement::wedge(&t.w0, &t.w1);
        assert!(w.is_zero());
    }

    #[test]
    fn nu_hat_branch_shift() {
        let z = c(0.7, -1.3);
        let (p, q) = (2, -4);
        let mut e = PreBlochElement::zero();
        e.push(1, CoveringPoint::new(z, p, q).unwrap());
        e.push(-1, CoveringPoint::new(z, p, q + 2).unwrap());
        let (w, _) = nu_hat(&e);
        let mut expected = WedgeElement::zero();
        let mut w0 = LogCombination::atom(Atom::new(AtomLabel::LogZ(0), plog_nz(z)));
        w0.add_atom(p, Atom::PI_I);
        expected.add_wedge(-2, &w0, &LogCombination::pi_i(1));
        assert_eq!(w.minus(&expected), WedgeElement::zero());
        let numeric = -(plog_nz(z) + I_PI * p as f64).conj() * (I_PI * 2.0);
        assert!((w.numeric_invariant() - numeric.im).abs() < 1e-12);
    }

    #[test]
    fn nu_hat_of_single_generic_point_is_nonzero() {
        let mut e = PreBlochElement::zero();
        e.push(1, CoveringPoint::new(c(0.3, 0.8), 0, 0).unwrap());
        assert_eq!(nu_hat(&e).1, WedgeVerdict::Nonzero);
    }
}

//! Configurations of vectors in `C^2 \ {0}` with pairwise distinct Hopf
//! images, and their flattenings by logarithms of determinants.

use serde::Serialize;

use crate::bar::{hom_boundary, hom_to_inhom, BarChain, HomChain};
use crate::bloch::{
    check_flattening_condition, five_tuple, flattening_condition_exact, nu_hat_ledger, to_covering_point, Atom,
    AtomLabel, CoveringPoint, FlatteningReport, FlatteningTriple, LogCombination, TripleLedger, WedgeElement,
};
use crate::error::{CcsError, Result};
use crate::geometry::{det_pair, GroupElement, ProjVector, C64};
use crate::polylog::{dist_to_lattice, lhat, plog_nz, TWO_PI_SQ};
use crate::tol::{TOL_CMP, TOL_VGOOD};

/// `|det(v, w)| > tol |v| |w|`
pub fn transverse(v: &ProjVector, w: &ProjVector, tol: f64) -> bool {
    det_pair(v, w).norm() > tol * v.norm() * w.norm()
}

/// Up to five vectors, pairwise transverse.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigTuple {
    vectors: Vec<ProjVector>,
}

impl ConfigTuple {
    pub fn new(vectors: Vec<ProjVector>) -> Result<Self> {
        Self::with_tolerance(vectors, TOL_VGOOD)
    }

    pub fn with_tolerance(vectors: Vec<ProjVector>, tol: f64) -> Result<Self> {
        if vectors.len() > 5 {
            return Err(CcsError::DegreeOutOfRange(vectors.len().saturating_sub(1)));
        }
        for i in 0..vectors.len() {
            for j in i + 1..vectors.len() {
                if !transverse(&vectors[i], &vectors[j], tol) {
                    return Err(CcsError::DegenerateConfig(i, j));
                }
            }
        }
        Ok(Self { vectors })
    }

    pub fn vectors(&self) -> &[ProjVector] {
        &self.vectors
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    /// Drops vector `i`.
    pub fn face(&self, i: usize) -> ConfigTuple {
        let mut v = self.vectors.clone();
        v.remove(i);
        ConfigTuple { vectors: v }
    }

    /// Atom `(i, j)` for `Log det(v_i, v_j)`, indices as given.
    fn pair_log(&self, i: usize, j: usize) -> LogCombination {
        let d = det_pair(&self.vectors[i], &self.vectors[j]);
        LogCombination::atom(Atom::new(AtomLabel::Pair(i as u32, j as u32), plog_nz(d)))
    }
}

/// Flattening from the six log-determinants of a 4-tuple, with `pair(i, j)`
/// (for `i < j`) supplying `Log det(v_i, v_j)` as a combination of atoms.
pub fn flattening_from_logs<F>(mut pair: F) -> Result<FlatteningTriple>
where
    F: FnMut(usize, usize) -> LogCombination,
{
    let l01 = pair(0, 1);
    let l02 = pair(0, 2);
    let l03 = pair(0, 3);
    let l12 = pair(1, 2);
    let l13 = pair(1, 3);
    let l23 = pair(2, 3);
    let w0 = l03.plus(&l12).minus(&l02).minus(&l13);
    let w1 = l02.plus(&l13).minus(&l01).minus(&l23);
    FlatteningTriple::from_ledger(TripleLedger { w0, w1 })
}

/// The log-determinant flattening of the ideal simplex spanned by the Hopf
/// images of four vectors.
pub fn sigma_hat(t: &ConfigTuple) -> Result<FlatteningTriple> {
    if t.len() != 4 {
        return Err(CcsError::DegreeMismatch {
            expected: 3,
            found: t.len().saturating_sub(1),
        });
    }
    flattening_from_logs(|i, j| t.pair_log(i, j))
}

/// `(01) ^ (02) - (01) ^ (12) + (02) ^ (12)` from three log-determinants.
pub fn mu_from_logs(l01: &LogCombination, l02: &LogCombination, l12: &LogCombination) -> WedgeElement {
    let mut w = WedgeElement::zero();
    w.add_wedge(1, l01, l02);
    w.add_wedge(-1, l01, l12);
    w.add_wedge(1, l02, l12);
    w
}

pub fn mu(t: &ConfigTuple) -> Result<WedgeElement> {
    if t.len() != 3 {
        return Err(CcsError::DegreeMismatch {
            expected: 2,
            found: t.len().saturating_sub(1),
        });
    }
    Ok(mu_from_logs(&t.pair_log(0, 1), &t.pair_log(0, 2), &t.pair_log(1, 2)))
}

/// Flattenings of the five faces of a five-vector configuration, each with
/// atoms indexed by the parent tuple so that shared edges share atoms.
pub fn face_flattenings(t: &ConfigTuple) -> Result<[FlatteningTriple; 5]> {
    if t.len() != 5 {
        return Err(CcsError::DegreeMismatch {
            expected: 4,
            found: t.len().saturating_sub(1),
        });
    }
    let mut out = Vec::with_capacity(5);
    for omit in 0..5 {
        let idx: Vec<usize> = (0..5).filter(|k| *k != omit).collect();
        out.push(flattening_from_logs(|i, j| t.pair_log(idx[i], idx[j]))?);
    }
    Ok(out.try_into().expect("five faces"))
}

/// `sum (-1)^i Lhat(sigma_hat(face_i))` over a five-vector configuration.
pub fn lifted_five_term_sum(t: &ConfigTuple) -> Result<C64> {
    let mut s = C64::new(0.0, 0.0);
    for (i, f) in face_flattenings(t)?.iter().enumerate() {
        let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
        s += lhat(&to_covering_point(f)?) * sign;
    }
    Ok(s)
}

/// `nu_hat(sigma_hat(t)) - mu(d t)` for four vectors, in atoms.
pub fn nu_sigma_defect(t: &ConfigTuple) -> Result<WedgeElement> {
    let f = sigma_hat(t)?;
    let mut w = nu_hat_ledger([(1, &f)]).ok_or(CcsError::InvalidFlattening)?;
    for omit in 0..4 {
        let idx: Vec<usize> = (0..4).filter(|k| *k != omit).collect();
        let m = mu_from_logs(
            &t.pair_log(idx[0], idx[1]),
            &t.pair_log(idx[0], idx[2]),
            &t.pair_log(idx[1], idx[2]),
        );
        w.add(if omit % 2 == 0 { -1 } else { 1 }, &m);
    }
    Ok(w)
}

/// A lift of `v` to SL(2,C): a matrix whose first column is `v`.
pub fn lift_vector(v: &ProjVector) -> GroupElement {
    let (v1, v2) = (v.v1, v.v2);
    let one = C64::new(1.0, 0.0);
    let zero = C64::new(0.0, 0.0);
    if v1.norm() >= v2.norm() {
        GroupElement::from_entries_unchecked(v1, zero, v2, one / v1)
    } else {
        GroupElement::from_entries_unchecked(v1, -one / v2, v2, zero)
    }
}

/// The five-term relation realized by a configuration and by a bar cycle.
#[derive(Debug, Clone, Serialize)]
pub struct FiveTermFixture {
    pub x: C64,
    pub y: C64,
    /// `(x, y, y/x, (1 - 1/x)/(1 - 1/y), (1 - x)/(1 - y))`
    pub expected: [C64; 5],
    /// Hopf images `inf, 0, 1, (y-1)/(x-1), x(y-1)/(y(x-1))`.
    pub vectors: Vec<ProjVector>,
    pub points: Vec<CoveringPoint>,
    /// Largest relative gap between a face cross-ratio and `expected`.
    pub cross_ratio_residual: f64,
    pub flattening: FlatteningReport,
    pub flattening_exact: bool,
    pub lhat_sum: C64,
    /// Distance of `lhat_sum` to `2 pi^2 Z`.
    pub lattice_residual: f64,
    /// Inhomogeneous boundary of the 4-simplex of lifts; a 3-cycle.
    pub cycle: BarChain,
}

impl FiveTermFixture {
    pub fn holds(&self, tol: f64) -> bool {
        self.cross_ratio_residual < tol && self.flattening.holds && self.flattening_exact && self.lattice_residual < tol
    }
}

pub fn five_term_fixture(x: C64, y: C64) -> Result<FiveTermFixture> {
    let expected = five_tuple(x, y)?;
    let one = C64::new(1.0, 0.0);
    let a = (y - one) / (x - one);
    let b = x * (y - one) / (y * (x - one));
    let vectors = vec![
        ProjVector::new(one, C64::new(0.0, 0.0))?,
        ProjVector::new(C64::new(0.0, 0.0), one)?,
        ProjVector::new(one, one)?,
        ProjVector::new(a, one)?,
        ProjVector::new(b, one)?,
    ];
    let t = ConfigTuple::with_tolerance(vectors.clone(), TOL_CMP)?;
    let faces = face_flattenings(&t)?;
    let mut points = Vec::with_capacity(5);
    let mut cross_ratio_residual: f64 = 0.0;
    for (f, e) in faces.iter().zip(expected.iter()) {
        let z = f.cross_ratio();
        cross_ratio_residual = cross_ratio_residual.max((z - e).norm() / e.norm().max(1.0));
        points.push(to_covering_point(f)?);
    }
    let ledgers: Vec<&TripleLedger> = faces.iter().map(|f| f.ledger().expect("atom-backed")).collect();
    let flattening_exact = flattening_condition_exact(&[ledgers[0], ledgers[1], ledgers[2], ledgers[3], ledgers[4]]);
    let lhat_sum = lifted_five_term_sum(&t)?;
    let simplex: Vec<GroupElement> = vectors.iter().map(lift_vector).collect();
    let cycle = hom_to_inhom(&hom_boundary(&HomChain::new(4, vec![(1, simplex)])?)?);
    Ok(FiveTermFixture {
        x,
        y,
        expected,
        vectors,
        points,
        cross_ratio_residual,
        flattening: check_flattening_condition(&faces),
        flattening_exact,
        lhat_sum,
        lattice_residual: dist_to_lattice(lhat_sum.re, TWO_PI_SQ).hypot(lhat_sum.im),
        cycle,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn v(a: f64, b: f64) -> ProjVector {
        ProjVector::real(a, b).unwrap()
    }

    #[test]
    fn sigma_hat_example_at_two() {
        let t = ConfigTuple::new(vec![v(1.0, 0.0), v(0.0, 1.0), v(1.0, 1.0), v(1.0, 2.0)]).unwrap();
        let f = sigma_hat(&t).unwrap();
        assert!((f.w0() - C64::new(2f64.ln(), 0.0)).norm() < 1e-15);
        assert!((f.w1() - C64::new(0.0, PI)).norm() < 1e-15);
        let pt = to_covering_point(&f).unwrap();
        assert!((pt.z() - C64::new(2.0, 0.0)).norm() < 1e-15);
        assert_eq!((pt.p(), pt.q()), (0, 0));
    }

    #[test]
    fn sigma_hat_example_generic() {
        let z = C64::new(0.3, 0.4);
        let last = ProjVector::new(1.0.into(), z).unwrap();
        let t = ConfigTuple::new(vec![v(1.0, 0.0), v(0.0, 1.0), v(1.0, 1.0), last]).unwrap();
        let pt = to_covering_point(&sigma_hat(&t).unwrap()).unwrap();
        assert!((pt.z() - z).norm() < 1e-14);
        assert_eq!((pt.p(), pt.q()), (0, 0));
    }

    #[test]
    fn rescaling_moves_within_the_fiber() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..100 {
            let vs: Vec<ProjVector> = (0..4).map(|_| ProjVector::random(&mut rng)).collect();
            let t = ConfigTuple::new(vs.clone()).unwrap();
            let mut scaled = vs;
            scaled[3] = scaled[3].scale(C64::new(-5.0, 0.3));
            let s = ConfigTuple::new(scaled).unwrap();
            let a = to_covering_point(&sigma_hat(&t).unwrap()).unwrap();
            let b = to_covering_point(&sigma_hat(&s).unwrap()).unwrap();
            assert!((a.z() - b.z()).norm() < 1e-9 * a.z().norm().max(1.0));
            assert_eq!((a.p() - b.p()) % 2, 0);
        }
    }

    #[test]
    fn degenerate_configuration() {
        let r = ConfigTuple::new(vec![v(1.0, 0.0), v(0.0, 1.0), v(2.0, 0.0)]);
        assert_eq!(r, Err(CcsError::DegenerateConfig(0, 2)));
    }

    #[test]
    fn mu_example_is_three_symbolic_terms() {
        let t = ConfigTuple::new(vec![v(1.0, 0.0), v(0.0, 1.0), v(1.0, 1.0)]).unwrap();
        let w = mu(&t).unwrap();
        assert_eq!(w.len(), 3);
        assert!(w.numeric_invariant().abs() < 1e-15);
        assert_eq!(mu(&t).unwrap(), w);
    }

    #[test]
    fn flattening_condition_on_random_configurations() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..200 {
            let vs: Vec<ProjVector> = (0..5).map(|_| ProjVector::random(&mut rng)).collect();
            let t = ConfigTuple::new(vs).unwrap();
            let faces = face_flattenings(&t).unwrap();
            let rep = check_flattening_condition(&faces);
            assert!(rep.max_residual < 1e-8, "{:?}", rep.residuals);
            let ledgers: Vec<&TripleLedger> = faces.iter().map(|f| f.ledger().unwrap()).collect();
            assert!(crate::bloch::flattening_condition_exact(&[
                ledgers[0], ledgers[1], ledgers[2], ledgers[3], ledgers[4]
            ]));
        }
    }

    #[test]
    fn lifted_five_term_relation_on_configurations() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..200 {
            let vs: Vec<ProjVector> = (0..5).map(|_| ProjVector::random(&mut rng)).collect();
            let t = ConfigTuple::new(vs).unwrap();
            let s = lifted_five_term_sum(&t).unwrap();
            // the lifted dilogarithm is single valued only modulo 2 pi^2
            let d = crate::polylog::dist_to_lattice(s.re, crate::polylog::TWO_PI_SQ).hypot(s.im);
            assert!(d < 1e-9, "{s}");
        }
    }

    #[test]
    fn nu_sigma_equals_mu_boundary() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..100 {
            let vs: Vec<ProjVector> = (0..4).map(|_| ProjVector::random(&mut rng)).collect();
            let t = ConfigTuple::new(vs).unwrap();
            let d = nu_sigma_defect(&t).unwrap();
            assert!(d.is_zero(), "{d}");
        }
    }

    #[test]
    fn five_term_fixture_matches_the_five_tuple() {
        let mut rng = ChaCha8Rng::seed_from_u64(30);
        for _ in 0..50 {
            let x = C64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
            let y = C64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
            let f = five_term_fixture(x, y).unwrap();
            assert!(f.holds(1e-8), "{f:?}");
            assert!(crate::bar::is_cycle(&f.cycle).0);
            assert_eq!(f.cycle.len(), 5);
        }
    }

    #[test]
    fn five_term_fixture_on_the_real_simplex_is_principal() {
        let f = five_term_fixture(C64::new(0.7, 0.0), C64::new(0.4, 0.0)).unwrap();
        assert!(f.lhat_sum.norm() < 1e-12);
    }

    #[test]
    fn five_term_fixture_rejects_degenerate_input() {
        assert!(five_term_fixture(C64::new(1.0, 0.0), C64::new(0.3, 0.0)).is_err());
        assert!(five_term_fixture(C64::new(0.3, 0.0), C64::new(0.3, 0.0)).is_err());
    }
}

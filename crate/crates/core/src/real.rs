//! SL(2,R): positivity, the order `g1 < g2 iff g1^{-1} g2` is positive,
//! sorting of tuples, the Rogers cocycle, and the agreement of the lifted
//! and real dilogarithms on small positive triples.

use rand::Rng;
use serde::Serialize;

use crate::bloch::to_covering_point;
use crate::config::{sigma_hat, ConfigTuple};
use crate::error::{CcsError, Result};
use crate::geometry::{cross_ratio_ext, det_pair, ExtComplex, GroupElement, ProjVector, C64};
use crate::polylog::{lhat, rogers_l_real};
use crate::tol::{TOL_DET, TOL_ZERO};

/// The matrix `((a, b), (c, d))` with `ad - bc = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RealGroupElement {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl RealGroupElement {
    pub const IDENTITY: RealGroupElement = RealGroupElement {
        a: 1.0,
        b: 0.0,
        c: 0.0,
        d: 1.0,
    };

    // negated comparisons below also reject NaN
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        let det = a * d - b * c;
        if !((det - 1.0).abs() <= TOL_DET) {
            return Err(CcsError::Determinant {
                det: format!("{det}"),
                tol: TOL_DET,
            });
        }
        Ok(Self { a, b, c, d })
    }

    /// Fails when an entry has imaginary part above `tol_zero`.
    pub fn from_complex(g: &GroupElement) -> Result<Self> {
        if g.entries().iter().any(|z| z.im.abs() > TOL_ZERO) {
            return Err(CcsError::PreconditionFailed("matrix is not real".into()));
        }
        Self::new(g.a.re, g.b.re, g.c.re, g.d.re)
    }

    pub fn to_complex(&self) -> GroupElement {
        GroupElement::real(self.a, self.b, self.c, self.d).expect("determinant checked on construction")
    }

    pub fn inverse(&self) -> Self {
        Self {
            a: self.d,
            b: -self.b,
            c: -self.c,
            d: self.a,
        }
    }

    pub fn mul(&self, r: &Self) -> Self {
        Self {
            a: self.a * r.a + self.b * r.c,
            b: self.a * r.b + self.b * r.d,
            c: self.c * r.a + self.d * r.c,
            d: self.c * r.b + self.d * r.d,
        }
    }

    pub fn is_positive(&self) -> bool {
        self.c > TOL_ZERO
    }

    pub fn is_nonzero(&self) -> bool {
        self.c.abs() > TOL_ZERO
    }

    /// `g infinity = a / c`.
    pub fn at_infinity(&self) -> ExtComplex {
        if self.c.abs() <= TOL_ZERO {
            ExtComplex::Infinity
        } else {
            ExtComplex::Finite(C64::new(self.a / self.c, 0.0))
        }
    }

    /// Random element with entries uniform in `[-1, 1]`, normalized to
    /// determinant one through the first column.
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        loop {
            let e: [f64; 4] = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
            let det = e[0] * e[3] - e[1] * e[2];
            if det.abs() < 0.1 {
                continue;
            }
            // a negative determinant is fixed by swapping the columns
            let (a, b, c, d) = if det > 0.0 {
                (e[0], e[1], e[2], e[3])
            } else {
                (e[1], e[0], e[3], e[2])
            };
            let det = det.abs();
            return Self {
                a: a / det,
                b,
                c: c / det,
                d,
            };
        }
    }
}

/// `g1 < g2` iff `g1^{-1} g2` is positive.
pub fn less(g1: &RealGroupElement, g2: &RealGroupElement) -> Result<bool> {
    let q = g1.inverse().mul(g2);
    if !q.is_nonzero() {
        return Err(CcsError::Incomparable);
    }
    Ok(q.is_positive())
}

/// The permutation `s` with `g_{s(0)} < ... < g_{s(n)}`, found by bubble
/// sort and verified on all pairs.
pub fn sort_tuple(gs: &[RealGroupElement]) -> Result<Vec<usize>> {
    let mut perm: Vec<usize> = (0..gs.len()).collect();
    for pass in 0..gs.len() {
        let mut swapped = false;
        for i in 0..gs.len().saturating_sub(pass + 1) {
            if less(&gs[perm[i + 1]], &gs[perm[i]])? {
                perm.swap(i, i + 1);
                swapped = true;
            }
        }
        if !swapped {
            break;
        }
    }
    for i in 0..perm.len() {
        for j in i + 1..perm.len() {
            if !less(&gs[perm[i]], &gs[perm[j]])? {
                return Err(CcsError::NotSortable);
            }
        }
    }
    Ok(perm)
}

/// `L([g0 inf : g1 inf : g2 inf : g3 inf])` with the real extension of `L`
/// and the cross-ratio set to zero on repeated points.
pub fn rogers_cocycle(g: &[RealGroupElement; 4]) -> f64 {
    let p = g.map(|x| x.at_infinity());
    rogers_l_real(cross_ratio_ext(p[0], p[1], p[2], p[3]).re)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SmallPositiveReport {
    pub z: f64,
    pub p: i64,
    pub q: i64,
    pub lhat: C64,
    pub rogers: f64,
    /// `|lhat(z; 0, 0) - L(z)|`
    pub agreement: f64,
}

/// Checks the properties of `(v, g1 v, g1 g2 v, g1 g2 g3 v)` for `v = (1, 0)`
/// and compares the lifted dilogarithm of its flattening with the Rogers
/// cocycle of the tuple.
#[allow(clippy::neg_cmp_op_on_partial_ord)]
pub fn check_small_positive_agreement(
    g1: &RealGroupElement,
    g2: &RealGroupElement,
    g3: &RealGroupElement,
) -> Result<SmallPositiveReport> {
    for (name, g) in [("g1", g1), ("g2", g2), ("g3", g3)] {
        if !g.is_positive() {
            return Err(CcsError::PreconditionFailed(format!("{name} is not positive")));
        }
    }
    let tuple = [RealGroupElement::IDENTITY, *g1, g1.mul(g2), g1.mul(g2).mul(g3)];

    // inf > g1 inf > g1 g2 inf > g1 g2 g3 inf
    let mut last = f64::INFINITY;
    for (i, g) in tuple.iter().enumerate().skip(1) {
        let x = match g.at_infinity() {
            ExtComplex::Finite(x) => x.re,
            ExtComplex::Infinity => f64::INFINITY,
        };
        if !(x < last) {
            return Err(CcsError::PreconditionFailed(format!(
                "boundary points are not decreasing at position {i}"
            )));
        }
        last = x;
    }

    let vs: Vec<ProjVector> = tuple
        .iter()
        .map(|g| ProjVector::real(g.a, g.c).expect("first column of an invertible matrix"))
        .collect();
    for i in 0..4 {
        for j in i + 1..4 {
            if !(det_pair(&vs[i], &vs[j]).re > TOL_ZERO) {
                return Err(CcsError::PreconditionFailed(format!("det(v{i}, v{j}) is not positive")));
            }
        }
    }
    for (name, g) in [("g1 g2", g1.mul(g2)), ("g2 g3", g2.mul(g3)), ("g1 g2 g3", tuple[3])] {
        if !g.is_positive() {
            return Err(CcsError::PreconditionFailed(format!("{name} is not positive")));
        }
    }

    let config = ConfigTuple::new(vs).map_err(|e| CcsError::PreconditionFailed(format!("configuration: {e}")))?;
    let pt = to_covering_point(&sigma_hat(&config)?)?;
    let z = pt.z();
    if pt.p() != 0 || pt.q() != 0 {
        return Err(CcsError::PreconditionFailed(format!(
            "flattening lies over ({}, {}) instead of (0, 0)",
            pt.p(),
            pt.q()
        )));
    }
    if !(z.im == 0.0 && z.re > 0.0 && z.re < 1.0) {
        return Err(CcsError::PreconditionFailed(format!("cross-ratio {z} is not in (0, 1)")));
    }
    let lh = lhat(&pt);
    let rogers = rogers_cocycle(&tuple);
    Ok(SmallPositiveReport {
        z: z.re,
        p: pt.p(),
        q: pt.q(),
        lhat: lh,
        rogers,
        agreement: (lh - C64::new(rogers, 0.0)).norm(),
    })
}

/// A positive element with entries within 0.2 of the identity.
pub fn small_positive<R: Rng + ?Sized>(rng: &mut R) -> RealGroupElement {
    loop {
        let a = rng.gen_range(0.8..1.2);
        let b = rng.gen_range(-0.2..0.2);
        let c = rng.gen_range(0.0..0.2);
        if c <= TOL_ZERO {
            continue;
        }
        let d = (1.0 + b * c) / a;
        if (d - 1.0).abs() < 0.2 {
            return RealGroupElement { a, b, c, d };
        }
    }
}

/// A small positive triple whose products `g1 g2`, `g2 g3`, `g1 g2 g3` are
/// positive, with the number of rejected draws.
pub fn small_positive_triple<R: Rng + ?Sized>(rng: &mut R) -> ([RealGroupElement; 3], usize) {
    let mut rejected = 0;
    loop {
        let g = [small_positive(rng), small_positive(rng), small_positive(rng)];
        let ok = g[0].mul(&g[1]).is_positive()
            && g[1].mul(&g[2]).is_positive()
            && g[0].mul(&g[1]).mul(&g[2]).is_positive();
        if ok {
            return (g, rejected);
        }
        rejected += 1;
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RealCheckSummary {
    pub samples: usize,
    pub passed: usize,
    pub rejected_draws: usize,
    pub max_agreement: f64,
    pub failures: Vec<String>,
}

/// Runs the agreement check on `samples` small positive triples.
pub fn real_check<R: Rng + ?Sized>(samples: usize, rng: &mut R) -> RealCheckSummary {
    let mut s = RealCheckSummary {
        samples,
        passed: 0,
        rejected_draws: 0,
        max_agreement: 0.0,
        failures: Vec::new(),
    };
    for i in 0..samples {
        let (g, rej) = small_positive_triple(rng);
        s.rejected_draws += rej;
        match check_small_positive_agreement(&g[0], &g[1], &g[2]) {
            Ok(r) => {
                s.passed += 1;
                s.max_agreement = s.max_agreement.max(r.agreement);
            }
            Err(e) => s.failures.push(format!("sample {i}: {e}")),
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polylog::{dist_to_lattice, PI2_6};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn r(a: f64, b: f64, c: f64, d: f64) -> RealGroupElement {
        RealGroupElement::new(a, b, c, d).unwrap()
    }

    #[test]
    fn positivity_examples() {
        assert!(r(1.0, 0.0, 1.0, 1.0).is_positive());
        assert!(!r(1.0, 1.0, 0.0, 1.0).is_nonzero());
        let g = r(1.0, 0.0, -1.0, 1.0);
        assert!(g.is_nonzero() && !g.is_positive());
    }

    #[test]
    fn order_examples() {
        let g1 = r(1.0, 0.0, 1.0, 1.0);
        let g2 = r(1.0, 0.0, 2.0, 1.0);
        assert!(less(&g1, &g2).unwrap());
        assert!(!less(&g2, &g1).unwrap());
        assert_eq!(less(&g1, &g1), Err(CcsError::Incomparable));
    }

    #[test]
    fn order_is_antisymmetric() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut checked = 0;
        while checked < 1000 {
            let (g, h) = (RealGroupElement::random(&mut rng), RealGroupElement::random(&mut rng));
            if let (Ok(x), Ok(y)) = (less(&g, &h), less(&h, &g)) {
                assert!(x != y);
                checked += 1;
            }
        }
    }

    #[test]
    fn sorting() {
        let g: Vec<RealGroupElement> = [1.0, 2.0, 3.0].iter().map(|c| r(1.0, 0.0, *c, 1.0)).collect();
        assert_eq!(sort_tuple(&g).unwrap(), vec![0, 1, 2]);
        let rev: Vec<RealGroupElement> = g.iter().rev().cloned().collect();
        assert_eq!(sort_tuple(&rev).unwrap(), vec![2, 1, 0]);

        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..200 {
            // partial products of small positive elements, shuffled
            let mut acc = RealGroupElement::IDENTITY;
            let mut tuple = vec![acc];
            for _ in 0..4 {
                acc = acc.mul(&small_positive(&mut rng));
                tuple.push(acc);
            }
            let perm = [3usize, 0, 4, 2, 1];
            let shuffled: Vec<RealGroupElement> = perm.iter().map(|&i| tuple[i]).collect();
            let s = sort_tuple(&shuffled).unwrap();
            let sorted: Vec<RealGroupElement> = s.iter().map(|&i| shuffled[i]).collect();
            assert_eq!(sorted, tuple);
            assert_eq!(sort_tuple(&sorted).unwrap(), vec![0, 1, 2, 3, 4]);
        }
    }

    #[test]
    fn unsortable_tuples_are_reported() {
        // three elements whose pairwise order is cyclic
        let rot = |t: f64| r(t.cos(), -t.sin(), t.sin(), t.cos());
        let g = [rot(0.0), rot(2.0), rot(4.0)];
        let res = sort_tuple(&g);
        assert!(matches!(res, Err(CcsError::NotSortable) | Err(CcsError::Incomparable)), "{res:?}");
    }

    #[test]
    fn cocycle_zero_convention() {
        let g = r(1.0, 0.0, 1.0, 1.0);
        let h = r(1.0, 5.0, 1.0, 6.0);
        // g inf = h inf = 1
        let v = rogers_cocycle(&[g, h, r(2.0, 0.0, 1.0, 0.5), r(0.0, -1.0, 1.0, 3.0)]);
        assert_eq!(v, -PI2_6);
        assert!(dist_to_lattice(v, PI2_6) < 1e-15);
    }

    #[test]
    fn cocycle_modulo_pi_squared_over_six() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let g: [RealGroupElement; 5] = std::array::from_fn(|_| RealGroupElement::random(&mut rng));
            let mut s = 0.0;
            for omit in 0..5 {
                let f: Vec<RealGroupElement> = (0..5).filter(|k| *k != omit).map(|k| g[k]).collect();
                let sign = if omit % 2 == 0 { 1.0 } else { -1.0 };
                s += sign * rogers_cocycle(&[f[0], f[1], f[2], f[3]]);
            }
            assert!(dist_to_lattice(s, PI2_6) < 1e-9, "{s}");
        }
    }

    #[test]
    fn small_positive_agreement() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let s = real_check(500, &mut rng);
        assert_eq!(s.passed, 500, "{:?}", s.failures);
        assert!(s.max_agreement < 1e-12);
    }

    #[test]
    fn small_positive_tuple_lies_in_unit_interval() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let (g, _) = small_positive_triple(&mut rng);
        let r = check_small_positive_agreement(&g[0], &g[1], &g[2]).unwrap();
        assert!(r.z > 0.0 && r.z < 1.0);
        assert_eq!((r.p, r.q), (0, 0));
    }

    #[test]
    fn violated_bullets_are_named() {
        let g = r(1.0, 0.0, 0.1, 1.0);
        let bad = r(1.0, 0.0, -0.1, 1.0);
        let e = check_small_positive_agreement(&g, &bad, &g).unwrap_err();
        assert_eq!(e, CcsError::PreconditionFailed("g2 is not positive".into()));

        // a large positive rotation: the boundary points stop decreasing
        let t: f64 = 1.2;
        let big = r(t.cos(), -t.sin(), t.sin(), t.cos());
        let e = check_small_positive_agreement(&big, &big, &big).unwrap_err();
        match e {
            CcsError::PreconditionFailed(m) => assert!(m.contains("decreasing"), "{m}"),
            other => panic!("{other:?}"),
        }
    }
}

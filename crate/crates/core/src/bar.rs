//! Inhomogeneous and homogeneous chains of SL(2,C) with integer coefficients.
//!
//! Symbols are compared up to `tol_cmp`. Normalization sorts terms by a
//! scalar key and merges neighbours whose matrices agree, so a chain has no
//! two approximately equal symbols and no zero coefficients.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{CcsError, Result};
use crate::geometry::{det_pair, rotation, GroupElement, ProjVector};
use crate::tol::{TOL_CMP, TOL_VGOOD};

pub const MAX_DEGREE: usize = 4;

pub const SAMPLING_ATTEMPTS: usize = 1000;

pub type Term = (i64, Vec<GroupElement>);

fn sort_key(sym: &[GroupElement]) -> (f64, f64) {
    let mut key = 0.0;
    let mut scale = 0.0;
    for (j, g) in sym.iter().enumerate() {
        for (e, z) in g.entries().iter().enumerate() {
            let w = 1.0 + 0.137 * (4 * j + e) as f64;
            key += w * (z.re + 0.618_033_988_7 * z.im);
            scale += 2.0 * w * z.norm().max(1.0);
        }
    }
    (key, scale)
}

fn same_symbol(x: &[GroupElement], y: &[GroupElement], tol: f64) -> bool {
    x.len() == y.len() && x.iter().zip(y).all(|(a, b)| a.approx_eq(b, tol))
}

/// Merges approximately equal symbols and drops zero coefficients. The
/// result is sorted by the scalar key, so it does not depend on input order
/// beyond ties.
pub(crate) fn normalize_terms(terms: Vec<Term>, tol: f64) -> Vec<Term> {
    let mut keyed: Vec<(f64, f64, Term)> = terms
        .into_iter()
        .filter(|t| t.0 != 0)
        .map(|t| {
            let (k, s) = sort_key(&t.1);
            (k, s, t)
        })
        .collect();
    keyed.sort_by(|a, b| a.0.total_cmp(&b.0));
    let window = tol * keyed.iter().map(|t| t.1).fold(0.0, f64::max);
    let mut out: Vec<(f64, Term)> = Vec::with_capacity(keyed.len());
    for (k, _, (coef, sym)) in keyed {
        let mut merged = false;
        for (ko, (co, so)) in out.iter_mut().rev() {
            if *ko < k - window {
                break;
            }
            if same_symbol(so, &sym, tol) {
                *co += coef;
                merged = true;
                break;
            }
        }
        if !merged {
            out.push((k, (coef, sym)));
        }
    }
    out.into_iter().map(|(_, t)| t).filter(|t| t.0 != 0).collect()
}

fn check_degree(degree: usize) -> Result<()> {
    if degree > MAX_DEGREE {
        return Err(CcsError::DegreeOutOfRange(degree));
    }
    Ok(())
}

fn check_lengths(terms: &[Term], len: usize, degree: usize) -> Result<()> {
    for (_, sym) in terms {
        if sym.len() != len {
            return Err(CcsError::DegreeMismatch {
                expected: degree,
                found: sym.len().saturating_sub(len - degree),
            });
        }
    }
    Ok(())
}

/// An integer combination of bar symbols `[g1 | ... | gn]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BarChain {
    degree: usize,
    terms: Vec<Term>,
}

impl BarChain {
    pub fn new(degree: usize, terms: Vec<Term>) -> Result<Self> {
        check_degree(degree)?;
        check_lengths(&terms, degree, degree)?;
        Ok(Self {
            degree,
            terms: normalize_terms(terms, TOL_CMP),
        })
    }

    pub fn zero(degree: usize) -> Self {
        Self {
            degree,
            terms: Vec::new(),
        }
    }

    /// A single symbol with coefficient one.
    pub fn symbol(sym: Vec<GroupElement>) -> Result<Self> {
        Self::new(sym.len(), vec![(1, sym)])
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// `self + coef * other`; degrees must agree.
    pub fn plus_scaled(&self, coef: i64, other: &BarChain) -> Result<Self> {
        if other.degree != self.degree {
            return Err(CcsError::DegreeMismatch {
                expected: self.degree,
                found: other.degree,
            });
        }
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().map(|(c, s)| (coef * c, s.clone())));
        Ok(Self {
            degree: self.degree,
            terms: normalize_terms(terms, TOL_CMP),
        })
    }

    pub fn map_elements(&self, f: impl Fn(&GroupElement) -> GroupElement) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(c, s)| (*c, s.iter().map(&f).collect()))
            .collect();
        Self {
            degree: self.degree,
            terms: normalize_terms(terms, TOL_CMP),
        }
    }

    /// Every entry replaced by `g x g^{-1}`.
    pub fn conjugated_by(&self, g: &GroupElement) -> Self {
        self.map_elements(|x| x.conjugated_by(g))
    }

    /// Entrywise complex conjugation.
    pub fn complex_conj(&self) -> Self {
        self.map_elements(GroupElement::conj)
    }
}

/// An integer combination of tuples `(g0, ..., gn)`. With `coinvariant`
/// set, every tuple starts with the identity and the chain stands for its
/// class modulo the diagonal left action.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HomChain {
    degree: usize,
    terms: Vec<Term>,
    coinvariant: bool,
}

/// `(g0^{-1} g0, ..., g0^{-1} gn)`
pub fn canonical(tuple: &[GroupElement]) -> Vec<GroupElement> {
    match tuple.first() {
        None => Vec::new(),
        Some(g0) => {
            let inv = g0.inverse();
            let mut out: Vec<GroupElement> = tuple.iter().map(|g| inv * *g).collect();
            out[0] = GroupElement::IDENTITY;
            out
        }
    }
}

impl HomChain {
    pub fn new(degree: usize, terms: Vec<Term>) -> Result<Self> {
        check_degree(degree)?;
        check_lengths(&terms, degree + 1, degree)?;
        Ok(Self::from_terms(degree, terms, false))
    }

    pub fn zero(degree: usize) -> Self {
        Self {
            degree,
            terms: Vec::new(),
            coinvariant: false,
        }
    }

    pub(crate) fn from_terms(degree: usize, terms: Vec<Term>, coinvariant: bool) -> Self {
        let terms = if coinvariant {
            terms.into_iter().map(|(c, s)| (c, canonical(&s))).collect()
        } else {
            terms
        };
        Self {
            degree,
            terms: normalize_terms(terms, TOL_CMP),
            coinvariant,
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_coinvariant(&self) -> bool {
        self.coinvariant
    }

    /// Image in the coinvariants, in canonical form.
    pub fn project(&self) -> Self {
        Self::from_terms(self.degree, self.terms.clone(), true)
    }

    /// Diagonal left action `h (g0, ..., gn) = (h g0, ..., h gn)`.
    pub fn translate(&self, h: &GroupElement) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(c, s)| (*c, s.iter().map(|g| *h * *g).collect()))
            .collect();
        Self::from_terms(self.degree, terms, self.coinvariant)
    }

    pub fn plus_scaled(&self, coef: i64, other: &HomChain) -> Result<Self> {
        if other.degree != self.degree {
            return Err(CcsError::DegreeMismatch {
                expected: self.degree,
                found: other.degree,
            });
        }
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().map(|(c, s)| (coef * c, s.clone())));
        let coinv = self.coinvariant && other.coinvariant;
        Ok(Self::from_terms(self.degree, terms, coinv))
    }

    pub fn conjugated_by(&self, g: &GroupElement) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(c, s)| (*c, s.iter().map(|x| x.conjugated_by(g)).collect()))
            .collect();
        Self::from_terms(self.degree, terms, self.coinvariant)
    }
}

/// `[g1 | ... | gn] -> (1, g1, g1 g2, ..., g1 ... gn)`, in the coinvariants.
pub fn inhom_to_hom(c: &BarChain) -> HomChain {
    let terms = c
        .terms
        .iter()
        .map(|(coef, sym)| {
            let mut tuple = Vec::with_capacity(sym.len() + 1);
            let mut acc = GroupElement::IDENTITY;
            tuple.push(acc);
            for g in sym {
                acc = acc * *g;
                tuple.push(acc);
            }
            (*coef, tuple)
        })
        .collect();
    HomChain::from_terms(c.degree, terms, true)
}

/// `(g0, ..., gn) -> [g0^{-1} g1 | ... | g_{n-1}^{-1} gn]`
pub fn hom_to_inhom(c: &HomChain) -> BarChain {
    let terms = c
        .terms
        .iter()
        .map(|(coef, t)| (*coef, t.windows(2).map(|w| w[0].inverse() * w[1]).collect()))
        .collect();
    BarChain {
        degree: c.degree,
        terms: normalize_terms(terms, TOL_CMP),
    }
}

fn bar_faces(sym: &[GroupElement]) -> Vec<(i64, Vec<GroupElement>)> {
    let n = sym.len();
    let mut out = Vec::with_capacity(n + 1);
    out.push((1, sym[1..].to_vec()));
    for i in 1..n {
        let mut s = Vec::with_capacity(n - 1);
        s.extend_from_slice(&sym[..i - 1]);
        s.push(sym[i - 1] * sym[i]);
        s.extend_from_slice(&sym[i + 1..]);
        out.push((if i % 2 == 0 { 1 } else { -1 }, s));
    }
    out.push((if n.is_multiple_of(2) { 1 } else { -1 }, sym[..n - 1].to_vec()));
    out
}

pub fn bar_boundary(c: &BarChain) -> Result<BarChain> {
    if c.degree == 0 {
        return Err(CcsError::DegreeOutOfRange(0));
    }
    let mut terms = Vec::with_capacity(c.terms.len() * (c.degree + 1));
    for (coef, sym) in &c.terms {
        for (sign, face) in bar_faces(sym) {
            terms.push((sign * coef, face));
        }
    }
    Ok(BarChain {
        degree: c.degree - 1,
        terms: normalize_terms(terms, TOL_CMP),
    })
}

/// Alternating face sum; faces of a coinvariant chain are re-canonicalized.
pub fn hom_boundary(c: &HomChain) -> Result<HomChain> {
    if c.degree == 0 {
        return Err(CcsError::DegreeOutOfRange(0));
    }
    let mut terms = Vec::with_capacity(c.terms.len() * (c.degree + 1));
    for (coef, t) in &c.terms {
        for i in 0..t.len() {
            let mut face = t.clone();
            face.remove(i);
            terms.push((if i % 2 == 0 { *coef } else { -coef }, face));
        }
    }
    Ok(HomChain::from_terms(c.degree - 1, terms, c.coinvariant))
}

/// Whether `c` is a cycle, together with its boundary. Degree-zero chains
/// are cycles.
pub fn is_cycle(c: &BarChain) -> (bool, BarChain) {
    if c.degree == 0 {
        return (true, BarChain::zero(0));
    }
    let b = bar_boundary(c).expect("degree is positive");
    (b.is_empty(), b)
}

/// A pair of tuple positions violating a genericity condition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct OffendingPair {
    pub term: usize,
    pub i: usize,
    pub j: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairCheck {
    pub ok: bool,
    pub offending: Vec<OffendingPair>,
}

impl PairCheck {
    fn from_offending(offending: Vec<OffendingPair>) -> Self {
        Self {
            ok: offending.is_empty(),
            offending,
        }
    }
}

fn scan_pairs(c: &HomChain, mut bad: impl FnMut(&GroupElement, &GroupElement) -> bool) -> PairCheck {
    let mut offending = Vec::new();
    for (term, (_, t)) in c.terms.iter().enumerate() {
        for i in 0..t.len() {
            for j in i + 1..t.len() {
                if bad(&t[i], &t[j]) {
                    offending.push(OffendingPair { term, i, j });
                }
            }
        }
    }
    PairCheck::from_offending(offending)
}

/// `g_i != +-g_j` in every tuple.
pub fn is_good(c: &HomChain) -> PairCheck {
    is_good_with(c, TOL_CMP)
}

pub fn is_good_with(c: &HomChain, tol: f64) -> PairCheck {
    scan_pairs(c, |a, b| a.approx_eq_up_to_sign(b, tol))
}

/// `|det(g_i v, g_j v)| > tol |g_i v| |g_j v|` in every tuple.
pub fn is_v_good(c: &HomChain, v: &ProjVector) -> PairCheck {
    is_v_good_with(c, v, TOL_VGOOD)
}

pub fn is_v_good_with(c: &HomChain, v: &ProjVector, tol: f64) -> PairCheck {
    scan_pairs(c, |a, b| {
        let (x, y) = (a.apply(v), b.apply(v));
        det_pair(&x, &y).norm() <= tol * x.norm() * y.norm()
    })
}

/// Rejection sampling from the unit bidisc; returns the vector and the
/// number of attempts used.
pub fn sample_generic_v(c: &HomChain, seed: u64) -> Result<(ProjVector, usize)> {
    sample_generic_v_with(c, &mut ChaCha8Rng::seed_from_u64(seed), TOL_VGOOD)
}

pub fn sample_generic_v_with<R: Rng + ?Sized>(c: &HomChain, rng: &mut R, tol: f64) -> Result<(ProjVector, usize)> {
    for attempt in 1..=SAMPLING_ATTEMPTS {
        let v = ProjVector::random(rng);
        if is_v_good_with(c, &v, tol).ok {
            return Ok((v, attempt));
        }
    }
    Err(CcsError::SamplingExhausted(SAMPLING_ATTEMPTS))
}

/// `s_g (g0, ..., gn) = (g, g0, ..., gn)`
pub fn cone(g: &GroupElement, c: &HomChain) -> Result<HomChain> {
    check_degree(c.degree + 1)?;
    let terms = c
        .terms
        .iter()
        .map(|(coef, t)| {
            let mut s = Vec::with_capacity(t.len() + 1);
            s.push(*g);
            s.extend_from_slice(t);
            (*coef, s)
        })
        .collect();
    Ok(HomChain::from_terms(c.degree + 1, terms, false))
}

/// `sum_{i=0}^{n-1} [t | t^i | t]` with `t` the rotation of order `n`.
pub fn torsion_cycle(n: u32) -> Result<BarChain> {
    if n == 0 {
        return Err(CcsError::PreconditionFailed("order must be positive".into()));
    }
    let t = rotation(n, 1);
    let mut p = GroupElement::IDENTITY;
    let mut terms = Vec::with_capacity(n as usize);
    for _ in 0..n {
        terms.push((1, vec![t, p, t]));
        p = p * t;
    }
    BarChain::new(3, terms)
}

/// A chain of `terms` random symbols with coefficients in `-3..=3 \ {0}`.
pub fn random_bar_chain<R: Rng + ?Sized>(degree: usize, terms: usize, rng: &mut R) -> Result<BarChain> {
    let t = (0..terms)
        .map(|_| {
            let mut coef = 0;
            while coef == 0 {
                coef = rng.gen_range(-3..=3);
            }
            (coef, (0..degree).map(|_| GroupElement::random(rng)).collect())
        })
        .collect();
    BarChain::new(degree, t)
}

/// The boundary of a random degree-4 chain: a generic good 3-cycle.
pub fn random_boundary_cycle<R: Rng + ?Sized>(terms: usize, rng: &mut R) -> Result<BarChain> {
    bar_boundary(&random_bar_chain(4, terms, rng)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::C64;

    fn rng(seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed)
    }

    #[test]
    fn inhom_to_hom_examples() {
        let mut r = rng(1);
        let (g, h) = (GroupElement::random(&mut r), GroupElement::random(&mut r));
        let c = inhom_to_hom(&BarChain::symbol(vec![g]).unwrap());
        assert!(same_symbol(&c.terms()[0].1, &[GroupElement::IDENTITY, g], 1e-12));
        let c = inhom_to_hom(&BarChain::symbol(vec![g, h]).unwrap());
        assert!(same_symbol(&c.terms()[0].1, &[GroupElement::IDENTITY, g, g * h], 1e-12));
    }

    #[test]
    fn hom_to_inhom_examples() {
        let mut r = rng(2);
        let (g, h, k) = (
            GroupElement::random(&mut r),
            GroupElement::random(&mut r),
            GroupElement::random(&mut r),
        );
        let c = HomChain::new(2, vec![(1, vec![k, k * g, k * g * h])]).unwrap();
        let b = hom_to_inhom(&c);
        assert!(same_symbol(&b.terms()[0].1, &[g, h], 1e-10));
        let c = HomChain::new(0, vec![(2, vec![k])]).unwrap();
        let b = hom_to_inhom(&c);
        assert_eq!(b.degree(), 0);
        assert_eq!(b.terms(), &[(2, vec![])]);
    }

    #[test]
    fn conversions_are_inverse() {
        let mut r = rng(3);
        for n in 0..100 {
            let c = random_bar_chain(1 + n % 4, 1 + n % 3, &mut r).unwrap();
            let back = hom_to_inhom(&inhom_to_hom(&c));
            assert!(back.plus_scaled(-1, &c).unwrap().is_empty());
        }
    }

    #[test]
    fn boundary_of_two_symbol() {
        let mut r = rng(4);
        let (g, h) = (GroupElement::random(&mut r), GroupElement::random(&mut r));
        let b = bar_boundary(&BarChain::symbol(vec![g, h]).unwrap()).unwrap();
        let expected = BarChain::new(1, vec![(1, vec![h]), (-1, vec![g * h]), (1, vec![g])]).unwrap();
        assert!(b.plus_scaled(-1, &expected).unwrap().is_empty());
    }

    #[test]
    fn boundary_squares_to_zero() {
        let mut r = rng(5);
        for n in 0..200 {
            let deg = 2 + n % 3;
            let c = random_bar_chain(deg, 1 + n % 4, &mut r).unwrap();
            let bb = bar_boundary(&bar_boundary(&c).unwrap()).unwrap();
            assert!(bb.is_empty(), "{bb:?}");
            let h = inhom_to_hom(&c);
            assert!(hom_boundary(&hom_boundary(&h).unwrap()).unwrap().is_empty());
            let free = HomChain::new(deg, h.terms().iter().map(|(c, t)| (*c, t.iter().map(|g| GroupElement::random(&mut r) * *g).collect())).collect()).unwrap();
            assert!(hom_boundary(&hom_boundary(&free).unwrap()).unwrap().is_empty());
        }
    }

    #[test]
    fn boundaries_commute_with_conversion() {
        let mut r = rng(6);
        for n in 0..100 {
            let c = random_bar_chain(1 + n % 4, 1 + n % 3, &mut r).unwrap();
            let lhs = hom_to_inhom(&hom_boundary(&inhom_to_hom(&c)).unwrap());
            let rhs = bar_boundary(&c).unwrap();
            assert!(lhs.plus_scaled(-1, &rhs).unwrap().is_empty());
        }
    }

    #[test]
    fn hom_boundary_of_pair() {
        let mut r = rng(7);
        let (a, b) = (GroupElement::random(&mut r), GroupElement::random(&mut r));
        let d = hom_boundary(&HomChain::new(1, vec![(1, vec![a, b])]).unwrap()).unwrap();
        let expected = HomChain::new(0, vec![(1, vec![b]), (-1, vec![a])]).unwrap();
        assert!(d.plus_scaled(-1, &expected).unwrap().is_empty());
    }

    #[test]
    fn torsion_cycles_are_cycles() {
        for n in 2..=7 {
            let c = torsion_cycle(n).unwrap();
            assert_eq!(c.len(), n as usize);
            let (ok, res) = is_cycle(&c);
            assert!(ok, "n = {n}: {res:?}");
        }
    }

    #[test]
    fn single_symbol_is_not_a_cycle() {
        let mut r = rng(8);
        let c = BarChain::symbol(vec![GroupElement::random(&mut r), GroupElement::random(&mut r)]).unwrap();
        assert!(!is_cycle(&c).0);
        let b = bar_boundary(&random_bar_chain(4, 3, &mut r).unwrap()).unwrap();
        assert!(is_cycle(&b).0);
    }

    #[test]
    fn goodness() {
        let mut r = rng(9);
        let (g, h) = (GroupElement::random(&mut r), GroupElement::random(&mut r));
        assert!(is_good(&inhom_to_hom(&BarChain::symbol(vec![g, h]).unwrap())).ok);
        let bad = HomChain::new(1, vec![(1, vec![GroupElement::IDENTITY, -GroupElement::IDENTITY])]).unwrap();
        let rep = is_good(&bad);
        assert!(!rep.ok);
        assert_eq!(rep.offending, vec![OffendingPair { term: 0, i: 0, j: 1 }]);

        for n in 3..=6u32 {
            let c = inhom_to_hom(&torsion_cycle(n).unwrap());
            let rep = is_good(&c);
            assert!(!rep.ok);
            // tuples (1, t, t^{i+1}, t^{i+2}) collide exactly when t^{i+1} or t^{i+2} is +-1 or t
            for (term, (_, t)) in c.terms().iter().enumerate() {
                let bad = rep.offending.iter().any(|p| p.term == term);
                let expect = (1..4).any(|i| (i + 1..4).any(|j| t[i].approx_eq_up_to_sign(&t[j], 1e-9)))
                    || (1..4).any(|j| t[j].approx_eq_up_to_sign(&t[0], 1e-9));
                assert_eq!(bad, expect);
            }
        }
    }

    #[test]
    fn v_goodness() {
        let mut r = rng(10);
        let c = inhom_to_hom(&random_bar_chain(3, 2, &mut r).unwrap());
        let (v, attempts) = sample_generic_v(&c, 11).unwrap();
        assert!(attempts <= 3);
        assert!(is_v_good(&c, &v).ok);
        assert_eq!(sample_generic_v(&c, 11).unwrap().0, v);

        // an eigenvector of g_0^{-1} g_1
        let g = GroupElement::real(2.0, 1.0, 0.0, 0.5).unwrap();
        let c = HomChain::new(1, vec![(1, vec![GroupElement::IDENTITY, g])]).unwrap();
        assert!(!is_v_good(&c, &ProjVector::real(1.0, 0.0).unwrap()).ok);

        let bad = HomChain::new(1, vec![(1, vec![GroupElement::IDENTITY, -GroupElement::IDENTITY])]).unwrap();
        assert_eq!(sample_generic_v(&bad, 1), Err(CcsError::SamplingExhausted(SAMPLING_ATTEMPTS)));
    }

    #[test]
    fn cone_identity() {
        let mut r = rng(12);
        assert!(cone(&GroupElement::random(&mut r), &HomChain::zero(2)).unwrap().is_empty());
        for n in 0..100 {
            let deg = 1 + n % 3;
            let c = HomChain::new(
                deg,
                (0..3).map(|_| (r.gen_range(1..4), (0..=deg).map(|_| GroupElement::random(&mut r)).collect())).collect(),
            )
            .unwrap();
            let g = GroupElement::random(&mut r);
            let lhs = hom_boundary(&cone(&g, &c).unwrap()).unwrap();
            let rhs = c.plus_scaled(-1, &cone(&g, &hom_boundary(&c).unwrap()).unwrap()).unwrap();
            assert!(lhs.plus_scaled(-1, &rhs).unwrap().is_empty());
        }
        // on a cycle the cone is a null-homotopy
        let z = hom_boundary(&HomChain::new(3, vec![(1, (0..4).map(|_| GroupElement::random(&mut r)).collect())]).unwrap()).unwrap();
        let g = GroupElement::random(&mut r);
        let d = hom_boundary(&cone(&g, &z).unwrap()).unwrap();
        assert!(d.plus_scaled(-1, &z).unwrap().is_empty());
    }

    #[test]
    fn normalization_merges_nearby_symbols() {
        let g = GroupElement::real(1.0, 2.0, 0.0, 1.0).unwrap();
        let mut h = g;
        h.b += C64::new(1e-12, 0.0);
        let c = BarChain::new(1, vec![(2, vec![g]), (-2, vec![h])]).unwrap();
        assert!(c.is_empty());
        let c = BarChain::new(1, vec![(2, vec![g]), (1, vec![h])]).unwrap();
        assert_eq!(c.terms().len(), 1);
        assert_eq!(c.terms()[0].0, 3);
    }

    #[test]
    fn degree_cap() {
        assert_eq!(BarChain::new(5, vec![]), Err(CcsError::DegreeOutOfRange(5)));
        let g = GroupElement::IDENTITY;
        assert!(matches!(BarChain::new(2, vec![(1, vec![g])]), Err(CcsError::DegreeMismatch { .. })));
    }
}

//! Replacing a cycle by a homologous good cycle.
//!
//! `phi` is the equivariant chain map defined on canonical tuples by
//! `phi(tau) = s_g(phi(d tau))` with a generic cone point `g`, and by
//! `phi(h tau) = h phi(tau)` elsewhere. The equivariant homotopy
//! `H(tau) = s_1(phi(tau) - tau - H(d tau))` satisfies
//! `dH + Hd = phi - id`, so on a cycle `phi(sigma) - sigma = dH(sigma)` in the
//! coinvariants. Both maps are memoized on canonical representatives.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bar::{
    canonical, cone, hom_boundary, hom_to_inhom, inhom_to_hom, is_cycle, BarChain, HomChain, Term,
};
use crate::error::{CcsError, Result};
use crate::geometry::GroupElement;
use crate::tol::TOL_CMP;

/// Cone points closer than this (relative) to `+-` an existing entry are resampled.
const CONE_MARGIN: f64 = 1e-3;

const CONE_ATTEMPTS: usize = 100;

#[derive(Debug, Clone, Serialize)]
pub struct Repair {
    /// The good cycle `phi(sigma)` as a bar chain.
    pub chain: BarChain,
    /// `phi(sigma)` in the coinvariants.
    pub phi: HomChain,
    /// `H(sigma)` in the coinvariants, one degree up.
    pub homotopy: HomChain,
}

/// Canonical tuples with their images, indexed by `Re` of the `(1,1)` entry
/// of the second element in buckets far wider than the matching tolerance.
#[derive(Default, Clone)]
struct Memo {
    entries: Vec<(Vec<GroupElement>, HomChain)>,
    buckets: HashMap<i64, Vec<usize>>,
}

const BUCKET: f64 = 1e-4;

fn bucket(key: &[GroupElement]) -> i64 {
    (key[1].a.re / BUCKET).floor() as i64
}

impl Memo {
    fn get(&self, key: &[GroupElement]) -> Option<&HomChain> {
        let b = bucket(key);
        (b - 1..=b + 1)
            .filter_map(|b| self.buckets.get(&b))
            .flatten()
            .map(|&i| &self.entries[i])
            .find(|(k, _)| k.iter().zip(key).all(|(x, y)| x.approx_eq(y, TOL_CMP)))
            .map(|(_, v)| v)
    }

    fn insert(&mut self, key: Vec<GroupElement>, value: HomChain) {
        self.buckets.entry(bucket(&key)).or_default().push(self.entries.len());
        self.entries.push((key, value));
    }
}

struct Repairer<R> {
    rng: R,
    phi_memo: Vec<Memo>,
    h_memo: Vec<Memo>,
}

fn faces(t: &[GroupElement]) -> impl Iterator<Item = (i64, Vec<GroupElement>)> + '_ {
    (0..t.len()).map(move |i| {
        let mut f = t.to_vec();
        f.remove(i);
        (if i % 2 == 0 { 1 } else { -1 }, f)
    })
}

fn sum(degree: usize, parts: Vec<(i64, HomChain)>) -> HomChain {
    let terms: Vec<Term> = parts
        .into_iter()
        .flat_map(|(c, ch)| ch.terms().iter().map(move |(k, s)| (c * k, s.clone())).collect::<Vec<_>>())
        .collect();
    HomChain::from_terms(degree, terms, false)
}

impl<R: Rng> Repairer<R> {
    fn new(rng: R) -> Self {
        Self {
            rng,
            phi_memo: vec![Memo::default(); 5],
            h_memo: vec![Memo::default(); 5],
        }
    }

    fn phi(&mut self, t: &[GroupElement]) -> Result<HomChain> {
        let n = t.len() - 1;
        if n == 0 {
            return Ok(HomChain::from_terms(0, vec![(1, t.to_vec())], false));
        }
        let c = canonical(t);
        let image = match self.phi_memo[n].get(&c) {
            Some(v) => v.clone(),
            None => {
                let v = self.phi_canonical(&c)?;
                self.phi_memo[n].insert(c, v.clone());
                v
            }
        };
        Ok(image.translate(&t[0]))
    }

    fn phi_canonical(&mut self, t: &[GroupElement]) -> Result<HomChain> {
        let n = t.len() - 1;
        let mut parts = Vec::with_capacity(n + 1);
        for (sign, f) in faces(t) {
            parts.push((sign, self.phi(&f)?));
        }
        let below = sum(n - 1, parts);
        let g = self.cone_point(&below)?;
        cone(&g, &below)
    }

    fn cone_point(&mut self, c: &HomChain) -> Result<GroupElement> {
        for _ in 0..CONE_ATTEMPTS {
            let g = GroupElement::random(&mut self.rng);
            let clash = c
                .terms()
                .iter()
                .flat_map(|(_, t)| t.iter())
                .any(|x| g.approx_eq_up_to_sign(x, CONE_MARGIN));
            if !clash {
                return Ok(g);
            }
        }
        Err(CcsError::RepairFailed(format!(
            "no generic cone point after {CONE_ATTEMPTS} draws"
        )))
    }

    fn homotopy(&mut self, t: &[GroupElement]) -> Result<HomChain> {
        let n = t.len() - 1;
        if n == 0 {
            return Ok(HomChain::zero(1));
        }
        let c = canonical(t);
        let image = match self.h_memo[n].get(&c) {
            Some(v) => v.clone(),
            None => {
                let v = self.homotopy_canonical(&c)?;
                self.h_memo[n].insert(c, v.clone());
                v
            }
        };
        Ok(image.translate(&t[0]))
    }

    fn homotopy_canonical(&mut self, t: &[GroupElement]) -> Result<HomChain> {
        let n = t.len() - 1;
        let mut parts = vec![(1, self.phi(t)?), (-1, HomChain::from_terms(n, vec![(1, t.to_vec())], false))];
        for (sign, f) in faces(t) {
            parts.push((-sign, self.homotopy(&f)?));
        }
        cone(&GroupElement::IDENTITY, &sum(n, parts))
    }
}

/// Applies `phi` and `H` to a homogeneous chain and projects to the coinvariants.
fn apply_maps<R: Rng>(r: &mut Repairer<R>, sigma: &HomChain) -> Result<(HomChain, HomChain)> {
    let n = sigma.degree();
    let mut phi_parts = Vec::with_capacity(sigma.len());
    let mut h_parts = Vec::with_capacity(sigma.len());
    for (coef, t) in sigma.terms() {
        phi_parts.push((*coef, r.phi(t)?));
        h_parts.push((*coef, r.homotopy(t)?));
    }
    Ok((sum(n, phi_parts).project(), sum(n + 1, h_parts).project()))
}

/// A good cycle homologous to `c`, with the homotopy certificate.
pub fn repair_to_good(c: &BarChain, seed: u64) -> Result<Repair> {
    repair_with_rng(c, ChaCha8Rng::seed_from_u64(seed))
}

pub fn repair_with_rng<R: Rng>(c: &BarChain, rng: R) -> Result<Repair> {
    if c.degree() >= crate::bar::MAX_DEGREE {
        return Err(CcsError::DegreeOutOfRange(c.degree()));
    }
    if !is_cycle(c).0 {
        return Err(CcsError::NotACycle);
    }
    let sigma = inhom_to_hom(c);
    let mut r = Repairer::new(rng);
    let (phi, homotopy) = apply_maps(&mut r, &sigma)?;
    Ok(Repair {
        chain: hom_to_inhom(&phi),
        phi,
        homotopy,
    })
}

/// Checks `dH(sigma) = phi(sigma) - sigma` in the coinvariants and returns
/// the residual chain.
pub fn verify_certificate(c: &BarChain, r: &Repair) -> Result<(bool, HomChain)> {
    let sigma = inhom_to_hom(c);
    let lhs = hom_boundary(&r.homotopy)?;
    let rhs = r.phi.plus_scaled(-1, &sigma)?;
    let residual = lhs.plus_scaled(-1, &rhs)?;
    Ok((residual.is_empty(), residual))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bar::{is_good, random_boundary_cycle, torsion_cycle};

    fn check(c: &BarChain, seed: u64) -> Repair {
        let r = repair_to_good(c, seed).unwrap();
        assert!(is_cycle(&r.chain).0, "repaired chain is not a cycle");
        let good = is_good(&inhom_to_hom(&r.chain));
        assert!(good.ok, "{:?}", good.offending);
        let (ok, residual) = verify_certificate(c, &r).unwrap();
        assert!(ok, "{residual:?}");
        r
    }

    #[test]
    fn torsion_cycles_repair() {
        for n in 2..=5 {
            check(&torsion_cycle(n).unwrap(), 40 + n as u64);
        }
    }

    #[test]
    fn good_cycles_repair() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..5 {
            let c = random_boundary_cycle(2, &mut rng).unwrap();
            assert!(is_good(&inhom_to_hom(&c)).ok);
            check(&c, 9);
        }
    }

    #[test]
    fn repair_is_deterministic() {
        let c = torsion_cycle(3).unwrap();
        let a = repair_to_good(&c, 5).unwrap();
        let b = repair_to_good(&c, 5).unwrap();
        assert_eq!(a.chain, b.chain);
        assert_eq!(a.homotopy, b.homotopy);
    }

    #[test]
    fn non_cycles_are_rejected() {
        let g = GroupElement::random(&mut ChaCha8Rng::seed_from_u64(1));
        let c = BarChain::symbol(vec![g, g, g]).unwrap();
        assert_eq!(repair_to_good(&c, 1).unwrap_err(), CcsError::NotACycle);
    }
}

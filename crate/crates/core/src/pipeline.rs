//! From bar-complex 3-cycles to the extended Bloch group and the value of
//! `2 C2` in `C/Z`.
//!
//! A cycle is repaired to a good cycle, its canonical tuples `(1, h1, h2, h3)`
//! are applied to a generic vector `v`, and each configuration is flattened
//! by logarithms of determinants. `det(h_i v, h_j v) = det(v, k v)` with
//! `k = h_i^{-1} h_j`, so one logarithm atom is kept per class of `k`; shared
//! faces then carry identical atoms and the `C ^ C` invariant cancels exactly.

use std::collections::HashMap;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bar::{inhom_to_hom, is_cycle, sample_generic_v_with, BarChain, HomChain};
use crate::bloch::{
    nu_hat_ledger, to_covering_point, Atom, AtomLabel, FlatteningTriple, LogCombination, PreBlochElement,
};
use crate::config::{flattening_from_logs, ConfigTuple};
use crate::error::{CcsError, Result};
use crate::geometry::{cross_ratio, det_pair, hopf, GroupElement, ProjVector, C64};
use crate::polylog::{dist_mod_one, plog_nz, to_unit_circle_value};
use crate::repair::repair_with_rng;
use crate::tol::{Tolerances, TOL_CMP};

pub const DEFAULT_TRIALS: usize = 5;

/// The torsion cycle of order `n` evaluates to `2 k / n` mod 1 with this `k`.
pub const TORSION_UNIT: i64 = -1;

/// `2 TORSION_UNIT / n` reduced into `[0, 1)`.
pub fn torsion_expected(n: u32) -> f64 {
    crate::polylog::reduce_mod(2.0 * TORSION_UNIT as f64 / n as f64, 1.0)
}

/// Settings of an evaluation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalConfig {
    pub seed: u64,
    pub trials: usize,
    pub tolerances: Tolerances,
}

impl Default for EvalConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            trials: DEFAULT_TRIALS,
            tolerances: Tolerances::default(),
        }
    }
}

impl EvalConfig {
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(CcsError::PreconditionFailed("trials must be at least 1".into()));
        }
        if !self.tolerances.is_valid() {
            return Err(CcsError::PreconditionFailed("tolerances must be positive".into()));
        }
        Ok(())
    }
}

/// `(g0, ..., gn) -> (g0 v, ..., gn v)` termwise.
pub fn psi_v(c: &HomChain, v: &ProjVector) -> Result<Vec<(i64, ConfigTuple)>> {
    psi_v_with(c, v, crate::tol::TOL_VGOOD)
}

pub fn psi_v_with(c: &HomChain, v: &ProjVector, tol: f64) -> Result<Vec<(i64, ConfigTuple)>> {
    c.terms()
        .iter()
        .enumerate()
        .map(|(term, (coef, t))| {
            let vs = t.iter().map(|g| g.apply(v)).collect();
            match ConfigTuple::with_tolerance(vs, tol) {
                Ok(ct) => Ok((*coef, ct)),
                Err(CcsError::DegenerateConfig(i, j)) => Err(CcsError::NotVGood { term, i, j }),
                Err(e) => Err(e),
            }
        })
        .collect()
}

/// Width of the buckets that index classes by `Re k_11`; much larger than any
/// matching distance, so a match always sits in a neighbouring bucket.
const BUCKET: f64 = 1e-4;

/// One logarithm atom per class of `k`, with value `Log det(v, k v)`.
struct ClassAtoms {
    v: ProjVector,
    table: Vec<(GroupElement, Atom)>,
    buckets: HashMap<i64, Vec<usize>>,
}

impl ClassAtoms {
    fn new(v: ProjVector) -> Self {
        Self {
            v,
            table: Vec::new(),
            buckets: HashMap::new(),
        }
    }

    fn log_det(&mut self, gi: &GroupElement, gj: &GroupElement) -> LogCombination {
        let k = gi.inverse() * *gj;
        let key = (k.a.re / BUCKET).floor() as i64;
        for b in key - 1..=key + 1 {
            let hit = self.buckets.get(&b).and_then(|ids| {
                ids.iter()
                    .map(|&i| &self.table[i])
                    .find(|(h, _)| h.approx_eq(&k, TOL_CMP))
            });
            if let Some((_, a)) = hit {
                return LogCombination::atom(*a);
            }
        }
        let d = det_pair(&self.v, &k.apply(&self.v));
        let a = Atom::new(AtomLabel::Class(self.table.len() as u32), plog_nz(d));
        self.buckets.entry(key).or_default().push(self.table.len());
        self.table.push((k, a));
        LogCombination::atom(a)
    }
}

/// Output of `lambda_hat` with its side checks.
#[derive(Debug, Clone)]
pub struct LambdaHat {
    pub element: PreBlochElement,
    pub v: ProjVector,
    pub sampling_attempts: usize,
    /// Number of tuples in the repaired cycle.
    pub repaired_terms: usize,
    /// Largest relative gap between `e^{w0}` and the cross-ratio of the Hopf images.
    pub max_flattening_residual: f64,
    pub nu_exact: bool,
}

/// Evaluates an already good cycle at `v`.
pub fn lambda_hat_at(sigma: &HomChain, v: &ProjVector, tol: &Tolerances) -> Result<LambdaHat> {
    let configs = psi_v_with(sigma, v, tol.vgood)?;
    let mut atoms = ClassAtoms::new(*v);
    let mut flats: Vec<(i64, FlatteningTriple)> = Vec::with_capacity(sigma.len());
    let mut element = PreBlochElement::zero();
    let mut max_res: f64 = 0.0;
    for (term, ((coef, t), (_, ct))) in sigma.terms().iter().zip(&configs).enumerate() {
        let wrap = |e: CcsError| CcsError::Term {
            term,
            source: Box::new(e),
        };
        let f = flattening_from_logs(|i, j| atoms.log_det(&t[i], &t[j])).map_err(wrap)?;
        let h: Vec<_> = ct.vectors().iter().map(hopf).collect();
        let z = cross_ratio(h[0], h[1], h[2], h[3]).map_err(wrap)?;
        let ez = f.cross_ratio();
        max_res = max_res.max((ez - z).norm() / z.norm().max(1.0));
        element.push(*coef, to_covering_point(&f).map_err(wrap)?);
        flats.push((*coef, f));
    }
    let nu = nu_hat_ledger(flats.iter().map(|(c, f)| (*c, f))).expect("flattenings carry ledgers");
    if !nu.is_zero() {
        return Err(CcsError::NuNonzero(nu.len()));
    }
    Ok(LambdaHat {
        element,
        v: *v,
        sampling_attempts: 0,
        repaired_terms: sigma.len(),
        max_flattening_residual: max_res,
        nu_exact: true,
    })
}

/// Repair, push forward along a generic `v`, flatten.
pub fn lambda_hat(c: &BarChain, seed: u64) -> Result<LambdaHat> {
    lambda_hat_with(c, &mut ChaCha8Rng::seed_from_u64(seed), &Tolerances::default())
}

pub fn lambda_hat_with<R: Rng>(c: &BarChain, rng: &mut R, tol: &Tolerances) -> Result<LambdaHat> {
    if c.degree() != 3 {
        return Err(CcsError::DegreeMismatch {
            expected: 3,
            found: c.degree(),
        });
    }
    if !is_cycle(c).0 {
        return Err(CcsError::NotACycle);
    }
    let repaired = repair_with_rng(c, &mut *rng)?;
    let sigma = inhom_to_hom(&repaired.chain);
    let (v, attempts) = sample_generic_v_with(&sigma, rng, tol.vgood)?;
    let mut out = lambda_hat_at(&sigma, &v, tol)?;
    out.sampling_attempts = attempts;
    Ok(out)
}

/// `sum coef * Vol(z)`.
pub fn volume_of(e: &PreBlochElement) -> f64 {
    e.volume()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialReport {
    pub seed: u64,
    /// `2 C2` in `C/Z`, real part in `[0, 1)`.
    pub value: C64,
    pub raw_lhat: C64,
    pub volume: f64,
    pub v: ProjVector,
    pub sampling_attempts: usize,
    pub repaired_terms: usize,
    pub max_flattening_residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CcsReport {
    pub quantity: &'static str,
    /// `2 C2` in `C/Z` from the first trial, real part in `[0, 1)`.
    pub value: C64,
    /// `C2` itself, determined only modulo 1/2.
    pub c2_mod_half: C64,
    pub raw_lhat: C64,
    /// `sum coef * Vol(z)` of the first trial.
    pub volume: f64,
    /// `|volume - Im(raw_lhat)|`
    pub vol_residual: f64,
    /// Largest distance in `C/Z` between two trial values.
    pub spread: f64,
    pub nu_exact: bool,
    pub max_flattening_residual: f64,
    pub trials: Vec<TrialReport>,
    pub config: EvalConfig,
}

/// Per-trial seeds drawn from the master seed.
pub fn trial_seeds(seed: u64, trials: usize) -> Vec<u64> {
    let mut master = ChaCha8Rng::seed_from_u64(seed);
    (0..trials).map(|_| master.next_u64()).collect()
}

pub fn ccs_value(c: &BarChain, config: &EvalConfig) -> Result<CcsReport> {
    config.validate()?;
    let mut trials = Vec::with_capacity(config.trials);
    let mut nu_exact = true;
    let mut max_vol_res: f64 = 0.0;
    for seed in trial_seeds(config.seed, config.trials) {
        let lam = lambda_hat_with(c, &mut ChaCha8Rng::seed_from_u64(seed), &config.tolerances)?;
        let raw = lam.element.lhat_sum();
        let volume = volume_of(&lam.element);
        max_vol_res = max_vol_res.max((volume - raw.im).abs());
        nu_exact &= lam.nu_exact;
        trials.push(TrialReport {
            seed,
            value: to_unit_circle_value(raw),
            raw_lhat: raw,
            volume,
            v: lam.v,
            sampling_attempts: lam.sampling_attempts,
            repaired_terms: lam.repaired_terms,
            max_flattening_residual: lam.max_flattening_residual,
        });
    }
    let mut spread: f64 = 0.0;
    for (i, a) in trials.iter().enumerate() {
        for b in &trials[i + 1..] {
            spread = spread.max(dist_mod_one(a.value, b.value));
        }
    }
    let first = &trials[0];
    let half = first.value / 2.0;
    Ok(CcsReport {
        quantity: "2*C2 mod 1",
        value: first.value,
        c2_mod_half: C64::new(crate::polylog::reduce_mod(half.re, 0.5), half.im),
        raw_lhat: first.raw_lhat,
        volume: first.volume,
        vol_residual: max_vol_res,
        spread,
        nu_exact,
        max_flattening_residual: trials.iter().map(|t| t.max_flattening_residual).fold(0.0, f64::max),
        trials,
        config: config.clone(),
    })
}

//! Compact seeded versions of the property suites, for `ccs selftest`.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bar::{
    bar_boundary, cone, hom_boundary, hom_to_inhom, inhom_to_hom, random_bar_chain, random_boundary_cycle,
    torsion_cycle, BarChain, HomChain,
};
use crate::bloch::{check_flattening_condition, flattening_condition_exact, TripleLedger};
use crate::config::{face_flattenings, lifted_five_term_sum, nu_sigma_defect, ConfigTuple};
use crate::error::Result;
use crate::geometry::{GroupElement, ProjVector, C64};
use crate::paths::{verify_pq_pattern_at, find_base_point, Windings};
use crate::pipeline::{ccs_value, torsion_expected, EvalConfig};
use crate::polylog::{chi_hat, dist_mod_one, dist_to_lattice, li2, rogers_l_real, to_unit_circle_value, PI2_6, TWO_PI_SQ};
use crate::real::real_check;
use crate::repair::{repair_to_good, verify_certificate};

#[derive(Debug, Clone, Serialize)]
pub struct SelftestCheck {
    pub name: &'static str,
    pub passed: bool,
    pub max_residual: f64,
    pub tolerance: f64,
    pub samples: usize,
    pub millis: u128,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct SelftestReport {
    pub seed: u64,
    pub passed: bool,
    pub checks: Vec<SelftestCheck>,
}

/// Outcome of a check body: worst residual, sample count, note.
type Outcome = Result<(f64, usize, String)>;

fn run_check(name: &'static str, tolerance: f64, body: impl FnOnce() -> Outcome) -> SelftestCheck {
    let t = Instant::now();
    let out = body();
    let millis = t.elapsed().as_millis();
    match out {
        Ok((r, n, detail)) => SelftestCheck {
            name,
            passed: r < tolerance,
            max_residual: r,
            tolerance,
            samples: n,
            millis,
            detail,
        },
        Err(e) => SelftestCheck {
            name,
            passed: false,
            max_residual: f64::INFINITY,
            tolerance,
            samples: 0,
            millis,
            detail: e.to_string(),
        },
    }
}

fn random_config<R: Rng>(rng: &mut R, n: usize) -> Result<ConfigTuple> {
    ConfigTuple::new((0..n).map(|_| ProjVector::random(rng)).collect())
}

fn exact_flag(ok: bool) -> f64 {
    if ok {
        0.0
    } else {
        f64::INFINITY
    }
}

pub fn run(seed: u64) -> SelftestReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checks = Vec::new();

    checks.push(run_check("rogers-reflection", 1e-9, || {
        let mut worst: f64 = 0.0;
        for _ in 0..1000 {
            let x = rng.gen_range(1e-6..1.0 - 1e-6);
            worst = worst.max((rogers_l_real(x) + rogers_l_real(1.0 - x) + PI2_6).abs());
        }
        Ok((worst, 1000, String::new()))
    }));

    checks.push(run_check("rogers-five-term", 1e-9, || {
        let mut worst: f64 = 0.0;
        let mut n = 0;
        while n < 1000 {
            let (a, b): (f64, f64) = (rng.gen_range(1e-4..1.0 - 1e-4), rng.gen_range(1e-4..1.0 - 1e-4));
            if (a - b).abs() < 1e-4 {
                continue;
            }
            let (x, y) = (a.max(b), a.min(b));
            let s = rogers_l_real(x) - rogers_l_real(y) + rogers_l_real(y / x)
                - rogers_l_real((1.0 - 1.0 / x) / (1.0 - 1.0 / y))
                + rogers_l_real((1.0 - x) / (1.0 - y));
            worst = worst.max(s.abs());
            n += 1;
        }
        Ok((worst, n, String::new()))
    }));

    checks.push(run_check("dilog-special-values", 1e-12, || {
        let one = C64::new(1.0, 0.0);
        let r = [
            (rogers_l_real(0.5) + PI2_6 / 2.0).abs(),
            (li2(one)? - PI2_6).norm(),
            (li2(-one)? + PI2_6 / 2.0).norm(),
        ];
        Ok((r.iter().cloned().fold(0.0, f64::max), 3, String::new()))
    }));

    checks.push(run_check("chi-hat-inclusion", 1e-10, || {
        let mut worst: f64 = 0.0;
        let mut n = 0;
        for den in 2..=12 {
            for num in 1..den {
                let v = to_unit_circle_value(chi_hat(num, den)?.lhat_sum());
                worst = worst.max(dist_mod_one(v, (num as f64 / den as f64).into()));
                n += 1;
            }
        }
        Ok((worst, n, String::new()))
    }));

    checks.push(run_check("flattening-condition", 1e-8, || {
        let mut worst: f64 = 0.0;
        let mut exact = true;
        for _ in 0..100 {
            let faces = face_flattenings(&random_config(&mut rng, 5)?)?;
            worst = worst.max(check_flattening_condition(&faces).max_residual);
            let l: Vec<&TripleLedger> = faces.iter().filter_map(|f| f.ledger()).collect();
            exact &= l.len() == 5 && flattening_condition_exact(&[l[0], l[1], l[2], l[3], l[4]]);
        }
        Ok((worst.max(exact_flag(exact)), 100, format!("exact cancellation: {exact}")))
    }));

    checks.push(run_check("lifted-five-term", 1e-7, || {
        let mut worst: f64 = 0.0;
        for _ in 0..100 {
            let s = lifted_five_term_sum(&random_config(&mut rng, 5)?)?;
            worst = worst.max(dist_to_lattice(s.re, TWO_PI_SQ).hypot(s.im));
        }
        Ok((worst, 100, "distance to 2 pi^2 Z".into()))
    }));

    checks.push(run_check("nu-sigma-square", 0.5, || {
        let mut bad = 0;
        for _ in 0..100 {
            if !nu_sigma_defect(&random_config(&mut rng, 4)?)?.is_zero() {
                bad += 1;
            }
        }
        Ok((bad as f64, 100, format!("{bad} nonzero defects")))
    }));

    checks.push(run_check("chain-algebra", 0.5, || {
        let mut bad = 0;
        let mut n = 0;
        for degree in 2..=4 {
            for _ in 0..5 {
                let c = random_bar_chain(degree, 4, &mut rng)?;
                bad += usize::from(!bar_boundary(&bar_boundary(&c)?)?.is_empty());
                let back = hom_to_inhom(&inhom_to_hom(&c));
                bad += usize::from(!c.plus_scaled(-1, &back)?.is_empty());
                n += 1;
            }
        }
        for _ in 0..5 {
            // d s_g + s_g d = id on homogeneous chains of positive degree
            let terms = (0..3)
                .map(|_| (1, (0..3).map(|_| GroupElement::random(&mut rng)).collect()))
                .collect();
            let h = HomChain::new(2, terms)?;
            let g = GroupElement::random(&mut rng);
            let lhs = hom_boundary(&cone(&g, &h)?)?.plus_scaled(1, &cone(&g, &hom_boundary(&h)?)?)?;
            bad += usize::from(!lhs.plus_scaled(-1, &h)?.is_empty());
            n += 1;
        }
        for m in 2..=4 {
            let c = torsion_cycle(m)?;
            let r = repair_to_good(&c, seed.wrapping_add(m as u64))?;
            bad += usize::from(!verify_certificate(&c, &r)?.0);
            n += 1;
        }
        Ok((bad as f64, n, format!("{bad} failed identities")))
    }));

    checks.push(run_check("torsion-values", 1e-6, || {
        let mut worst: f64 = 0.0;
        let mut notes = Vec::new();
        for m in 2..=5u32 {
            let cfg = EvalConfig {
                seed: rng.gen(),
                trials: 2,
                ..EvalConfig::default()
            };
            let r = ccs_value(&torsion_cycle(m)?, &cfg)?;
            worst = worst
                .max(dist_mod_one(r.value, torsion_expected(m).into()))
                .max(r.spread)
                .max(r.vol_residual);
            notes.push(format!("n={m}: {:.9}", r.value.re));
        }
        Ok((worst, 4, notes.join(", ")))
    }));

    checks.push(run_check("boundaries-vanish", 1e-7, || {
        let mut worst: f64 = 0.0;
        for _ in 0..3 {
            let c: BarChain = random_boundary_cycle(2, &mut rng)?;
            let cfg = EvalConfig {
                seed: rng.gen(),
                trials: 2,
                ..EvalConfig::default()
            };
            let r = ccs_value(&c, &cfg)?;
            worst = worst.max(dist_mod_one(r.value, 0.0.into())).max(r.spread);
        }
        Ok((worst, 3, String::new()))
    }));

    checks.push(run_check("real-small-positive", 1e-8, || {
        let s = real_check(200, &mut rng);
        let r = if s.failures.is_empty() { s.max_agreement } else { f64::INFINITY };
        Ok((r, s.samples, s.failures.first().cloned().unwrap_or_default()))
    }));

    checks.push(run_check("path-lifting-pattern", 1e-8, || {
        let base = find_base_point()?;
        let mut worst: f64 = 0.0;
        for _ in 0..5 {
            let mut w = || rng.gen_range(-2..=2);
            let ws = Windings {
                p0: w(),
                q0: w(),
                r: w(),
                p1: w(),
                q1: w(),
            };
            let c = verify_pq_pattern_at(base, &ws)?;
            worst = worst.max(c.five_term_sum.norm()).max(exact_flag(c.matches));
        }
        Ok((worst, 5, String::new()))
    }));

    SelftestReport {
        seed,
        passed: checks.iter().all(|c| c.passed),
        checks,
    }
}

#[cfg(test)]
mod tests {
    #[test]
    fn selftest_passes() {
        let r = super::run(0);
        for c in &r.checks {
            assert!(c.passed, "{c:?}");
        }
    }
}

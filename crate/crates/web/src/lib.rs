//! Browser bindings. Each export returns a JSON string; the plain functions
//! behind them are ordinary Rust and are tested natively.

use serde::Serialize;
use wasm_bindgen::prelude::*;

use ccs_core::bar::torsion_cycle;
use ccs_core::bloch::CoveringPoint;
use ccs_core::paths::{find_base_point, verify_pq_pattern_at, Windings};
use ccs_core::pipeline::{ccs_value, torsion_expected, EvalConfig};
use ccs_core::polylog::{lhat, rogers_l, vol, TWO_PI_SQ};
use ccs_core::{CcsError, Result, C64};

/// Largest torsion order offered by the page; repair cost grows with `n`.
pub const MAX_ORDER: u32 = 12;

#[derive(Debug, Serialize)]
pub struct TorsionSummary {
    pub n: u32,
    pub value: C64,
    pub expected: f64,
    pub spread: f64,
    pub vol_residual: f64,
    pub trials: usize,
}

pub fn torsion_summary(n: u32, seed: u64, trials: usize) -> Result<TorsionSummary> {
    if !(1..=MAX_ORDER).contains(&n) {
        return Err(CcsError::PreconditionFailed(format!("order must lie in 1..={MAX_ORDER}")));
    }
    let cfg = EvalConfig {
        seed,
        trials,
        ..EvalConfig::default()
    };
    let r = ccs_value(&torsion_cycle(n)?, &cfg)?;
    Ok(TorsionSummary {
        n,
        value: r.value,
        expected: torsion_expected(n),
        spread: r.spread,
        vol_residual: r.vol_residual,
        trials,
    })
}

#[derive(Debug, Serialize)]
pub struct LhatSummary {
    pub z: C64,
    pub p: i64,
    pub q: i64,
    pub rogers: C64,
    pub lhat: C64,
    /// `-lhat / (2 pi^2)`
    pub normalized: C64,
    pub volume: f64,
}

pub fn lhat_summary(re: f64, im: f64, p: i64, q: i64) -> Result<LhatSummary> {
    let z = C64::new(re, im);
    let pt = CoveringPoint::new(z, p, q)?;
    let l = lhat(&pt);
    Ok(LhatSummary {
        z,
        p,
        q,
        rogers: rogers_l(z)?,
        lhat: l,
        normalized: -l / TWO_PI_SQ,
        volume: vol(z),
    })
}

pub fn lift_summary(w: Windings) -> Result<ccs_core::paths::PatternCheck> {
    verify_pq_pattern_at(find_base_point()?, &w)
}

fn to_js<T: Serialize>(r: Result<T>) -> std::result::Result<String, JsError> {
    let v = r.map_err(|e| JsError::new(&e.to_string()))?;
    serde_json::to_string(&v).map_err(|e| JsError::new(&e.to_string()))
}

#[wasm_bindgen]
pub fn torsion(n: u32, seed: u32, trials: u32) -> std::result::Result<String, JsError> {
    to_js(torsion_summary(n, seed as u64, trials as usize))
}

#[wasm_bindgen]
pub fn lifted_dilog(re: f64, im: f64, p: i32, q: i32) -> std::result::Result<String, JsError> {
    to_js(lhat_summary(re, im, p as i64, q as i64))
}

#[wasm_bindgen]
pub fn lift_path(p0: i32, q0: i32, r: i32, p1: i32, q1: i32) -> std::result::Result<String, JsError> {
    let w = Windings {
        p0: p0 as i64,
        q0: q0 as i64,
        r: r as i64,
        p1: p1 as i64,
        q1: q1 as i64,
    };
    to_js(lift_summary(w))
}

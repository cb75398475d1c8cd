use serde::{Deserialize, Serialize};

pub const TOL_DET: f64 = 1e-9;
pub const TOL_CMP: f64 = 1e-8;
pub const TOL_ZERO: f64 = 1e-12;
pub const TOL_VGOOD: f64 = 1e-7;
pub const TOL_FLAT: f64 = 1e-9;

/// Numerical thresholds shared by every layer.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub det: f64,
    pub cmp: f64,
    pub zero: f64,
    pub vgood: f64,
    pub flat: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            det: TOL_DET,
            cmp: TOL_CMP,
            zero: TOL_ZERO,
            vgood: TOL_VGOOD,
            flat: TOL_FLAT,
        }
    }
}

impl Tolerances {
    pub fn is_valid(&self) -> bool {
        [self.det, self.cmp, self.zero, self.vgood, self.flat]
            .iter()
            .all(|t| t.is_finite() && *t > 0.0)
    }
}

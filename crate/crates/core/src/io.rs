//! JSON file formats: bar cycles in, reports out.
//!
//! Doubles are written in the shortest decimal form that parses back to the
//! same bits, so a chain survives a write/read cycle exactly.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::bar::{BarChain, MAX_DEGREE};
use crate::error::{CcsError, Result};
use crate::geometry::{GroupElement, C64};
use crate::tol::TOL_DET;

pub const GROUP_TAG: &str = "SL2C";

/// One matrix as `[[re, im]; 4]` in the order `a, b, c, d`.
pub type MatrixJson = [[f64; 2]; 4];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermJson {
    pub coef: i64,
    pub bar: Vec<MatrixJson>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CycleFile {
    pub group: String,
    pub degree: usize,
    pub terms: Vec<TermJson>,
}

fn matrix_json(g: &GroupElement) -> MatrixJson {
    g.entries().map(|z| [z.re, z.im])
}

impl CycleFile {
    pub fn from_chain(c: &BarChain) -> Self {
        Self {
            group: GROUP_TAG.to_string(),
            degree: c.degree(),
            terms: c
                .terms()
                .iter()
                .map(|(coef, bar)| TermJson {
                    coef: *coef,
                    bar: bar.iter().map(matrix_json).collect(),
                })
                .collect(),
        }
    }

    /// Schema, degree and determinant checks; determinant failures carry the term index.
    pub fn to_chain(&self, tol_det: f64) -> Result<BarChain> {
        if self.group != GROUP_TAG {
            return Err(CcsError::Schema(format!("group must be \"{GROUP_TAG}\", found \"{}\"", self.group)));
        }
        if self.degree > MAX_DEGREE {
            return Err(CcsError::Schema(format!("degree {} exceeds {MAX_DEGREE}", self.degree)));
        }
        let mut terms = Vec::with_capacity(self.terms.len());
        for (k, t) in self.terms.iter().enumerate() {
            if t.bar.len() != self.degree {
                return Err(CcsError::Schema(format!(
                    "term {k}: bar has {} entries, degree is {}",
                    t.bar.len(),
                    self.degree
                )));
            }
            let mut bar = Vec::with_capacity(t.bar.len());
            for m in &t.bar {
                if m.iter().flatten().any(|x| !x.is_finite()) {
                    return Err(CcsError::Schema(format!("term {k}: non-finite matrix entry")));
                }
                let [a, b, c, d] = m.map(|[re, im]| C64::new(re, im));
                let g = GroupElement::with_tolerance(a, b, c, d, tol_det).map_err(|e| CcsError::Term {
                    term: k,
                    source: Box::new(e),
                })?;
                bar.push(g);
            }
            terms.push((t.coef, bar));
        }
        BarChain::new(self.degree, terms)
    }
}

pub fn parse_cycle_str(s: &str, tol_det: f64) -> Result<BarChain> {
    let file: CycleFile = serde_json::from_str(s).map_err(|e| CcsError::Schema(e.to_string()))?;
    file.to_chain(tol_det)
}

pub fn parse_cycle_file(path: impl AsRef<Path>) -> Result<BarChain> {
    parse_cycle_file_with(path, TOL_DET)
}

pub fn parse_cycle_file_with(path: impl AsRef<Path>, tol_det: f64) -> Result<BarChain> {
    let path = path.as_ref();
    let s = fs::read_to_string(path).map_err(|e| CcsError::Io(format!("{}: {e}", path.display())))?;
    parse_cycle_str(&s, tol_det)
}

pub fn cycle_to_json(c: &BarChain) -> String {
    to_json(&CycleFile::from_chain(c))
}

/// Pretty JSON with a trailing newline. Field order is fixed by the types,
/// so equal values give identical bytes.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports contain only finite-keyed maps");
    s.push('\n');
    s
}

/// Writes `text` to `path`, or to stdout when `path` is `None`.
pub fn write_output(text: &str, path: Option<&Path>) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| CcsError::Io(format!("{}: {e}", p.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| CcsError::Io(format!("stdout: {e}")))
        }
    }
}

pub fn emit_report<T: Serialize>(report: &T, path: Option<&Path>) -> Result<()> {
    write_output(&to_json(report), path)
}

pub fn write_cycle_file(c: &BarChain, path: Option<&Path>) -> Result<()> {
    write_output(&cycle_to_json(c), path)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bar::{is_cycle, random_bar_chain, torsion_cycle};
    use crate::pipeline::{ccs_value, EvalConfig};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn bits(c: &BarChain) -> Vec<(i64, Vec<[u64; 8]>)> {
        c.terms()
            .iter()
            .map(|(k, bar)| {
                let mats = bar
                    .iter()
                    .map(|g| {
                        let e = g.entries();
                        std::array::from_fn(|i| if i % 2 == 0 { e[i / 2].re.to_bits() } else { e[i / 2].im.to_bits() })
                    })
                    .collect();
                (*k, mats)
            })
            .collect()
    }

    #[test]
    fn torsion_fixture_round_trip() {
        let c = torsion_cycle(3).unwrap();
        let back = parse_cycle_str(&cycle_to_json(&c), TOL_DET).unwrap();
        assert_eq!(back.len(), 3);
        assert!(is_cycle(&back).0);
        assert_eq!(bits(&back), bits(&c));
    }

    #[test]
    fn random_chains_round_trip_bitwise() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for degree in 1..=4 {
            let c = random_bar_chain(degree, 6, &mut rng).unwrap();
            let back = parse_cycle_str(&cycle_to_json(&c), TOL_DET).unwrap();
            assert_eq!(bits(&back), bits(&c));
        }
    }

    #[test]
    fn determinant_violation_names_the_term() {
        let s = r#"{"group":"SL2C","degree":1,"terms":[
            {"coef":1,"bar":[[[1,0],[0,0],[0,0],[1,0]]]},
            {"coef":1,"bar":[[[2,0],[0,0],[0,0],[1,0]]]}]}"#;
        match parse_cycle_str(s, TOL_DET) {
            Err(CcsError::Term { term, source }) => {
                assert_eq!(term, 1);
                assert!(matches!(*source, CcsError::Determinant { .. }));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn empty_terms_give_the_zero_cycle() {
        let c = parse_cycle_str(r#"{"group":"SL2C","degree":3,"terms":[]}"#, TOL_DET).unwrap();
        assert!(c.is_empty());
        assert!(is_cycle(&c).0);
    }

    #[test]
    fn schema_errors() {
        for s in [
            r#"{"group":"SL2R","degree":1,"terms":[]}"#,
            r#"{"group":"SL2C","degree":5,"terms":[]}"#,
            r#"{"group":"SL2C","degree":2,"terms":[{"coef":1,"bar":[[[1,0],[0,0],[0,0],[1,0]]]}]}"#,
            r#"{"group":"SL2C","degree":1}"#,
            r#"{"group":"SL2C","degree":1,"terms":[],"extra":0}"#,
            "not json",
        ] {
            assert!(matches!(parse_cycle_str(s, TOL_DET), Err(CcsError::Schema(_))), "{s}");
        }
    }

    #[test]
    fn missing_file_is_an_io_error() {
        let e = parse_cycle_file("/nonexistent/cycle.json").unwrap_err();
        assert!(e.is_io());
    }

    #[test]
    fn reports_are_byte_identical_for_equal_seeds() {
        let c = torsion_cycle(3).unwrap();
        let cfg = EvalConfig {
            seed: 17,
            trials: 3,
            ..EvalConfig::default()
        };
        let a = to_json(&ccs_value(&c, &cfg).unwrap());
        let b = to_json(&ccs_value(&c, &cfg).unwrap());
        assert_eq!(a, b);
        let v: serde_json::Value = serde_json::from_str(&a).unwrap();
        assert_eq!(v["trials"].as_array().unwrap().len(), 3);
        let value = v["value"].as_array().unwrap();
        let (re, im) = (value[0].as_f64().unwrap(), value[1].as_f64().unwrap());
        assert!(im.abs() < 1e-6);
        assert!((3.0 * re - (3.0 * re).round()).abs() < 1e-6);
    }
}

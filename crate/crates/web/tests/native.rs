use ccs_core::paths::Windings;
use ccs_web::{lhat_summary, lift_summary, torsion, torsion_summary};

#[test]
fn torsion_summary_matches_expected_value() {
    for n in 2..=5 {
        let s = torsion_summary(n, 1, 2).unwrap();
        let d = (s.value.re - s.expected).abs();
        assert!(d.min(1.0 - d) < 1e-7 && s.value.im.abs() < 1e-7, "{s:?}");
    }
    assert!(torsion_summary(0, 1, 2).is_err());
    assert!(torsion_summary(99, 1, 2).is_err());
}

#[test]
fn torsion_export_is_json() {
    let s = torsion(3, 0, 2).unwrap();
    let v: serde_json::Value = serde_json::from_str(&s).unwrap();
    assert_eq!(v["n"], 3);
}

#[test]
fn lhat_summary_at_one_half() {
    let s = lhat_summary(0.5, 0.0, 0, 0).unwrap();
    assert!((s.lhat.re + std::f64::consts::PI.powi(2) / 12.0).abs() < 1e-14);
    assert!(s.volume.abs() < 1e-15);
    assert!(lhat_summary(0.5, 0.0, 1, 0).is_err());
    assert!(lhat_summary(0.0, 0.0, 0, 0).is_err());
}

#[test]
fn lift_summary_matches() {
    let c = lift_summary(Windings { p0: 1, q0: -1, r: 2, p1: 0, q1: 1 }).unwrap();
    assert!(c.matches, "{c:?}");
}

//! Symbolic logarithms and their exterior products.
//!
//! A [`LogCombination`] is an integer combination of labelled logarithm
//! atoms, each carrying its numeric value. Wedge products of such
//! combinations expand bilinearly over atoms, so an identity in `C ^ C`
//! between ledger-backed quantities is decided by integer cancellation.

use std::collections::BTreeMap;
use std::fmt;

use crate::geometry::C64;
use crate::polylog::I_PI;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AtomLabel {
    /// The constant `pi i`.
    PiI,
    /// `Log det(v_i, v_j)` for vectors of one configuration.
    Pair(u32, u32),
    /// `Log det(v, k v)` for an interned group element class `k`.
    Class(u32),
    /// `Log z` of the `n`-th distinct cross-ratio of an element.
    LogZ(u32),
    /// `Log(1/(1 - z))` of the `n`-th distinct cross-ratio of an element.
    LogInvOneMinusZ(u32),
}

impl fmt::Display for AtomLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AtomLabel::PiI => write!(f, "πi"),
            AtomLabel::Pair(i, j) => write!(f, "({i},{j})"),
            AtomLabel::Class(k) => write!(f, "c{k}"),
            AtomLabel::LogZ(n) => write!(f, "log z{n}"),
            AtomLabel::LogInvOneMinusZ(n) => write!(f, "log z'{n}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Atom {
    pub label: AtomLabel,
    pub value: C64,
}

impl Atom {
    pub const PI_I: Atom = Atom {
        label: AtomLabel::PiI,
        value: I_PI,
    };

    pub fn new(label: AtomLabel, value: C64) -> Self {
        Self { label, value }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct LogCombination {
    terms: BTreeMap<AtomLabel, (i64, C64)>,
}

impl LogCombination {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn atom(a: Atom) -> Self {
        let mut c = Self::zero();
        c.add_atom(1, a);
        c
    }

    pub fn pi_i(multiple: i64) -> Self {
        let mut c = Self::zero();
        c.add_atom(multiple, Atom::PI_I);
        c
    }

    pub fn add_atom(&mut self, coef: i64, a: Atom) {
        if coef == 0 {
            return;
        }
        let entry = self.terms.entry(a.label).or_insert((0, a.value));
        entry.0 += coef;
        if entry.0 == 0 {
            self.terms.remove(&a.label);
        }
    }

    pub fn add_scaled(&mut self, coef: i64, other: &LogCombination) {
        for (label, (c, v)) in &other.terms {
            self.add_atom(coef * c, Atom::new(*label, *v));
        }
    }

    pub fn plus(&self, other: &LogCombination) -> Self {
        let mut out = self.clone();
        out.add_scaled(1, other);
        out
    }

    pub fn minus(&self, other: &LogCombination) -> Self {
        let mut out = self.clone();
        out.add_scaled(-1, other);
        out
    }

    pub fn negated(&self) -> Self {
        let mut out = Self::zero();
        out.add_scaled(-1, self);
        out
    }

    pub fn value(&self) -> C64 {
        self.terms.values().map(|(c, v)| *v * *c as f64).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, Atom)> + '_ {
        self.terms.iter().map(|(l, (c, v))| (*c, Atom::new(*l, *v)))
    }

    pub fn coefficient(&self, label: AtomLabel) -> i64 {
        self.terms.get(&label).map_or(0, |t| t.0)
    }
}

/// Outcome of a zero test in `C ^ C`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum WedgeVerdict {
    /// Exact integer cancellation over atoms.
    Zero,
    /// The antisymmetric form `Im(conj(a) b)` is nonzero, so the element is.
    Nonzero,
    /// No atom cancellation, and the numeric invariant vanishes.
    Inconclusive,
}

/// Element of `C ^ C` in canonical form: pairs `(a, b)` with `a < b`,
/// nonzero coefficients only.
#[derive(Debug, Clone, Default)]
pub struct WedgeElement {
    terms: BTreeMap<(AtomLabel, AtomLabel), i64>,
    values: BTreeMap<AtomLabel, C64>,
}

impl WedgeElement {
    pub fn zero() -> Self {
        Self::default()
    }

    /// `coef * (a ^ b)`, with `b ^ a` stored as `-(a ^ b)` and `a ^ a` dropped.
    pub fn insert(&mut self, coef: i64, a: Atom, b: Atom) {
        if coef == 0 || a.label == b.label {
            return;
        }
        let (key, coef) = if a.label < b.label {
            ((a.label, b.label), coef)
        } else {
            ((b.label, a.label), -coef)
        };
        self.values.entry(a.label).or_insert(a.value);
        self.values.entry(b.label).or_insert(b.value);
        let c = self.terms.entry(key).or_insert(0);
        *c += coef;
        if *c == 0 {
            self.terms.remove(&key);
        }
    }

    /// Bilinear expansion of `coef * (x ^ y)`.
    pub fn add_wedge(&mut self, coef: i64, x: &LogCombination, y: &LogCombination) {
        for (cx, ax) in x.iter() {
            for (cy, ay) in y.iter() {
                self.insert(coef * cx * cy, ax, ay);
            }
        }
    }

    pub fn wedge(x: &LogCombination, y: &LogCombination) -> Self {
        let mut w = Self::zero();
        w.add_wedge(1, x, y);
        w
    }

    pub fn add(&mut self, coef: i64, other: &WedgeElement) {
        for ((a, b), c) in &other.terms {
            self.insert(coef * c, Atom::new(*a, other.values[a]), Atom::new(*b, other.values[b]));
        }
    }

    pub fn minus(&self, other: &WedgeElement) -> Self {
        let mut out = self.clone();
        out.add(-1, other);
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.is_zero()
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, AtomLabel, AtomLabel)> + '_ {
        self.terms.iter().map(|((a, b), c)| (*c, *a, *b))
    }

    /// The real antisymmetric form `sum c Im(conj(a) b)`, well defined on `C ^ C`.
    pub fn numeric_invariant(&self) -> f64 {
        self.terms
            .iter()
            .map(|((a, b), c)| *c as f64 * (self.values[a].conj() * self.values[b]).im)
            .sum()
    }

    pub fn verdict(&self, tol: f64) -> WedgeVerdict {
        if self.is_zero() {
            return WedgeVerdict::Zero;
        }
        let scale: f64 = self
            .terms
            .iter()
            .map(|((a, b), c)| (*c as f64).abs() * self.values[a].norm() * self.values[b].norm())
            .sum();
        if self.numeric_invariant().abs() > tol * scale.max(1.0) {
            WedgeVerdict::Nonzero
        } else {
            WedgeVerdict::Inconclusive
        }
    }
}

/// Equality of elements; atom values do not take part.
impl PartialEq for WedgeElement {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms
    }
}

impl fmt::Display for WedgeElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (n, ((a, b), c)) in self.terms.iter().enumerate() {
            if n > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c}·{a}∧{b}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn atom(n: u32, v: f64) -> Atom {
        Atom::new(AtomLabel::Class(n), C64::new(v, 0.3 * v))
    }

    #[test]
    fn antisymmetry_at_insertion() {
        let mut w = WedgeElement::zero();
        w.insert(1, atom(2, 1.0), atom(1, 2.0));
        let (c, a, b) = w.iter().next().unwrap();
        assert_eq!((c, a, b), (-1, AtomLabel::Class(1), AtomLabel::Class(2)));
        w.insert(1, atom(1, 2.0), atom(2, 1.0));
        assert!(w.is_zero());
        w.insert(5, atom(3, 1.0), atom(3, 1.0));
        assert!(w.is_zero());
    }

    #[test]
    fn self_wedge_of_combination_vanishes() {
        let mut x = LogCombination::atom(atom(1, 1.0));
        x.add_atom(-3, atom(4, 2.0));
        x.add_atom(2, Atom::PI_I);
        assert!(WedgeElement::wedge(&x, &x).is_zero());
    }

    #[test]
    fn numeric_verdicts() {
        let a = Atom::new(AtomLabel::LogZ(0), C64::new(1.0, 0.0));
        let b = Atom::new(AtomLabel::LogZ(1), C64::new(0.0, 1.0));
        let mut w = WedgeElement::zero();
        w.insert(1, a, b);
        assert_eq!(w.verdict(1e-12), WedgeVerdict::Nonzero);
        // two real atoms: the invariant vanishes, so nothing can be concluded
        let c = Atom::new(AtomLabel::LogZ(2), C64::new(2.0, 0.0));
        let mut w = WedgeElement::zero();
        w.insert(1, a, c);
        assert_eq!(w.verdict(1e-12), WedgeVerdict::Inconclusive);
        assert_eq!(WedgeElement::zero().verdict(1e-12), WedgeVerdict::Zero);
    }

    #[test]
    fn combination_arithmetic() {
        let x = LogCombination::atom(atom(1, 1.0));
        let y = LogCombination::atom(atom(2, 2.0));
        let s = x.plus(&y).minus(&x);
        assert_eq!(s, y);
        assert_eq!(s.coefficient(AtomLabel::Class(1)), 0);
        assert!((x.plus(&y).value() - C64::new(3.0, 0.9)).norm() < 1e-15);
        assert!(x.minus(&x).is_zero());
        assert_eq!(x.negated().coefficient(AtomLabel::Class(1)), -1);
    }
}

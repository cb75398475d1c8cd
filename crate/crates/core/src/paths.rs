//! Lifting paths of five-term tuples to the covering surface.
//!
//! A path `t -> (x0(t), x1(t))` induces the tuple
//! `(x0, x1, x1/x0, (1 - 1/x0)/(1 - 1/x1), (1 - x0)/(1 - x1))`. Each
//! coordinate carries branch integers `(p, q)` chosen so that
//! `Log x + p pi i` and `Log(1/(1-x)) + q pi i` vary continuously: crossing
//! `(-inf, 0)` downwards adds 2 to `p`, crossing `(1, inf)` downwards adds 2
//! to `q`, and upward crossings subtract 2. Points on a cut count as above it.

use serde::Serialize;

use crate::bloch::{five_tuple, CoveringPoint};
use crate::error::{CcsError, Result};
use crate::geometry::{C64, ONE};
use crate::polylog::lhat;
use crate::tol::{TOL_CMP, TOL_ZERO};

/// Steps are refined until each coordinate moves by less than this fraction
/// of its distance to 0 and 1.
const STEP_FRACTION: f64 = 0.1;

const MAX_REFINE_DEPTH: u32 = 40;

const BISECTION_TOL: f64 = 1e-12;

/// Vertices of the regular polygon used for loops.
pub const LOOP_POLYGON: usize = 64;

/// Piecewise-linear path in `(x0, x1)`, with the vertices spaced evenly in `t`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ParamPath {
    vertices: Vec<(C64, C64)>,
}

impl ParamPath {
    pub fn new(vertices: Vec<(C64, C64)>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(CcsError::PreconditionFailed("path needs a vertex".into()));
        }
        for (k, (x, y)) in vertices.iter().enumerate() {
            five_tuple(*x, *y).map_err(|_| CcsError::PathDegenerate {
                coord: 0,
                t: k as f64 / (vertices.len().max(2) - 1) as f64,
            })?;
        }
        Ok(Self { vertices })
    }

    pub fn constant(x: C64, y: C64) -> Result<Self> {
        Self::new(vec![(x, y)])
    }

    pub fn vertices(&self) -> &[(C64, C64)] {
        &self.vertices
    }

    pub fn start(&self) -> (C64, C64) {
        self.vertices[0]
    }

    pub fn end(&self) -> (C64, C64) {
        *self.vertices.last().expect("nonempty")
    }

    /// This path followed by `other`; `other` must start where this one ends.
    pub fn then(&self, other: &ParamPath) -> Result<Self> {
        let (a, b) = (self.end(), other.start());
        if !((a.0 - b.0).norm() <= TOL_CMP && (a.1 - b.1).norm() <= TOL_CMP) {
            return Err(CcsError::PreconditionFailed("paths do not meet".into()));
        }
        let mut v = self.vertices.clone();
        v.extend_from_slice(&other.vertices[1..]);
        Ok(Self { vertices: v })
    }

    pub fn reversed(&self) -> Self {
        let mut v = self.vertices.clone();
        v.reverse();
        Self { vertices: v }
    }
}

/// Five covering points over a five-term tuple.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LiftedFiveTuple {
    pub points: [CoveringPoint; 5],
}

impl LiftedFiveTuple {
    /// Branch integers `branches[i] = (p_i, q_i)` over `five_tuple(x, y)`.
    pub fn new(x: C64, y: C64, branches: [(i64, i64); 5]) -> Result<Self> {
        let z = five_tuple(x, y)?;
        let mut points = [CoveringPoint::new(x, 0, 0)?; 5];
        for i in 0..5 {
            points[i] = CoveringPoint::new(z[i], branches[i].0, branches[i].1)?;
        }
        Ok(Self { points })
    }

    /// All branch integers zero.
    pub fn principal(x: C64, y: C64) -> Result<Self> {
        Self::new(x, y, [(0, 0); 5])
    }

    pub fn branches(&self) -> [(i64, i64); 5] {
        self.points.map(|p| (p.p(), p.q()))
    }
}

/// Whether `z` is on the upper side, with the cuts themselves counted as upper.
fn upper(z: C64) -> bool {
    z.im >= 0.0
}

fn check_regular(z: &[C64; 5], t: f64) -> Result<()> {
    for (i, x) in z.iter().enumerate() {
        if x.norm() <= TOL_ZERO || (*x - ONE).norm() <= TOL_ZERO {
            return Err(CcsError::PathDegenerate { coord: i, t });
        }
    }
    Ok(())
}

struct Lifter<'a> {
    path: &'a ParamPath,
    branches: [(i64, i64); 5],
}

impl Lifter<'_> {
    fn eval(&self, seg: usize, s: f64) -> Result<[C64; 5]> {
        let (a, b) = (self.path.vertices[seg], self.path.vertices[seg + 1]);
        let x = a.0 + (b.0 - a.0) * s;
        let y = a.1 + (b.1 - a.1) * s;
        let t = (seg as f64 + s) / (self.path.vertices.len() - 1) as f64;
        let z = five_tuple(x, y).map_err(|e| match e {
            CcsError::DegenerateFiveTuple(i) => CcsError::PathDegenerate { coord: i, t },
            other => other,
        })?;
        check_regular(&z, t)?;
        Ok(z)
    }

    fn small_step(za: &[C64; 5], zb: &[C64; 5]) -> bool {
        za.iter().zip(zb).all(|(a, b)| {
            let room = a.norm().min((*a - ONE).norm()).min(b.norm()).min((*b - ONE).norm());
            (*b - *a).norm() < STEP_FRACTION * room
        })
    }

    /// Lifts the piece of segment `seg` between parameters `s0` and `s1`.
    fn walk(&mut self, seg: usize, s0: f64, z0: [C64; 5], s1: f64, z1: [C64; 5], depth: u32) -> Result<()> {
        if !Self::small_step(&z0, &z1) {
            if depth >= MAX_REFINE_DEPTH {
                return Err(CcsError::PathDegenerate {
                    coord: 0,
                    t: (seg as f64 + s0) / (self.path.vertices.len() - 1) as f64,
                });
            }
            let sm = 0.5 * (s0 + s1);
            let zm = self.eval(seg, sm)?;
            self.walk(seg, s0, z0, sm, zm, depth + 1)?;
            return self.walk(seg, sm, zm, s1, z1, depth + 1);
        }
        for i in 0..5 {
            let (u0, u1) = (upper(z0[i]), upper(z1[i]));
            if u0 == u1 {
                continue;
            }
            let (mut lo, mut hi) = (s0, s1);
            while hi - lo > BISECTION_TOL {
                let mid = 0.5 * (lo + hi);
                if upper(self.eval(seg, mid)?[i]) == u0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            let re = self.eval(seg, 0.5 * (lo + hi))?[i].re;
            let step = if u0 { 2 } else { -2 };
            if re < 0.0 {
                self.branches[i].0 += step;
            } else if re > 1.0 {
                self.branches[i].1 += step;
            }
        }
        Ok(())
    }
}

/// The endpoint of the lift of `path` starting at `start`.
pub fn lift_path(path: &ParamPath, start: &LiftedFiveTuple) -> Result<LiftedFiveTuple> {
    let (x, y) = path.start();
    let z = five_tuple(x, y)?;
    for (i, pt) in start.points.iter().enumerate() {
        if (pt.z() - z[i]).norm() > TOL_CMP * z[i].norm().max(1.0) {
            return Err(CcsError::PreconditionFailed(format!(
                "start does not lie over the path at coordinate {i}"
            )));
        }
    }
    let mut lifter = Lifter {
        path,
        branches: start.branches(),
    };
    for seg in 0..path.vertices.len().saturating_sub(1) {
        let z0 = lifter.eval(seg, 0.0)?;
        let z1 = lifter.eval(seg, 1.0)?;
        lifter.walk(seg, 0.0, z0, 1.0, z1, 0)?;
    }
    let (x, y) = path.end();
    LiftedFiveTuple::new(x, y, lifter.branches)
}

/// `sum (-1)^i Lhat(point_i)`
pub fn five_term_sum_along(lift: &LiftedFiveTuple) -> C64 {
    lift.points
        .iter()
        .enumerate()
        .map(|(i, p)| if i % 2 == 0 { lhat(p) } else { -lhat(p) })
        .sum()
}

/// Which coordinate of the path a loop moves.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mover {
    X0,
    X1,
}

/// `windings` loops (positive = counterclockwise) of one coordinate around
/// `center`, starting and ending at the base point `(x, y)`. The loop runs
/// radially to the circle of radius `radius`, around it, and back.
pub fn loop_path(x: C64, y: C64, mover: Mover, center: C64, radius: f64, windings: i64) -> Result<ParamPath> {
    let base = match mover {
        Mover::X0 => x,
        Mover::X1 => y,
    };
    let place = |w: C64| match mover {
        Mover::X0 => (w, y),
        Mover::X1 => (x, w),
    };
    let mut v = vec![place(base)];
    if windings != 0 {
        let dir = (base - center) / (base - center).norm();
        let theta0 = dir.arg();
        let sign = windings.signum() as f64;
        v.push(place(center + dir * radius));
        for _ in 0..windings.abs() {
            for k in 1..=LOOP_POLYGON {
                let th = theta0 + sign * 2.0 * std::f64::consts::PI * k as f64 / LOOP_POLYGON as f64;
                v.push(place(center + C64::from_polar(radius, th)));
            }
        }
        // close exactly on the approach point
        let last = v.len() - 1;
        v[last] = place(center + dir * radius);
        v.push(place(base));
    }
    ParamPath::new(v)
}

/// Windings of the composite loop: `x0` goes `p0` times counterclockwise
/// around 0, `q0` times clockwise around 1, `r` times clockwise around `x1`;
/// then `x1` goes `p1` times counterclockwise around 0 and `q1` times
/// clockwise around 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Windings {
    pub p0: i64,
    pub q0: i64,
    pub r: i64,
    pub p1: i64,
    pub q1: i64,
}

impl Windings {
    /// Closed form of the endpoint branches when starting from the principal lift.
    pub fn expected(&self) -> [(i64, i64); 5] {
        let Windings { p0, q0, r, p1, q1 } = *self;
        [
            (2 * p0, 2 * q0),
            (2 * p1, 2 * q1),
            (-2 * p0 + 2 * p1, 2 * p0 + 2 * r),
            (-2 * p0 - 2 * q0 + 2 * p1 + 2 * q1, 2 * p0 - 2 * q1 + 2 * r),
            (-2 * q0 + 2 * q1, -2 * q1 + 2 * r),
        ]
    }
}

fn loop_radius(center: C64, others: &[C64], base: C64) -> f64 {
    let d = others.iter().map(|o| (*o - center).norm()).fold(f64::INFINITY, f64::min);
    (0.4 * d).min(0.5 * (base - center).norm())
}

pub fn composite_loop(x: C64, y: C64, w: &Windings) -> Result<ParamPath> {
    let zero = C64::new(0.0, 0.0);
    let parts = [
        (Mover::X0, zero, [ONE, y], w.p0),
        (Mover::X0, ONE, [zero, y], -w.q0),
        (Mover::X0, y, [zero, ONE], -w.r),
        (Mover::X1, zero, [ONE, x], w.p1),
        (Mover::X1, ONE, [zero, x], -w.q1),
    ];
    let mut path = ParamPath::constant(x, y)?;
    for (mover, center, others, n) in parts {
        let base = if mover == Mover::X0 { x } else { y };
        let radius = loop_radius(center, &others, base);
        path = path.then(&loop_path(x, y, mover, center, radius, n)?)?;
    }
    Ok(path)
}

/// A base point with every coordinate of the five-term tuple in the upper
/// half plane, chosen so that the unit loops of all five kinds lift cleanly.
pub fn find_base_point() -> Result<(C64, C64)> {
    let preferred = (C64::new(0.5, 0.8), C64::new(0.3, 0.6));
    let mut candidates = vec![preferred];
    for i in 0..21 {
        for j in 1..11 {
            for k in 0..21 {
                for l in 1..11 {
                    candidates.push((
                        C64::new(-1.0 + 0.15 * i as f64, 0.2 * j as f64),
                        C64::new(-1.0 + 0.15 * k as f64, 0.2 * l as f64),
                    ));
                }
            }
        }
    }
    for (x, y) in candidates {
        if base_point_ok(x, y) {
            return Ok((x, y));
        }
    }
    Err(CcsError::PreconditionFailed("no upper half plane base point found".into()))
}

fn base_point_ok(x: C64, y: C64) -> bool {
    let Ok(z) = five_tuple(x, y) else {
        return false;
    };
    if !z.iter().all(|c| c.im > 0.05) {
        return false;
    }
    let units = [
        Windings { p0: 1, q0: 0, r: 0, p1: 0, q1: 0 },
        Windings { p0: 0, q0: 1, r: 0, p1: 0, q1: 0 },
        Windings { p0: 0, q0: 0, r: 1, p1: 0, q1: 0 },
        Windings { p0: 0, q0: 0, r: 0, p1: 1, q1: 0 },
        Windings { p0: 0, q0: 0, r: 0, p1: 0, q1: 1 },
    ];
    let Ok(start) = LiftedFiveTuple::principal(x, y) else {
        return false;
    };
    units.iter().all(|w| {
        composite_loop(x, y, w)
            .and_then(|p| lift_path(&p, &start))
            .map(|end| end.branches() == w.expected())
            .unwrap_or(false)
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PatternCheck {
    pub base: (C64, C64),
    pub windings: Windings,
    pub lifted: [(i64, i64); 5],
    pub expected: [(i64, i64); 5],
    pub matches: bool,
    /// Coordinates where the lift differs from the closed form.
    pub diff: Vec<usize>,
    pub five_term_sum: C64,
}

/// Lifts the composite loop from the principal lift at `base` and compares
/// the endpoint with the closed form.
pub fn verify_pq_pattern_at(base: (C64, C64), w: &Windings) -> Result<PatternCheck> {
    let (x, y) = base;
    let start = LiftedFiveTuple::principal(x, y)?;
    let end = lift_path(&composite_loop(x, y, w)?, &start)?;
    let lifted = end.branches();
    let expected = w.expected();
    let diff: Vec<usize> = (0..5).filter(|&i| lifted[i] != expected[i]).collect();
    Ok(PatternCheck {
        base,
        windings: *w,
        lifted,
        expected,
        matches: diff.is_empty(),
        diff,
        five_term_sum: five_term_sum_along(&end),
    })
}

pub fn verify_pq_pattern(w: &Windings) -> Result<PatternCheck> {
    verify_pq_pattern_at(find_base_point()?, w)
}

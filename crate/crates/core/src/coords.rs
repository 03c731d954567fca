//! Integral coordinates for simple multicurves, norm functionals on them, and
//! exhaustive enumeration of norm balls.
//!
//! Torus classes are pairs `(p, q)` up to sign. Genus-2 multicurves use
//! Dehn–Thurston coordinates `(m, t)` relative to the theta decomposition:
//! `m_i` is the intersection number with the pants curve `c_i` and `t_i` the
//! twist, which is the weight of `c_i` itself when `m_i = 0`.

use std::fmt;
use std::io::{self, Write};

use num_integer::Integer;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hyperbolic::{torus_simple_length, HolonomyRep};
use crate::surface::{ModelKind, SurfaceModel};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TorusCoord {
    p: i64,
    q: i64,
}

impl TorusCoord {
    pub fn p(&self) -> i64 {
        self.p
    }

    pub fn q(&self) -> i64 {
        self.q
    }

    /// Weight of the multicurve: `gcd(|p|, |q|)`.
    pub fn weight(&self) -> u64 {
        self.p.gcd(&self.q) as u64
    }

    pub fn primitive(&self) -> TorusCoord {
        let d = self.weight() as i64;
        TorusCoord { p: self.p / d, q: self.q / d }
    }

    pub fn scale(&self, d: u64) -> TorusCoord {
        TorusCoord { p: self.p * d as i64, q: self.q * d as i64 }
    }
}

impl fmt::Display for TorusCoord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.p, self.q)
    }
}

/// Sign-normalized representative: `p > 0`, or `p = 0` and `q > 0`.
pub fn canonicalize_torus(p: i64, q: i64) -> Result<TorusCoord> {
    match (p, q) {
        (0, 0) => Err(Error::EmptyMulticurve),
        (p, q) if p < 0 || (p == 0 && q < 0) => Ok(TorusCoord { p: -p, q: -q }),
        (p, q) => Ok(TorusCoord { p, q }),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DTCoord {
    m: [i64; 3],
    t: [i64; 3],
}

impl DTCoord {
    pub fn m(&self) -> [i64; 3] {
        self.m
    }

    pub fn t(&self) -> [i64; 3] {
        self.t
    }

    pub(crate) fn from_parts_unchecked(m: [i64; 3], t: [i64; 3]) -> DTCoord {
        DTCoord { m, t }
    }

    /// The pants curve `c_i` with weight `w`.
    pub fn pants_curve(i: usize, w: i64) -> DTCoord {
        let mut t = [0; 3];
        t[i] = w;
        DTCoord { m: [0; 3], t }
    }
}

impl fmt::Display for DTCoord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(m={},{},{};t={},{},{})", self.m[0], self.m[1], self.m[2], self.t[0], self.t[1], self.t[2])
    }
}

pub fn validate_dt(m: [i64; 3], t: [i64; 3]) -> Result<DTCoord> {
    if let Some(i) = m.iter().position(|&x| x < 0) {
        return Err(Error::NegativeIntersectionWeight(i + 1));
    }
    let sum: i64 = m.iter().sum();
    if sum % 2 != 0 {
        return Err(Error::ParityViolation(sum));
    }
    if let Some(i) = (0..3).find(|&i| m[i] == 0 && t[i] < 0) {
        return Err(Error::NegativeTwistOnZeroWeight(i + 1));
    }
    if m == [0; 3] && t == [0; 3] {
        return Err(Error::EmptyMulticurve);
    }
    Ok(DTCoord { m, t })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Coord {
    Torus(TorusCoord),
    Dt(DTCoord),
}

impl Coord {
    pub fn integers(&self) -> Vec<i64> {
        match self {
            Coord::Torus(c) => vec![c.p, c.q],
            Coord::Dt(c) => c.m.iter().chain(&c.t).copied().collect(),
        }
    }
}

impl fmt::Display for Coord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coord::Torus(c) => c.fmt(f),
            Coord::Dt(c) => c.fmt(f),
        }
    }
}

/// Positive rational weights of a piecewise-linear norm `Σ u_i m_i + Σ v_i |t_i|`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DtWeights {
    pub u: [Ratio<i64>; 3],
    pub v: [Ratio<i64>; 3],
}

impl DtWeights {
    pub fn integers(u: [i64; 3], v: [i64; 3]) -> DtWeights {
        DtWeights { u: u.map(Ratio::from_integer), v: v.map(Ratio::from_integer) }
    }

    fn all(&self) -> impl Iterator<Item = Ratio<i64>> + '_ {
        self.u.iter().chain(&self.v).copied()
    }

    /// Common denominator and the weights scaled by it.
    fn scaled(&self) -> (i64, [i64; 6]) {
        let den = self.all().fold(1i64, |acc, w| acc.lcm(w.denom()));
        let mut out = [0; 6];
        for (o, w) in out.iter_mut().zip(self.all()) {
            *o = (w * den).to_integer();
        }
        (den, out)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum NormSpec {
    TorusDiamond,
    TorusSquare,
    DtL1,
    DtWeighted(DtWeights),
    HyperbolicLength(HolonomyRep),
}

impl NormSpec {
    pub fn name(&self) -> &'static str {
        match self {
            NormSpec::TorusDiamond => "torus-diamond",
            NormSpec::TorusSquare => "torus-square",
            NormSpec::DtL1 => "dt-L1",
            NormSpec::DtWeighted(_) => "dt-weighted",
            NormSpec::HyperbolicLength(_) => "hyperbolic-length",
        }
    }

    fn applies_to(&self, kind: ModelKind) -> bool {
        match self {
            NormSpec::TorusDiamond | NormSpec::TorusSquare => kind == ModelKind::PuncturedTorus,
            NormSpec::DtL1 | NormSpec::DtWeighted(_) => kind == ModelKind::GenusTwo,
            NormSpec::HyperbolicLength(rep) => rep.model.kind == kind,
        }
    }
}

fn mismatch(norm: &NormSpec, coord: &Coord) -> Error {
    let family = match coord {
        Coord::Torus(_) => "torus coordinates",
        Coord::Dt(_) => "Dehn-Thurston coordinates",
    };
    Error::NormModelMismatch(format!("{} does not apply to {family}", norm.name()))
}

pub fn norm_eval(norm: &NormSpec, coord: &Coord) -> Result<f64> {
    match (norm, coord) {
        (NormSpec::TorusDiamond, Coord::Torus(c)) => Ok((c.p.abs() + c.q.abs()) as f64),
        (NormSpec::TorusSquare, Coord::Torus(c)) => Ok(c.p.abs().max(c.q.abs()) as f64),
        (NormSpec::DtL1, Coord::Dt(c)) => Ok(c.m.iter().chain(&c.t).map(|x| x.abs()).sum::<i64>() as f64),
        (NormSpec::DtWeighted(w), Coord::Dt(c)) => {
            let (den, s) = w.scaled();
            Ok(scaled_dt_norm(&s, c) as f64 / den as f64)
        }
        (NormSpec::HyperbolicLength(rep), Coord::Torus(c)) => torus_simple_length(rep, *c),
        _ => Err(mismatch(norm, coord)),
    }
}

fn scaled_dt_norm(s: &[i64; 6], c: &DTCoord) -> i64 {
    (0..3).map(|i| s[i] * c.m[i] + s[i + 3] * c.t[i].abs()).sum()
}

/// Lower bound on `ℓ_X(p,q) / (|p| + |q|)`, estimated over primitive classes
/// with `|p| + |q| <= 64` and shrunk by a safety factor of 0.9.
pub fn hyperbolic_comparability(rep: &HolonomyRep) -> Result<f64> {
    let mut best = f64::INFINITY;
    for p in 0..=64i64 {
        for q in -64i64..=64 {
            if p + q.abs() > 64 || p.gcd(&q) != 1 || (p == 0 && q < 0) {
                continue;
            }
            let len = torus_simple_length(rep, TorusCoord { p, q })?;
            best = best.min(len / (p + q.abs()) as f64);
        }
    }
    Ok(0.9 * best)
}

/// One slab of a ball partition: a fixed `p` (torus) or a fixed `m` (genus 2).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Slab {
    TorusP(i64),
    DtM([i64; 3]),
}

/// The set `{α in ML_Z : norm(α) <= L}` as a restartable, partitionable stream.
#[derive(Debug, Clone)]
pub struct Ball {
    norm: NormSpec,
    l: f64,
    bound: Bound,
}

#[derive(Debug, Clone)]
enum Bound {
    /// `|p| + |q| <= r` or `max(|p|,|q|) <= r`, filtered per point by the norm.
    Torus { r: i64 },
    /// Integer-scaled weights and the scaled radius.
    Dt { weights: [i64; 6], radius: i64 },
}

pub fn enumerate_ball(model: &SurfaceModel, norm: &NormSpec, l: f64) -> Result<Ball> {
    if !(l > 0.0) || !l.is_finite() {
        return Err(Error::Precondition(format!("L must be positive and finite, got {l}")));
    }
    let probe = match model.kind {
        ModelKind::PuncturedTorus => Coord::Torus(TorusCoord { p: 1, q: 0 }),
        ModelKind::GenusTwo => Coord::Dt(DTCoord::pants_curve(0, 1)),
    };
    if !norm.applies_to(model.kind) {
        return Err(mismatch(norm, &probe));
    }
    let bound = match norm {
        NormSpec::TorusDiamond | NormSpec::TorusSquare => Bound::Torus { r: l.floor() as i64 },
        NormSpec::HyperbolicLength(rep) => {
            let c1 = hyperbolic_comparability(rep)?;
            if !(c1 > 0.0) {
                return Err(Error::UnboundedBall("hyperbolic length is not proper".into()));
            }
            Bound::Torus { r: (l / c1).ceil() as i64 }
        }
        NormSpec::DtL1 => Bound::Dt { weights: [1; 6], radius: l.floor() as i64 },
        NormSpec::DtWeighted(w) => {
            if let Some(bad) = w.all().find(|x| *x <= Ratio::from_integer(0)) {
                return Err(Error::UnboundedBall(format!("dt-weighted norm has nonpositive weight {bad}")));
            }
            let (den, weights) = w.scaled();
            Bound::Dt { weights, radius: (l * den as f64).floor() as i64 }
        }
    };
    Ok(Ball { norm: norm.clone(), l, bound })
}

impl Ball {
    pub fn radius(&self) -> f64 {
        self.l
    }

    pub fn norm(&self) -> &NormSpec {
        &self.norm
    }

    /// Disjoint slabs in enumeration order; their union is the ball.
    pub fn slabs(&self) -> Vec<Slab> {
        match self.bound {
            Bound::Torus { r } => (0..=r).map(Slab::TorusP).collect(),
            Bound::Dt { weights: w, radius } => {
                let mut out = Vec::new();
                for m1 in 0..=radius / w[0] {
                    let r1 = radius - w[0] * m1;
                    for m2 in 0..=r1 / w[1] {
                        let r2 = r1 - w[1] * m2;
                        for m3 in 0..=r2 / w[2] {
                            if (m1 + m2 + m3) % 2 == 0 {
                                out.push(Slab::DtM([m1, m2, m3]));
                            }
                        }
                    }
                }
                out
            }
        }
    }

    /// Points of one slab, in lexicographic order.
    pub fn slab_points(&self, slab: Slab) -> Vec<Coord> {
        let mut out = Vec::new();
        match (slab, &self.bound) {
            (Slab::TorusP(p), Bound::Torus { r }) => {
                let span = match self.norm {
                    NormSpec::TorusSquare => *r,
                    _ => r - p,
                };
                let lo = if p == 0 { 1 } else { -span };
                for q in lo..=span {
                    let c = Coord::Torus(TorusCoord { p, q });
                    let keep = match &self.norm {
                        NormSpec::HyperbolicLength(_) => {
                            norm_eval(&self.norm, &c).map(|v| v <= self.l).unwrap_or(false)
                        }
                        _ => true,
                    };
                    if keep {
                        out.push(c);
                    }
                }
            }
            (Slab::DtM(m), Bound::Dt { weights: w, radius }) => {
                let rest = radius - (0..3).map(|i| w[i] * m[i]).sum::<i64>();
                let range = |i: usize, rem: i64| {
                    let hi = rem / w[i + 3];
                    (if m[i] == 0 { 0 } else { -hi })..=hi
                };
                for t1 in range(0, rest) {
                    let r1 = rest - w[3] * t1.abs();
                    for t2 in range(1, r1) {
                        let r2 = r1 - w[4] * t2.abs();
                        for t3 in range(2, r2) {
                            if m == [0; 3] && t1 == 0 && t2 == 0 && t3 == 0 {
                                continue;
                            }
                            out.push(Coord::Dt(DTCoord { m, t: [t1, t2, t3] }));
                        }
                    }
                }
            }
            _ => unreachable!("slab does not belong to this ball"),
        }
        out
    }

    pub fn iter(&self) -> impl Iterator<Item = Coord> + '_ {
        self.slabs().into_iter().flat_map(move |s| self.slab_points(s))
    }

    pub fn count(&self) -> u64 {
        self.slabs().into_iter().map(|s| self.slab_points(s).len() as u64).sum()
    }

    /// Writes the ball as CSV with header `model,norm,L,coords...`.
    pub fn write_csv<W: Write>(&self, model: &SurfaceModel, mut out: W) -> io::Result<()> {
        let cols = match model.kind {
            ModelKind::PuncturedTorus => "p,q",
            ModelKind::GenusTwo => "m1,m2,m3,t1,t2,t3",
        };
        writeln!(out, "model,norm,L,{cols}")?;
        for c in self.iter() {
            let ints: Vec<String> = c.integers().iter().map(|x| x.to_string()).collect();
            writeln!(out, "{},{},{},{}", model.kind, self.norm.name(), self.l, ints.join(","))?;
        }
        Ok(())
    }
}

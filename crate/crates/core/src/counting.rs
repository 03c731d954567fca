//! Per-type counts in norm balls and the estimators built on them.

use std::collections::{BTreeMap, HashMap};
use std::sync::atomic::{AtomicU64, Ordering};

use num_rational::Ratio;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coords::{enumerate_ball, norm_eval, Coord, NormSpec, Slab};
use crate::error::{Error, Result};
use crate::hyperbolic::{word_length, HolonomyRep};
use crate::surface::{ModelKind, SurfaceModel};
use crate::typing::{type_key, TypeKey};
use crate::words::{orbit_ball, CyclicWord, OrbitOptions};

pub const DEFAULT_POINT_CAP: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TypeHistogram {
    pub model: ModelKind,
    pub norm: String,
    pub l: f64,
    pub counts: BTreeMap<TypeKey, u64>,
}

impl TypeHistogram {
    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    pub fn get(&self, key: &TypeKey) -> u64 {
        self.counts.get(key).copied().unwrap_or(0)
    }
}

fn merge_counts(into: &mut BTreeMap<TypeKey, u64>, from: BTreeMap<TypeKey, u64>) {
    for (k, v) in from {
        *into.entry(k).or_insert(0) += v;
    }
}

/// `(L, value)` pairs with strictly increasing `L` and finite nonnegative values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceSeries {
    points: Vec<(f64, f64)>,
}

impl ConvergenceSeries {
    pub fn new(points: Vec<(f64, f64)>) -> Result<ConvergenceSeries> {
        if points.windows(2).any(|w| !(w[0].0 < w[1].0)) {
            return Err(Error::Precondition("series L values must be strictly increasing".into()));
        }
        if let Some((l, v)) = points.iter().find(|(_, v)| !v.is_finite() || *v < 0.0) {
            return Err(Error::DegenerateSeries(format!("value {v} at L = {l}")));
        }
        Ok(ConvergenceSeries { points })
    }

    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn last(&self) -> Option<f64> {
        self.points.last().map(|p| p.1)
    }

    /// Largest relative change between consecutive entries among the last three.
    pub fn stability(&self) -> Option<f64> {
        let n = self.points.len();
        if n < 2 {
            return None;
        }
        let tail = &self.points[n.saturating_sub(3)..];
        Some(
            tail.windows(2)
                .map(|w| {
                    let (a, b) = (w[0].1, w[1].1);
                    if b == 0.0 {
                        if a == 0.0 {
                            0.0
                        } else {
                            f64::INFINITY
                        }
                    } else {
                        ((b - a) / b).abs()
                    }
                })
                .fold(0.0, f64::max),
        )
    }

    pub fn is_nondecreasing(&self) -> bool {
        self.points.windows(2).all(|w| w[0].1 <= w[1].1)
    }
}

fn check_schedule(schedule: &[f64]) -> Result<()> {
    if schedule.is_empty() {
        return Err(Error::Precondition("empty L schedule".into()));
    }
    if schedule.iter().any(|l| !(*l > 0.0) || !l.is_finite()) {
        return Err(Error::Precondition("L values must be positive and finite".into()));
    }
    if schedule.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::Precondition("L schedule must be strictly increasing".into()));
    }
    Ok(())
}

/// Coordinate with the residues of its twists modulo the crossing numbers.
/// Twisting a full turn about a pants curve is a mapping class, so the type
/// only depends on this reduction.
fn type_cache_key(c: &Coord) -> [i64; 3] {
    match c {
        Coord::Dt(d) => {
            let (m, t) = (d.m(), d.t());
            std::array::from_fn(|i| if m[i] > 0 { t[i].rem_euclid(m[i]) } else { t[i] })
        }
        Coord::Torus(t) => [t.weight() as i64, 0, 0],
    }
}

/// Histograms for every `L` in the schedule from a single pass over the largest ball.
pub fn histogram_series(
    model: &SurfaceModel,
    norm: &NormSpec,
    schedule: &[f64],
    point_cap: u64,
) -> Result<Vec<TypeHistogram>> {
    check_schedule(schedule)?;
    let l_max = *schedule.last().expect("schedule is nonempty");
    let ball = enumerate_ball(model, norm, l_max)?;
    let seen = AtomicU64::new(0);
    let per_slab = |slab: Slab| -> Result<Vec<BTreeMap<TypeKey, u64>>> {
        let points = ball.slab_points(slab);
        if seen.fetch_add(points.len() as u64, Ordering::Relaxed) + points.len() as u64 > point_cap {
            return Err(Error::BudgetExceeded { what: "enumerated points", cap: point_cap, partial_l: l_max });
        }
        let mut cache: HashMap<[i64; 3], TypeKey> = HashMap::new();
        let mut hists = vec![BTreeMap::new(); schedule.len()];
        for c in points {
            let value = norm_eval(norm, &c)?;
            let first = schedule.partition_point(|l| *l < value);
            if first == schedule.len() {
                continue;
            }
            let ck = type_cache_key(&c);
            let key = match cache.get(&ck) {
                Some(k) => k.clone(),
                None => {
                    let k = type_key(model, &c)?;
                    cache.insert(ck, k.clone());
                    k
                }
            };
            for h in &mut hists[first..] {
                *h.entry(key.clone()).or_insert(0u64) += 1;
            }
        }
        Ok(hists)
    };
    let slabs = ball.slabs();
    let partial: Vec<Vec<BTreeMap<TypeKey, u64>>> = slabs.into_par_iter().map(per_slab).collect::<Result<_>>()?;
    let mut merged = vec![BTreeMap::new(); schedule.len()];
    for hs in partial {
        for (into, from) in merged.iter_mut().zip(hs) {
            merge_counts(into, from);
        }
    }
    Ok(schedule
        .iter()
        .zip(merged)
        .map(|(&l, counts)| TypeHistogram { model: model.kind, norm: norm.name().to_string(), l, counts })
        .collect())
}

pub fn count_by_type(model: &SurfaceModel, norm: &NormSpec, l: f64) -> Result<TypeHistogram> {
    Ok(histogram_series(model, norm, &[l], DEFAULT_POINT_CAP)?.remove(0))
}

/// Counts divided by `L^n`.
pub fn normalized_count(h: &TypeHistogram, exponent: u32) -> BTreeMap<TypeKey, f64> {
    let scale = h.l.powi(exponent as i32);
    h.counts.iter().map(|(k, v)| (k.clone(), *v as f64 / scale)).collect()
}

/// Partial sum of normalized per-type counts over the observed types.
pub fn estimate_kappa(h: &TypeHistogram, exponent: u32) -> f64 {
    normalized_count(h, exponent).values().sum()
}

/// Total count over `L^n` along the schedule.
pub fn estimate_b(model: &SurfaceModel, norm: &NormSpec, schedule: &[f64]) -> Result<ConvergenceSeries> {
    let hists = histogram_series(model, norm, schedule, DEFAULT_POINT_CAP)?;
    series_of(&hists, |h| h.total() as f64 / h.l.powi(model.exponent as i32))
}

/// Applies `f` to each histogram of a schedule.
pub fn series_of(hists: &[TypeHistogram], f: impl Fn(&TypeHistogram) -> f64) -> Result<ConvergenceSeries> {
    ConvergenceSeries::new(hists.iter().map(|h| (h.l, f(h))).collect())
}

/// Least-squares slope of `log value` against `log L`, with its standard error.
pub fn fit_exponent(series: &ConvergenceSeries) -> Result<(f64, f64)> {
    let pts = series.points();
    if pts.len() < 4 {
        return Err(Error::DegenerateSeries(format!("need at least 4 points, got {}", pts.len())));
    }
    if let Some((l, _)) = pts.iter().find(|(_, v)| *v <= 0.0) {
        return Err(Error::DegenerateSeries(format!("nonpositive count at L = {l}")));
    }
    let xs: Vec<f64> = pts.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = pts.iter().map(|p| p.1.ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ssr: f64 = xs.iter().zip(&ys).map(|(x, y)| (y - intercept - slope * x).powi(2)).sum();
    let stderr = (ssr / (n - 2.0) / sxx).sqrt();
    Ok((slope, stderr))
}

pub fn ratio_series(num: &ConvergenceSeries, den: &ConvergenceSeries) -> Result<ConvergenceSeries> {
    if num.len() != den.len() || num.points().iter().zip(den.points()).any(|(a, b)| a.0 != b.0) {
        return Err(Error::ScheduleMismatch("ratio of series with different L schedules".into()));
    }
    let pts = num
        .points()
        .iter()
        .zip(den.points())
        .map(|(a, b)| {
            if b.1 > 0.0 {
                Ok((a.0, a.1 / b.1))
            } else {
                Err(Error::DegenerateSeries(format!("zero denominator at L = {}", a.0)))
            }
        })
        .collect::<Result<Vec<_>>>()?;
    ConvergenceSeries::new(pts)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrequencyReport {
    pub total: u64,
    pub fractions: BTreeMap<TypeKey, Ratio<u64>>,
}

impl FrequencyReport {
    pub fn value(&self, key: &TypeKey) -> f64 {
        self.fractions.get(key).map_or(0.0, |r| *r.numer() as f64 / *r.denom() as f64)
    }
}

pub fn frequency_report(h: &TypeHistogram) -> Result<FrequencyReport> {
    let total = h.total();
    if total == 0 {
        return Err(Error::EmptyHistogram);
    }
    let fractions = h.counts.iter().map(|(k, v)| (k.clone(), Ratio::new(*v, total))).collect();
    Ok(FrequencyReport { total, fractions })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TailReport {
    /// Selected keys, highest count first.
    pub keys: Vec<TypeKey>,
    pub covered: f64,
}

/// Greedy choice of the most frequent keys until they cover at least `1 - eps`.
pub fn tail_report(h: &TypeHistogram, eps: f64) -> Result<TailReport> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::Precondition(format!("epsilon must lie in (0, 1), got {eps}")));
    }
    let total = h.total();
    if total == 0 {
        return Err(Error::EmptyHistogram);
    }
    let mut ranked: Vec<(&TypeKey, u64)> = h.counts.iter().map(|(k, v)| (k, *v)).collect();
    ranked.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));
    let mut keys = Vec::new();
    let mut covered = 0u64;
    for (k, v) in ranked {
        if covered as f64 >= (1.0 - eps) * total as f64 {
            break;
        }
        keys.push(k.clone());
        covered += v;
    }
    Ok(TailReport { keys, covered: covered as f64 / total as f64 })
}

/// Orbit counts `#{γ' in Map(S)·γ : ℓ_X(γ') <= L}` along the schedule, from a
/// single breadth-first search at the largest `L`.
pub fn count_orbit_nonsimple(
    model: &SurfaceModel,
    seed: &CyclicWord,
    rep: &HolonomyRep,
    schedule: &[f64],
    opts: OrbitOptions,
) -> Result<ConvergenceSeries> {
    check_schedule(schedule)?;
    if rep.model.kind != model.kind {
        return Err(Error::NormModelMismatch("representation belongs to another model".into()));
    }
    let length = |w: &CyclicWord| word_length(rep, w);
    let l_max = *schedule.last().expect("schedule is nonempty");
    let ball = match orbit_ball(model, seed, length, l_max, opts) {
        Ok(b) => b,
        Err(Error::BudgetExceeded { what, cap, .. }) => {
            let mut reached = 0.0;
            for &l in schedule.iter().rev().skip(1) {
                if orbit_ball(model, seed, length, l, opts).is_ok() {
                    reached = l;
                    break;
                }
            }
            return Err(Error::BudgetExceeded { what, cap, partial_l: reached });
        }
        Err(e) => return Err(e),
    };
    ConvergenceSeries::new(schedule.iter().map(|&l| (l, ball.count_within(l) as f64)).collect())
}

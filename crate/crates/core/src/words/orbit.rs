use std::collections::HashSet;

use rayon::prelude::*;

use super::automorphism::{apply_automorphism, mcg_generators};
use super::CyclicWord;
use crate::error::{Error, Result};
use crate::surface::SurfaceModel;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrbitOptions {
    /// Classes with length up to `(1 + margin) * L` are expanded.
    pub margin: f64,
    /// Maximum number of distinct classes visited.
    pub node_cap: u64,
}

impl Default for OrbitOptions {
    fn default() -> Self {
        OrbitOptions { margin: 0.3, node_cap: 1_000_000 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OrbitBall {
    /// Classes with length `<= L`, sorted by length then canonical word.
    pub retained: Vec<(CyclicWord, f64)>,
    /// Distinct classes visited, including those beyond the exploration radius.
    pub visited: usize,
}

impl OrbitBall {
    pub fn count_within(&self, l: f64) -> usize {
        self.retained.partition_point(|(_, len)| *len <= l)
    }
}

/// Breadth-first closure of `seed` under the mapping class group generators,
/// restricted to classes of length at most `(1 + margin) * l`.
pub fn orbit_ball<F>(
    model: &SurfaceModel,
    seed: &CyclicWord,
    length: F,
    l: f64,
    opts: OrbitOptions,
) -> Result<OrbitBall>
where
    F: Fn(&CyclicWord) -> Result<f64> + Sync,
{
    if !(opts.margin >= 0.0) {
        return Err(Error::Precondition(format!("margin must be nonnegative, got {}", opts.margin)));
    }
    let gens = mcg_generators(model);
    let radius = (1.0 + opts.margin) * l;
    let mut visited: HashSet<CyclicWord> = HashSet::new();
    let mut retained = Vec::new();
    let mut frontier = Vec::new();

    let seed_len = length(seed)?;
    visited.insert(seed.clone());
    if seed_len <= radius {
        frontier.push((seed.clone(), seed_len));
    }
    while !frontier.is_empty() {
        for (w, len) in &frontier {
            if *len <= l {
                retained.push((w.clone(), *len));
            }
        }
        let images: Vec<CyclicWord> = frontier
            .par_iter()
            .map(|(w, _)| gens.iter().map(|g| apply_automorphism(model, g, w)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .flatten()
            .collect();
        let mut fresh: Vec<CyclicWord> = Vec::new();
        for w in images {
            if !visited.contains(&w) {
                visited.insert(w.clone());
                fresh.push(w);
            }
        }
        if visited.len() as u64 > opts.node_cap {
            return Err(Error::BudgetExceeded { what: "BFS nodes", cap: opts.node_cap, partial_l: l });
        }
        let lengths: Vec<f64> = fresh.par_iter().map(&length).collect::<Result<Vec<_>>>()?;
        frontier = fresh.into_iter().zip(lengths).filter(|(_, len)| *len <= radius).collect();
    }
    retained.sort_by(|a, b| a.1.total_cmp(&b.1).then_with(|| a.0.cmp(&b.0)));
    Ok(OrbitBall { retained, visited: visited.len() })
}

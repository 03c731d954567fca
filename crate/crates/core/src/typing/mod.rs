//! Primitive decompositions of integral multicurves and their topological
//! type, the mapping class group orbit invariant used as a histogram key.
//!
//! On genus 2 the type is a decorated graph: one vertex per complementary
//! piece labelled by (genus, boundary count), one edge per component class
//! labelled by its multiplicity. Keys serialize as
//! `g<genus>b<boundaries>,...|<u>-<v>:<weight>,...` with vertices and edges
//! in the lexicographically least order over all vertex relabelings, so
//! `g1b2|0-0:1` is a nonseparating curve and `g1b1,g1b1|0-1:1` a separating
//! one. On the punctured torus the key is just the weight, `d=<weight>`.

mod dt;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::coords::{Coord, DTCoord, TorusCoord};
use crate::error::{Error, Result};
use crate::surface::{ModelKind, SurfaceModel};

pub use dt::{trace_components_dt, trace_dt, DtTrace};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Component {
    Torus(TorusCoord),
    Dt(DTCoord),
}

impl fmt::Display for Component {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Component::Torus(c) => c.fmt(f),
            Component::Dt(c) => c.fmt(f),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentDecomposition {
    /// Pairwise distinct primitive components with positive multiplicities.
    pub components: Vec<(Component, u64)>,
}

impl ComponentDecomposition {
    /// Sum of component coordinates weighted by multiplicity.
    pub fn reassemble(&self) -> Option<Coord> {
        let mut acc: Option<Vec<i64>> = None;
        let mut kind = None;
        for (c, k) in &self.components {
            let (ints, is_torus) = match c {
                Component::Torus(t) => (vec![t.p(), t.q()], true),
                Component::Dt(d) => (d.m().iter().chain(&d.t()).copied().collect::<Vec<_>>(), false),
            };
            if *kind.get_or_insert(is_torus) != is_torus {
                return None;
            }
            let acc = acc.get_or_insert_with(|| vec![0; ints.len()]);
            for (a, x) in acc.iter_mut().zip(ints) {
                *a += *k as i64 * x;
            }
        }
        let v = acc?;
        Some(if kind == Some(true) {
            Coord::Torus(crate::coords::canonicalize_torus(v[0], v[1]).ok()?)
        } else {
            Coord::Dt(DTCoord::from_parts_unchecked([v[0], v[1], v[2]], [v[3], v[4], v[5]]))
        })
    }
}

/// `d` copies of the primitive class `(p/d, q/d)`, with `d = gcd(|p|, |q|)`.
pub fn decompose_torus(coord: TorusCoord) -> ComponentDecomposition {
    ComponentDecomposition { components: vec![(Component::Torus(coord.primitive()), coord.weight())] }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TypeKey {
    Torus { weight: u64 },
    Graph { vertices: Vec<(u32, u32)>, edges: Vec<(usize, usize, u64)> },
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

impl TypeKey {
    /// Canonical key of a decorated graph; `vertices[v] = (genus, boundaries)`
    /// and each edge joins the pieces on the two sides of a component class.
    pub fn from_graph(vertices: &[(u32, u32)], edges: &[(usize, usize, u64)]) -> TypeKey {
        let mut best: Option<(Vec<(u32, u32)>, Vec<(usize, usize, u64)>)> = None;
        for perm in permutations(vertices.len()) {
            let mut vs = vec![(0, 0); vertices.len()];
            for (old, &new) in perm.iter().enumerate() {
                vs[new] = vertices[old];
            }
            let mut es: Vec<(usize, usize, u64)> = edges
                .iter()
                .map(|&(u, v, w)| {
                    let (a, b) = (perm[u], perm[v]);
                    (a.min(b), a.max(b), w)
                })
                .collect();
            es.sort_unstable();
            let cand = (vs, es);
            if best.as_ref().is_none_or(|b| cand < *b) {
                best = Some(cand);
            }
        }
        let (vertices, edges) = best.unwrap_or_default();
        TypeKey::Graph { vertices, edges }
    }

    /// Number of component classes.
    pub fn component_count(&self) -> usize {
        match self {
            TypeKey::Torus { .. } => 1,
            TypeKey::Graph { edges, .. } => edges.len(),
        }
    }

    /// The key with every weight set to 1: the type of the underlying support.
    pub fn support(&self) -> TypeKey {
        match self {
            TypeKey::Torus { .. } => TypeKey::Torus { weight: 1 },
            TypeKey::Graph { vertices, edges } => {
                let unit: Vec<_> = edges.iter().map(|&(u, v, _)| (u, v, 1)).collect();
                TypeKey::from_graph(vertices, &unit)
            }
        }
    }

    /// Euler characteristic of the complement, summed over pieces.
    pub fn euler_characteristic(&self) -> Option<i64> {
        match self {
            TypeKey::Torus { .. } => None,
            TypeKey::Graph { vertices, .. } => Some(vertices.iter().map(|&(g, b)| 2 - 2 * g as i64 - b as i64).sum()),
        }
    }
}

impl fmt::Display for TypeKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TypeKey::Torus { weight } => write!(f, "d={weight}"),
            TypeKey::Graph { vertices, edges } => {
                let vs: Vec<String> = vertices.iter().map(|(g, b)| format!("g{g}b{b}")).collect();
                let es: Vec<String> = edges.iter().map(|(u, v, w)| format!("{u}-{v}:{w}")).collect();
                write!(f, "{}|{}", vs.join(","), es.join(","))
            }
        }
    }
}

pub fn type_key(model: &SurfaceModel, coord: &Coord) -> Result<TypeKey> {
    match (model.kind, coord) {
        (ModelKind::PuncturedTorus, Coord::Torus(c)) => Ok(TypeKey::Torus { weight: c.weight() }),
        (ModelKind::GenusTwo, Coord::Dt(c)) => Ok(trace_dt(c)?.key),
        _ => Err(Error::NormModelMismatch(format!("coordinate {coord} does not belong to {}", model.kind))),
    }
}

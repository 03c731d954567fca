//! Counting integral multicurves on hyperbolic surfaces by topological type.
//!
//! Two surface models are supported: the once-punctured torus, where simple
//! classes are integer slopes, and the closed genus-2 surface, where
//! multicurves carry Dehn–Thurston coordinates on a theta pants decomposition.
//! Multicurves are enumerated in norm balls, sorted into mapping class group
//! orbits by a combinatorial type key, and counted; normalized counts converge
//! to per-type frequencies that the [`counting`] module estimates.

pub mod coords;
pub mod counting;
pub mod error;
pub mod hyperbolic;
pub mod intersection;
pub mod surface;
pub mod typing;
pub mod words;

pub use coords::{
    canonicalize_torus, enumerate_ball, hyperbolic_comparability, norm_eval, validate_dt, Ball, Coord, DTCoord,
    DtWeights, NormSpec, Slab, TorusCoord,
};
pub use counting::*;
pub use error::{Error, Result};
pub use hyperbolic::{
    genus2_structure, multicurve_length, torus_simple_length, torus_structure, word_length, FNCoords, HolonomyRep, Mat2,
};
pub use intersection::{dt_pants_intersection, torus_intersection};
pub use surface::{build_model, build_model_by_id, growth_exponent, ModelKind, SurfaceModel, SurfaceSpec};
pub use typing::{type_key, Component, ComponentDecomposition, TypeKey};
pub use words::{canonical_cyclic_form, parse_cyclic_word, CyclicWord, Letter};

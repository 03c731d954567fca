//! The two supported surfaces: the once-punctured torus and the closed
//! genus-2 surface with its theta-graph pants decomposition.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::words::{self, Letter};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SurfaceSpec {
    pub genus: u32,
    pub punctures: u32,
}

impl SurfaceSpec {
    pub const PUNCTURED_TORUS: SurfaceSpec = SurfaceSpec { genus: 1, punctures: 1 };
    pub const GENUS_TWO: SurfaceSpec = SurfaceSpec { genus: 2, punctures: 0 };

    pub fn euler_characteristic(&self) -> i64 {
        2 - 2 * self.genus as i64 - self.punctures as i64
    }

    /// 6g - 6 + 2k, the real dimension of the measured lamination space.
    pub fn exponent(&self) -> i64 {
        6 * self.genus as i64 - 6 + 2 * self.punctures as i64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ModelKind {
    PuncturedTorus,
    GenusTwo,
}

impl ModelKind {
    pub fn id(self) -> &'static str {
        match self {
            ModelKind::PuncturedTorus => "torus-1-1",
            ModelKind::GenusTwo => "genus-2",
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "torus-1-1" => Ok(ModelKind::PuncturedTorus),
            "genus-2" => Ok(ModelKind::GenusTwo),
            other => Err(Error::UnknownModel(other.to_string())),
        }
    }
}

/// Theta-graph pants decomposition of the genus-2 surface.
///
/// Both pairs of pants are bounded by all three curves. In the standard
/// generators `a1, b1, a2, b2` (serialized `a, b, c, d`) the pants curves are
/// `c1 = a1`, `c2 = a2` and `c3 = a1 a2`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThetaPants {
    pub curves: [Vec<Letter>; 3],
    /// Boundary curve indices of each pair of pants.
    pub pants: [[usize; 3]; 2],
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceModel {
    pub spec: SurfaceSpec,
    pub kind: ModelKind,
    /// Generator symbols; inverses are the uppercase forms.
    pub generators: Vec<char>,
    /// Cyclically reduced relator; empty for the free group of the punctured torus.
    pub relator: Vec<Letter>,
    /// Commutator class around the puncture (torus model only).
    pub peripheral: Option<Vec<Letter>>,
    pub pants: Option<ThetaPants>,
    pub exponent: u32,
}

pub fn build_model(spec: SurfaceSpec) -> Result<SurfaceModel> {
    let euler = spec.euler_characteristic();
    if euler >= 0 {
        return Err(Error::InvalidSpec { euler });
    }
    let l = |g: i8| Letter::new(g);
    match (spec.genus, spec.punctures) {
        (1, 1) => Ok(SurfaceModel {
            spec,
            kind: ModelKind::PuncturedTorus,
            generators: vec!['a', 'b'],
            relator: Vec::new(),
            peripheral: Some(vec![l(1), l(2), l(-1), l(-2)]),
            pants: None,
            exponent: spec.exponent() as u32,
        }),
        (2, 0) => {
            let relator = vec![l(1), l(2), l(-1), l(-2), l(3), l(4), l(-3), l(-4)];
            debug_assert!(words::is_cyclically_reduced(&relator));
            words::check_small_cancellation(&relator)?;
            Ok(SurfaceModel {
                spec,
                kind: ModelKind::GenusTwo,
                generators: vec!['a', 'b', 'c', 'd'],
                relator,
                peripheral: None,
                pants: Some(ThetaPants {
                    curves: [vec![l(1)], vec![l(3)], vec![l(1), l(3)]],
                    pants: [[0, 1, 2], [0, 1, 2]],
                }),
                exponent: spec.exponent() as u32,
            })
        }
        (genus, punctures) => Err(Error::UnsupportedModel { genus, punctures }),
    }
}

pub fn build_model_by_id(id: &str) -> Result<SurfaceModel> {
    let kind: ModelKind = id.parse()?;
    build_model(match kind {
        ModelKind::PuncturedTorus => SurfaceSpec::PUNCTURED_TORUS,
        ModelKind::GenusTwo => SurfaceSpec::GENUS_TWO,
    })
}

pub fn growth_exponent(model: &SurfaceModel) -> u32 {
    model.exponent
}

impl SurfaceModel {
    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    /// Number of integer coordinates describing a simple multicurve.
    pub fn lattice_dimension(&self) -> usize {
        match self.kind {
            ModelKind::PuncturedTorus => 2,
            ModelKind::GenusTwo => 6,
        }
    }
}

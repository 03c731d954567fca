use serde::{Deserialize, Serialize};

use super::{canonical_cyclic_form, cyclic_reduce, free_reduce, invert, min_rotation_up_to_inversion};
use super::{CyclicWord, Letter};
use crate::error::Result;
use crate::surface::{ModelKind, SurfaceModel};

/// A surface-group automorphism given by generator images.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Automorphism {
    pub name: String,
    pub images: Vec<Vec<Letter>>,
    /// Generator images of the inverse automorphism.
    pub inverse_images: Vec<Vec<Letter>>,
}

impl Automorphism {
    fn twist(rank: usize, name: &str, changes: &[(usize, &[i8])], inverse_changes: &[(usize, &[i8])]) -> Self {
        let identity = |changes: &[(usize, &[i8])]| {
            let mut images: Vec<Vec<Letter>> = (1..=rank as i8).map(|g| vec![Letter::new(g)]).collect();
            for &(g, img) in changes {
                images[g] = img.iter().map(|&c| Letter::new(c)).collect();
            }
            images
        };
        Automorphism { name: name.to_string(), images: identity(changes), inverse_images: identity(inverse_changes) }
    }

    pub fn inverse(&self) -> Automorphism {
        let name = match self.name.strip_suffix("^-1") {
            Some(base) => base.to_string(),
            None => format!("{}^-1", self.name),
        };
        Automorphism { name, images: self.inverse_images.clone(), inverse_images: self.images.clone() }
    }

    /// Substitutes generator images into a linear word and freely reduces.
    pub fn substitute(&self, word: &[Letter]) -> Vec<Letter> {
        let mut out = Vec::with_capacity(word.len() * 2);
        for &l in word {
            let img = &self.images[l.generator()];
            if l.is_inverse() {
                out.extend(invert(img));
            } else {
                out.extend_from_slice(img);
            }
        }
        free_reduce(&out)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Automorphism) -> Automorphism {
        Automorphism {
            name: format!("{}*{}", self.name, other.name),
            images: other.images.iter().map(|w| self.substitute(w)).collect(),
            inverse_images: self.inverse_images.iter().map(|w| other.inverse().substitute(w)).collect(),
        }
    }

    /// True if the free-group image of `word` is a cyclic conjugate of `word`
    /// or of its inverse.
    pub fn preserves_class_in_free_group(&self, word: &[Letter]) -> bool {
        let image = cyclic_reduce(&self.substitute(word));
        min_rotation_up_to_inversion(&image) == min_rotation_up_to_inversion(&cyclic_reduce(word))
    }

    /// Composing with the recorded inverse fixes every generator.
    pub fn inverse_is_consistent(&self) -> bool {
        let inv = self.inverse();
        (1..=self.images.len() as i8).all(|g| {
            let gen = [Letter::new(g)];
            inv.substitute(&self.substitute(&gen)) == gen && self.substitute(&inv.substitute(&gen)) == gen
        })
    }
}

pub fn apply_automorphism(model: &SurfaceModel, auto: &Automorphism, w: &CyclicWord) -> Result<CyclicWord> {
    canonical_cyclic_form(model, &auto.substitute(w.letters()))
}

/// Dehn twist generators followed by their inverses.
///
/// Torus: `T_a: (a,b) -> (a, ba)` and `T_b: (a,b) -> (aB, b)`. Genus 2: twists
/// about the chain `a1, b1, g, b2, a2` where `g = a1 a2` is the third curve of
/// the theta decomposition.
pub fn mcg_generators(model: &SurfaceModel) -> Vec<Automorphism> {
    let gens = match model.kind {
        ModelKind::PuncturedTorus => vec![
            Automorphism::twist(2, "Ta", &[(1, &[2, 1])], &[(1, &[2, -1])]),
            Automorphism::twist(2, "Tb", &[(0, &[1, -2])], &[(0, &[1, 2])]),
        ],
        ModelKind::GenusTwo => vec![
            Automorphism::twist(4, "Ta1", &[(1, &[2, 1])], &[(1, &[2, -1])]),
            Automorphism::twist(4, "Tb1", &[(0, &[1, 2])], &[(0, &[1, -2])]),
            Automorphism::twist(4, "Tg", &[(1, &[-1, -3, 2]), (3, &[-3, -1, 4])], &[(1, &[3, 1, 2]), (3, &[1, 3, 4])]),
            Automorphism::twist(4, "Tb2", &[(2, &[3, 4])], &[(2, &[3, -4])]),
            Automorphism::twist(4, "Ta2", &[(3, &[4, 3])], &[(3, &[4, -3])]),
        ],
    };
    let inverses: Vec<Automorphism> = gens.iter().map(Automorphism::inverse).collect();
    gens.into_iter().chain(inverses).collect()
}

/// Square integer matrix, row-major.
pub type IntMatrix = Vec<Vec<i64>>;

/// Action on first homology: column `j` is the exponent-sum vector of the
/// image of generator `j`.
pub fn abelianized_action(model: &SurfaceModel, auto: &Automorphism) -> IntMatrix {
    let n = model.rank();
    let mut m = vec![vec![0i64; n]; n];
    for (j, img) in auto.images.iter().enumerate() {
        for l in img {
            m[l.generator()][j] += if l.is_inverse() { -1 } else { 1 };
        }
    }
    m
}

pub fn determinant(m: &IntMatrix) -> i64 {
    let n = m.len();
    if n == 1 {
        return m[0][0];
    }
    (0..n)
        .map(|j| {
            let minor: IntMatrix = m[1..]
                .iter()
                .map(|row| row.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, &v)| v).collect())
                .collect();
            let sign = if j % 2 == 0 { 1 } else { -1 };
            sign * m[0][j] * determinant(&minor)
        })
        .sum()
}

pub fn mat_mul(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    let n = a.len();
    (0..n).map(|i| (0..n).map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum()).collect()).collect()
}

/// `det M = 1` and `(M - I)^2 = 0`.
pub fn is_transvection(m: &IntMatrix) -> bool {
    let n = m.len();
    let shifted: IntMatrix = (0..n).map(|i| (0..n).map(|j| m[i][j] - (i == j) as i64).collect()).collect();
    determinant(m) == 1 && mat_mul(&shifted, &shifted).iter().flatten().all(|&v| v == 0)
}

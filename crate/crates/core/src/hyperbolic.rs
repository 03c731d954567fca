//! Hyperbolic structures as holonomy representations into SL(2, R) and the
//! geodesic length functionals they define.

use std::ops::Mul;

use serde::{Deserialize, Serialize};

use crate::coords::TorusCoord;
use crate::error::{Error, Result};
use crate::surface::{ModelKind, SurfaceModel};
use crate::words::{christoffel_word, CyclicWord, Letter};

pub const DEFAULT_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Mat2(pub [[f64; 2]; 2]);

impl Mat2 {
    pub const IDENTITY: Mat2 = Mat2([[1.0, 0.0], [0.0, 1.0]]);

    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Mat2 {
        Mat2([[a, b], [c, d]])
    }

    pub fn trace(&self) -> f64 {
        self.0[0][0] + self.0[1][1]
    }

    pub fn det(&self) -> f64 {
        self.0[0][0] * self.0[1][1] - self.0[0][1] * self.0[1][0]
    }

    /// Inverse of a unit-determinant matrix.
    pub fn inverse(&self) -> Mat2 {
        let [[a, b], [c, d]] = self.0;
        let det = self.det();
        Mat2::new(d / det, -b / det, -c / det, a / det)
    }

    pub fn scale(&self, k: f64) -> Mat2 {
        let [[a, b], [c, d]] = self.0;
        Mat2::new(k * a, k * b, k * c, k * d)
    }

    /// Max-entry distance to `±I`, whichever is closer.
    pub fn distance_to_pm_identity(&self) -> f64 {
        let dist = |s: f64| {
            let [[a, b], [c, d]] = self.0;
            [(a - s).abs(), b.abs(), c.abs(), (d - s).abs()].into_iter().fold(0.0, f64::max)
        };
        dist(1.0).min(dist(-1.0))
    }

    /// Eigenvectors for the eigenvalues `λ` and `1/λ` with `|λ| > 1`, as the
    /// columns of a matrix. Requires `|trace| > 2`.
    fn eigenbasis(&self) -> (f64, Mat2) {
        let [[p, q], [r, s]] = self.0;
        let tr = self.trace();
        let disc = (tr * tr - 4.0).max(0.0).sqrt();
        let big = if tr >= 0.0 { (tr + disc) / 2.0 } else { (tr - disc) / 2.0 };
        let small = 1.0 / big;
        let vec = |lambda: f64, first: bool| -> [f64; 2] {
            if q.abs() >= r.abs() && q != 0.0 {
                [q, lambda - p]
            } else if r != 0.0 {
                [lambda - s, r]
            } else if first == ((p - lambda).abs() < (s - lambda).abs()) {
                [1.0, 0.0]
            } else {
                [0.0, 1.0]
            }
        };
        let u = vec(big, true);
        let v = vec(small, false);
        (big, Mat2::new(u[0], v[0], u[1], v[1]))
    }

    /// Hyperbolic element commuting with `self` that translates its axis by `tau`.
    pub fn axis_translation(&self, tau: f64) -> Mat2 {
        let (_, v) = self.eigenbasis();
        let diag = Mat2::new((tau / 2.0).exp(), 0.0, 0.0, (-tau / 2.0).exp());
        v * diag * v.inverse()
    }

    /// Unit-determinant `M` with `M other M^-1 = self`, for hyperbolic
    /// matrices of equal trace.
    pub fn conjugator_from(&self, other: &Mat2) -> Mat2 {
        let (_, mut v) = self.eigenbasis();
        let (_, w) = other.eigenbasis();
        let mut m = v * w.inverse();
        if m.det() < 0.0 {
            v.0[0][1] = -v.0[0][1];
            v.0[1][1] = -v.0[1][1];
            m = v * w.inverse();
        }
        m.scale(1.0 / m.det().sqrt())
    }
}

impl Mul for Mat2 {
    type Output = Mat2;

    fn mul(self, o: Mat2) -> Mat2 {
        let a = self.0;
        let b = o.0;
        Mat2([
            [a[0][0] * b[0][0] + a[0][1] * b[1][0], a[0][0] * b[0][1] + a[0][1] * b[1][1]],
            [a[1][0] * b[0][0] + a[1][1] * b[1][0], a[1][0] * b[0][1] + a[1][1] * b[1][1]],
        ])
    }
}

/// Fenchel–Nielsen coordinates on the theta decomposition: lengths and twists
/// of the pants curves `c1, c2, c3`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FNCoords {
    pub lengths: [f64; 3],
    pub twists: [f64; 3],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HolonomyRep {
    pub model: SurfaceModel,
    /// One unit-determinant matrix per generator.
    pub matrices: Vec<Mat2>,
    pub tolerance: f64,
}

/// Validation residuals of a representation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RepResiduals {
    pub max_det_error: f64,
    /// Genus 2: distance of the relator image to `±I`. Torus: `|tr[a,b] + 2|`.
    pub relator_residual: f64,
    /// Genus 2: `| |tr c_i| - 2 cosh(ℓ_i / 2) |` per pants curve.
    pub pants_length_residuals: Vec<f64>,
}

fn word_matrix(matrices: &[Mat2], word: &[Letter]) -> Mat2 {
    word.iter().fold(Mat2::IDENTITY, |acc, l| {
        let m = matrices[l.generator()];
        acc * if l.is_inverse() { m.inverse() } else { m }
    })
}

impl HolonomyRep {
    pub fn image(&self, word: &[Letter]) -> Mat2 {
        word_matrix(&self.matrices, word)
    }

    pub fn residuals(&self, fn_lengths: Option<[f64; 3]>) -> RepResiduals {
        let max_det_error = self.matrices.iter().map(|m| (m.det() - 1.0).abs()).fold(0.0, f64::max);
        let relator_residual = match self.model.kind {
            ModelKind::GenusTwo => self.image(&self.model.relator).distance_to_pm_identity(),
            ModelKind::PuncturedTorus => {
                let per = self.model.peripheral.as_ref().expect("torus model has a peripheral word");
                (self.image(per).trace() + 2.0).abs()
            }
        };
        let pants_length_residuals = match (&self.model.pants, fn_lengths) {
            (Some(p), Some(ls)) => p
                .curves
                .iter()
                .zip(ls)
                .map(|(c, l)| (self.image(c).trace().abs() - 2.0 * (l / 2.0).cosh()).abs())
                .collect(),
            _ => Vec::new(),
        };
        RepResiduals { max_det_error, relator_residual, pants_length_residuals }
    }
}

/// Cusped punctured-torus structure with `tr a = x`, `tr b = y`, `tr ab = z`.
pub fn torus_structure(model: &SurfaceModel, x: f64, y: f64, z: f64) -> Result<HolonomyRep> {
    if model.kind != ModelKind::PuncturedTorus {
        return Err(Error::NormModelMismatch("torus_structure needs the torus model".into()));
    }
    for tr in [x, y, z] {
        if !(tr > 2.0) {
            return Err(Error::EllipticOrParabolic(tr));
        }
    }
    let residual = x * x + y * y + z * z - x * y * z;
    if residual.abs() > DEFAULT_TOLERANCE * (x * y * z).max(1.0) {
        return Err(Error::TraceRelationViolated { residual });
    }
    let zeta = (z + (z * z - 4.0).sqrt()) / 2.0;
    let a = Mat2::new(x, -1.0, 1.0, 0.0);
    let b = Mat2::new(0.0, zeta, -1.0 / zeta, y);
    let rep = HolonomyRep { model: model.clone(), matrices: vec![a, b], tolerance: DEFAULT_TOLERANCE };
    let res = rep.residuals(None);
    if res.relator_residual > DEFAULT_TOLERANCE * (x * y * z).max(1.0) {
        return Err(Error::HolonomyConstruction(format!("commutator trace misses -2 by {:e}", res.relator_residual)));
    }
    Ok(rep)
}

/// The larger third trace completing `(x, y)` to a cusped torus triple.
pub fn complete_torus_traces(x: f64, y: f64) -> Result<f64> {
    let disc = x * x * y * y - 4.0 * (x * x + y * y);
    if disc < 0.0 {
        return Err(Error::TraceRelationViolated { residual: disc });
    }
    Ok((x * y + disc.sqrt()) / 2.0)
}

/// Genus-2 holonomy glued from two pairs of pants along the theta graph.
///
/// The first pants group is the Fricke triple `A, B, (AB)^-1` with traces
/// `2cosh(ℓ1/2)`, `2cosh(ℓ2/2)` and `-2cosh(ℓ3/2)`; the second is its mirror
/// image. Gluing the mirror along `c3` and closing up along `c1`, `c2` gives
/// `a1 = A`, `b1 = B s`, `a2 = B`, `b2 = t`, with the twists entering as
/// translations along the axes of the pants curves.
pub fn genus2_structure(model: &SurfaceModel, fnc: FNCoords) -> Result<HolonomyRep> {
    if model.kind != ModelKind::GenusTwo {
        return Err(Error::NormModelMismatch("genus2_structure needs the genus-2 model".into()));
    }
    if let Some(l) = fnc.lengths.iter().find(|l| !(**l > 0.0) || !l.is_finite()) {
        return Err(Error::Precondition(format!("pants curve lengths must be positive, got {l}")));
    }
    if fnc.twists.iter().any(|t| !t.is_finite()) {
        return Err(Error::Precondition("twists must be finite".into()));
    }
    let [x1, x2, x3] = fnc.lengths.map(|l| 2.0 * (l / 2.0).cosh());
    let zeta = (-x3 - (x3 * x3 - 4.0).sqrt()) / 2.0;
    let a = Mat2::new(x1, -1.0, 1.0, 0.0);
    let b = Mat2::new(0.0, zeta, -1.0 / zeta, x2);
    let c = (a * b).inverse();

    let j = Mat2::new(1.0, 0.0, 0.0, -1.0);
    let mirror = |m: Mat2| j * m * j;
    let (am, bm, cm) = (mirror(a), mirror(b), mirror(c));
    let d = am.inverse() * cm * am;
    let glue = c.axis_translation(fnc.twists[2]) * c.conjugator_from(&d);
    let a_prime = glue * am.inverse() * glue.inverse();
    let b_prime = glue * bm.inverse() * glue.inverse();

    let s = a_prime.conjugator_from(&a.inverse()) * a.axis_translation(fnc.twists[0]);
    let t = b_prime.conjugator_from(&b.inverse()) * b.axis_translation(fnc.twists[1]);

    let rep = HolonomyRep { model: model.clone(), matrices: vec![a, b * s, b, t], tolerance: DEFAULT_TOLERANCE };
    let res = rep.residuals(Some(fnc.lengths));
    let worst_length = res.pants_length_residuals.iter().copied().fold(0.0, f64::max);
    let scale = 1.0 + x1.max(x2).max(x3);
    if res.relator_residual > rep.tolerance
        || res.max_det_error > rep.tolerance * scale
        || worst_length > rep.tolerance * scale
    {
        return Err(Error::HolonomyConstruction(format!(
            "relator residual {:e}, det error {:e}, pants length residual {:e}",
            res.relator_residual, res.max_det_error, worst_length
        )));
    }
    Ok(rep)
}

/// Geodesic length `2 arccosh(|tr| / 2)` of a conjugacy class.
pub fn word_length(rep: &HolonomyRep, w: &CyclicWord) -> Result<f64> {
    if w.is_empty() {
        return Err(Error::Precondition("empty word".into()));
    }
    let tr = rep.image(w.letters()).trace().abs();
    if tr <= 2.0 + rep.tolerance {
        return Err(Error::NonHyperbolic(tr));
    }
    Ok(2.0 * (tr / 2.0).max(1.0).acosh())
}

/// Weighted sum `Σ a_i ℓ_X(γ_i)`.
pub fn multicurve_length(rep: &HolonomyRep, components: &[(CyclicWord, u64)]) -> Result<f64> {
    if components.is_empty() {
        return Err(Error::Precondition("multicurve has no components".into()));
    }
    components.iter().map(|(w, a)| word_length(rep, w).map(|l| *a as f64 * l)).sum()
}

/// Length of a weighted torus class: weight times the length of its primitive Christoffel word.
pub fn torus_simple_length(rep: &HolonomyRep, coord: TorusCoord) -> Result<f64> {
    let w = christoffel_word(&rep.model, coord.primitive())?;
    Ok(coord.weight() as f64 * word_length(rep, &w)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coords::canonicalize_torus;
    use crate::surface::build_model_by_id;
    use crate::words::parse_cyclic_word;

    fn torus() -> SurfaceModel {
        build_model_by_id("torus-1-1").unwrap()
    }

    fn genus2() -> SurfaceModel {
        build_model_by_id("genus-2").unwrap()
    }

    #[test]
    fn reference_matrices_for_333() {
        // Oracle: the integer matrices a=[[1,1],[1,2]], b=[[1,-1],[-1,2]].
        let a = Mat2::new(1.0, 1.0, 1.0, 2.0);
        let b = Mat2::new(1.0, -1.0, -1.0, 2.0);
        assert_eq!((a.trace(), b.trace(), (a * b).trace()), (3.0, 3.0, 3.0));
        assert_eq!((a * b * a.inverse() * b.inverse()).trace(), -2.0);
    }

    #[test]
    fn torus_structure_guards() {
        let m = torus();
        let rep = torus_structure(&m, 3.0, 3.0, 3.0).unwrap();
        assert!(rep.residuals(None).relator_residual < 1e-9);
        assert!(matches!(torus_structure(&m, 3.0, 3.0, 4.0), Err(Error::TraceRelationViolated { .. })));
        assert!(matches!(torus_structure(&m, 2.0, 5.0, 10.0), Err(Error::EllipticOrParabolic(_))));
    }

    #[test]
    fn torus_lengths() {
        let m = torus();
        let rep = torus_structure(&m, 3.0, 3.0, 3.0).unwrap();
        let la = word_length(&rep, &parse_cyclic_word(&m, "a").unwrap()).unwrap();
        assert!((la - 1.924847).abs() < 1e-6);
        assert!((la - 2.0 * 1.5f64.acosh()).abs() < 1e-12);
        let lb = word_length(&rep, &parse_cyclic_word(&m, "b").unwrap()).unwrap();
        let lab = word_length(&rep, &parse_cyclic_word(&m, "ab").unwrap()).unwrap();
        assert!((la - lb).abs() < 1e-9 && (la - lab).abs() < 1e-9);
        let per = parse_cyclic_word(&m, "abAB").unwrap();
        assert!(matches!(word_length(&rep, &per), Err(Error::NonHyperbolic(_))));

        let l10 = torus_simple_length(&rep, canonicalize_torus(1, 0).unwrap()).unwrap();
        let l20 = torus_simple_length(&rep, canonicalize_torus(2, 0).unwrap()).unwrap();
        let l11 = torus_simple_length(&rep, canonicalize_torus(1, 1).unwrap()).unwrap();
        assert!((l20 - 2.0 * l10).abs() < 1e-12);
        assert!((l11 - 2.0 * 1.5f64.acosh()).abs() < 1e-9);
    }

    #[test]
    fn multicurve_lengths() {
        let m = torus();
        let rep = torus_structure(&m, 3.0, 3.0, 3.0).unwrap();
        let a = parse_cyclic_word(&m, "a").unwrap();
        let b = parse_cyclic_word(&m, "b").unwrap();
        let la = word_length(&rep, &a).unwrap();
        assert!((multicurve_length(&rep, &[(a.clone(), 2)]).unwrap() - 2.0 * la).abs() < 1e-12);
        let both = multicurve_length(&rep, &[(a, 1), (b, 1)]).unwrap();
        assert!((both - 4.0 * 1.5f64.acosh()).abs() < 1e-9);
        assert!(matches!(multicurve_length(&rep, &[]), Err(Error::Precondition(_))));
    }

    #[test]
    fn second_torus_structure() {
        let m = torus();
        let z = complete_torus_traces(3.0, 4.0).unwrap();
        let rep = torus_structure(&m, 3.0, 4.0, z).unwrap();
        assert!(rep.residuals(None).relator_residual < 1e-9);
    }

    #[test]
    fn genus2_validates() {
        let m = genus2();
        for twists in [[0.0; 3], [0.7, 0.0, 0.0], [0.3, -1.1, 2.5]] {
            let fnc = FNCoords { lengths: [2.0, 2.0, 2.0], twists };
            let rep = genus2_structure(&m, fnc).unwrap();
            let res = rep.residuals(Some(fnc.lengths));
            assert!(res.relator_residual < 1e-9, "{res:?}");
            assert!(res.pants_length_residuals.iter().all(|r| *r < 1e-9), "{res:?}");
        }
        let bad = FNCoords { lengths: [2.0, 0.0, 2.0], twists: [0.0; 3] };
        assert!(matches!(genus2_structure(&m, bad), Err(Error::Precondition(_))));
    }

    #[test]
    fn genus2_pants_curve_lengths() {
        let m = genus2();
        let fnc = FNCoords { lengths: [1.0, 2.0, 3.0], twists: [0.4, 0.5, 0.6] };
        let rep = genus2_structure(&m, fnc).unwrap();
        for (word, l) in ["a", "c", "ac"].iter().zip(fnc.lengths) {
            let w = parse_cyclic_word(&m, word).unwrap();
            assert!((word_length(&rep, &w).unwrap() - l).abs() < 1e-9);
        }
    }
}

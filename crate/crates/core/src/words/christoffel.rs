use num_integer::Integer;

use super::{canonical_cyclic_form, CyclicWord, Letter};
use crate::coords::TorusCoord;
use crate::error::{Error, Result};
use crate::surface::SurfaceModel;

/// Lower Christoffel word of slope `|q|/p`: `p` letters `a` and `|q|` letters
/// `b` (or `B` when `q < 0`).
pub fn christoffel_letters(p: u64, q: i64) -> Vec<Letter> {
    let qa = q.unsigned_abs();
    let n = p + qa;
    let b = Letter::new(if q < 0 { -2 } else { 2 });
    (1..=n).map(|i| if i * qa / n > (i - 1) * qa / n { b } else { Letter::new(1) }).collect()
}

/// The simple closed curve of a primitive torus class, as a cyclic word.
pub fn christoffel_word(model: &SurfaceModel, coord: TorusCoord) -> Result<CyclicWord> {
    let g = coord.p().gcd(&coord.q()) as u64;
    if g != 1 {
        return Err(Error::NotPrimitive(g));
    }
    canonical_cyclic_form(model, &christoffel_letters(coord.p() as u64, coord.q()))
}

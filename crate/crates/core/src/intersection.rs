//! Geometric intersection numbers with closed-form expressions.

use crate::coords::{DTCoord, TorusCoord};
use crate::error::{Error, Result};

/// `|p_α q_β - q_α p_β|`.
pub fn torus_intersection(alpha: TorusCoord, beta: TorusCoord) -> u64 {
    let det = alpha.p() as i128 * beta.q() as i128 - alpha.q() as i128 * beta.p() as i128;
    det.unsigned_abs() as u64
}

/// Intersection with the pants curve `c_i`, `i` in `1..=3`.
pub fn dt_pants_intersection(alpha: &DTCoord, i: usize) -> Result<u64> {
    if !(1..=3).contains(&i) {
        return Err(Error::IndexOutOfRange(i));
    }
    Ok(alpha.m()[i - 1] as u64)
}

//! Recursive quadrant construction of the planar Hilbert curve.
//!
//! Shares no code with [`crate::curve`]; it exists so the bit-level
//! implementation can be checked against a construction that is correct by
//! inspection. Enabled by the `reference-oracle` feature.

use crate::curve::CurveError;

/// The `d`-th point of the order-`order` planar Hilbert curve, built by
/// recursing into the quadrant that holds `d` and rotating/reflecting the
/// sub-curve into place.
pub fn reference_point_from_distance(d: u64, order: u32) -> Result<(u64, u64), CurveError> {
    if order == 0 {
        return Err(CurveError::ZeroOrder);
    }
    if order > 31 {
        return Err(CurveError::TooManyBits { order, dims: 2, bits: 2 * u64::from(order) });
    }
    let theta = 1u64 << (2 * order);
    if d >= theta {
        return Err(CurveError::DistanceOutOfRange { distance: d, theta });
    }
    Ok(descend(d, order))
}

fn descend(d: u64, order: u32) -> (u64, u64) {
    if order == 0 {
        return (0, 0);
    }
    let half = 1u64 << (order - 1);
    let quadrant_len = half * half;
    let (x, y) = descend(d % quadrant_len, order - 1);
    match d / quadrant_len {
        // lower-left, transposed
        0 => (y, x),
        // upper-left
        1 => (x, y + half),
        // upper-right
        2 => (x + half, y + half),
        // lower-right, anti-transposed
        _ => (2 * half - 1 - y, half - 1 - x),
    }
}

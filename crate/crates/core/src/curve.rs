//! Integer Hilbert-curve math.
//!
//! A distance `d` along an order-`p` curve in `N` dimensions is written as a
//! big-endian string of `p * N` bits. Bit `i` of that string (counting from
//! the most significant end) is routed to component `i % N`, which yields the
//! "transposed" form of the index. A global Gray-code fold followed by a
//! backward pass of inversions and low-bit exchanges then turns the
//! transposed components into grid coordinates.
//!
//! Only `N = 2` is verified against an independent construction; higher
//! dimensions compile and satisfy the round-trip property but should be
//! treated as experimental.

use std::fmt;

use thiserror::Error;

/// Largest `order * dims` accepted. Keeps every distance and coordinate
/// inside a `u64` with one bit of headroom.
pub const MAX_BITS: u32 = 62;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CurveError {
    #[error("curve order must be at least 1")]
    ZeroOrder,
    #[error("curve must have at least 1 dimension")]
    ZeroDims,
    #[error("order {order} x dims {dims} = {bits} bits exceeds the {MAX_BITS}-bit sizing limit")]
    TooManyBits { order: u32, dims: u32, bits: u64 },
    #[error("distance {distance} is outside the curve (theta = {theta})")]
    DistanceOutOfRange { distance: u64, theta: u64 },
    #[error("expected {expected} components, got {actual}")]
    ComponentCount { expected: usize, actual: usize },
    #[error("component {index} = {value} is outside the grid side {side}")]
    ComponentOutOfRange { index: usize, value: u64, side: u64 },
}

/// Order and dimension count of a Hilbert curve, validated on construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CurveParams {
    order: u32,
    dims: u32,
}

impl CurveParams {
    pub fn new(order: u32, dims: u32) -> Result<Self, CurveError> {
        if order == 0 {
            return Err(CurveError::ZeroOrder);
        }
        if dims == 0 {
            return Err(CurveError::ZeroDims);
        }
        let bits = u64::from(order) * u64::from(dims);
        if bits > u64::from(MAX_BITS) {
            return Err(CurveError::TooManyBits { order, dims, bits });
        }
        Ok(Self { order, dims })
    }

    /// A two-dimensional curve, the only shape used for images.
    pub fn planar(order: u32) -> Result<Self, CurveError> {
        Self::new(order, 2)
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn dims(&self) -> u32 {
        self.dims
    }

    /// Total number of bits in a distance.
    pub fn bits(&self) -> u32 {
        self.order * self.dims
    }

    /// Number of points on the curve, `2^(order * dims)`.
    pub fn theta(&self) -> u64 {
        1u64 << self.bits()
    }

    /// Grid side length, `2^order`.
    pub fn side(&self) -> u64 {
        1u64 << self.order
    }

    fn check_components(&self, components: &[u64]) -> Result<(), CurveError> {
        if components.len() != self.dims as usize {
            return Err(CurveError::ComponentCount {
                expected: self.dims as usize,
                actual: components.len(),
            });
        }
        let side = self.side();
        if let Some((index, &value)) = components.iter().enumerate().find(|(_, &v)| v >= side) {
            return Err(CurveError::ComponentOutOfRange { index, value, side });
        }
        Ok(())
    }
}

/// Number of points on an order-`order` curve in `dims` dimensions.
pub fn compute_theta(order: u32, dims: u32) -> Result<u64, CurveError> {
    CurveParams::new(order, dims).map(|p| p.theta())
}

/// A position along the curve, always below the curve's theta.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CurveDistance(u64);

impl CurveDistance {
    pub fn new(value: u64, params: &CurveParams) -> Result<Self, CurveError> {
        let theta = params.theta();
        if value >= theta {
            return Err(CurveError::DistanceOutOfRange { distance: value, theta });
        }
        Ok(Self(value))
    }

    pub fn value(self) -> u64 {
        self.0
    }
}

impl fmt::Display for CurveDistance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Grid coordinates of one curve point. `coords[0]` is x, `coords[1]` is y.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CurvePoint {
    coords: Vec<u64>,
}

impl CurvePoint {
    pub fn new(coords: Vec<u64>, params: &CurveParams) -> Result<Self, CurveError> {
        params.check_components(&coords)?;
        Ok(Self { coords })
    }

    pub fn coords(&self) -> &[u64] {
        &self.coords
    }

    pub fn x(&self) -> u64 {
        self.coords[0]
    }

    pub fn y(&self) -> u64 {
        self.coords.get(1).copied().unwrap_or(0)
    }

    /// Manhattan distance to another point of the same dimension.
    pub fn l1_distance(&self, other: &CurvePoint) -> u64 {
        self.coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a.abs_diff(*b))
            .sum()
    }

    pub fn into_coords(self) -> Vec<u64> {
        self.coords
    }
}

/// Splits the big-endian bit string of `d` round-robin over the components.
fn deinterleave(d: u64, order: u32, out: &mut [u64]) {
    let dims = out.len();
    let nbits = order as usize * dims;
    out.iter_mut().for_each(|c| *c = 0);
    for i in 0..nbits {
        // string index i is bit (nbits - 1 - i) of d
        let bit = (d >> (nbits - 1 - i)) & 1;
        let c = &mut out[i % dims];
        *c = (*c << 1) | bit;
    }
}

fn interleave(components: &[u64], order: u32) -> u64 {
    let dims = components.len();
    let nbits = order as usize * dims;
    let mut d = 0u64;
    for i in 0..nbits {
        let comp_bit = order as usize - 1 - i / dims;
        d = (d << 1) | ((components[i % dims] >> comp_bit) & 1);
    }
    d
}

fn gray_fold(c: &mut [u64]) {
    let n = c.len();
    let r = c[n - 1] >> 1;
    for i in (1..n).rev() {
        c[i] ^= c[i - 1];
    }
    c[0] ^= r;
}

fn refine_in_place(g: &mut [u64], order: u32) {
    let stop = 2u64 << (order - 1);
    let mut q = 2u64;
    while q != stop {
        let w = q - 1;
        for i in (0..g.len()).rev() {
            if g[i] & q != 0 {
                g[0] ^= w;
            } else {
                let t = (g[0] ^ g[i]) & w;
                g[0] ^= t;
                g[i] ^= t;
            }
        }
        q <<= 1;
    }
}

// Inverse of `refine_in_place` followed by the inverse of `gray_fold`.
fn axes_to_transposed(x: &mut [u64], order: u32) {
    let n = x.len();
    let top = 1u64 << (order - 1);
    let mut q = top;
    while q > 1 {
        let p = q - 1;
        for i in 0..n {
            if x[i] & q != 0 {
                x[0] ^= p;
            } else {
                let t = (x[0] ^ x[i]) & p;
                x[0] ^= t;
                x[i] ^= t;
            }
        }
        q >>= 1;
    }
    for i in 1..n {
        x[i] ^= x[i - 1];
    }
    let mut t = 0u64;
    let mut q = top;
    while q > 1 {
        if x[n - 1] & q != 0 {
            t ^= q - 1;
        }
        q >>= 1;
    }
    for c in x.iter_mut() {
        *c ^= t;
    }
}

/// Applies the global Gray-code fold to transposed components.
///
/// `r = C[N-1] >> 1`, then `C[i] ^= C[i-1]` for `i = N-1 ..= 1`, then
/// `C[0] ^= r`.
pub fn gray_transform(components: &[u64], params: &CurveParams) -> Result<Vec<u64>, CurveError> {
    params.check_components(components)?;
    let mut c = components.to_vec();
    gray_fold(&mut c);
    Ok(c)
}

/// Undoes the excess exchanges and inversions left by [`gray_transform`],
/// producing final grid coordinates.
pub fn refine(gray_components: &[u64], params: &CurveParams) -> Result<CurvePoint, CurveError> {
    params.check_components(gray_components)?;
    let mut g = gray_components.to_vec();
    refine_in_place(&mut g, params.order);
    Ok(CurvePoint { coords: g })
}

/// Coordinates of the `d`-th point along the curve.
pub fn point_from_distance(d: CurveDistance, params: &CurveParams) -> Result<CurvePoint, CurveError> {
    let theta = params.theta();
    if d.0 >= theta {
        return Err(CurveError::DistanceOutOfRange { distance: d.0, theta });
    }
    let mut c = vec![0u64; params.dims as usize];
    deinterleave(d.0, params.order, &mut c);
    gray_fold(&mut c);
    refine_in_place(&mut c, params.order);
    Ok(CurvePoint { coords: c })
}

/// Inverse of [`point_from_distance`].
pub fn distance_from_point(pt: &CurvePoint, params: &CurveParams) -> Result<CurveDistance, CurveError> {
    params.check_components(&pt.coords)?;
    let mut x = pt.coords.clone();
    axes_to_transposed(&mut x, params.order);
    Ok(CurveDistance(interleave(&x, params.order)))
}

/// Allocation-free planar variant of [`point_from_distance`] for hot loops.
///
/// Fails if `d` is not below `4^order` or the order is invalid.
pub fn xy_from_distance(d: u64, order: u32) -> Result<(u64, u64), CurveError> {
    let params = CurveParams::planar(order)?;
    let d = CurveDistance::new(d, &params)?;
    let mut c = [0u64; 2];
    deinterleave(d.0, order, &mut c);
    gray_fold(&mut c);
    refine_in_place(&mut c, order);
    Ok((c[0], c[1]))
}

/// Planar inverse of [`xy_from_distance`].
pub fn distance_from_xy(x: u64, y: u64, order: u32) -> Result<u64, CurveError> {
    let params = CurveParams::planar(order)?;
    let mut c = [x, y];
    params.check_components(&c)?;
    axes_to_transposed(&mut c, order);
    Ok(interleave(&c, order))
}

/// Scalar reflected binary Gray code, `x ^ (x >> 1)`.
#[inline]
pub fn gray_code(x: u64) -> u64 {
    x ^ (x >> 1)
}

/// Inverse of [`gray_code`]: prefix XOR from the top bit down.
pub fn inverse_gray_code(mut g: u64) -> u64 {
    let mut shift = 1;
    while shift < 64 {
        g ^= g >> shift;
        shift <<= 1;
    }
    g
}

//! Points of the hypercube `{±1}^n`, packed into a `u32`.
//!
//! Bit `i` of the index is set exactly when `x_i = +1`. This fixes the index
//! convention for truth tables and spectra: the table entry at index `bits`
//! is `f(x)` for the point encoded by `bits`. Exact paths require `n ≤ 30`.

use crate::error::Error;
use crate::Result;

/// Largest dimension the packed representation carries.
pub const MAX_POINT_DIM: u32 = 30;

/// A point of `{±1}^n`, `1 ≤ n ≤ 30`. Bit `i` set ⇔ `x_i = +1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HypercubePoint {
    n: u32,
    bits: u32,
}

/// A sign vector `σ ∈ {±1}^n`, stored exactly like a point
/// (bit `i` set ⇔ `σ_i = +1`).
pub type SignVector = HypercubePoint;

impl HypercubePoint {
    /// Mask of the `n` low index bits.
    #[inline]
    pub fn index_mask(n: u32) -> u32 {
        debug_assert!(n >= 1 && n <= MAX_POINT_DIM);
        (1u32 << n) - 1
    }

    /// Construct from packed bits. Panics if bits above position `n` are set.
    #[inline]
    pub fn new(n: u32, bits: u32) -> Self {
        assert!(n >= 1 && n <= MAX_POINT_DIM, "point dimension out of range");
        assert_eq!(bits & !Self::index_mask(n), 0, "stray bits above n");
        HypercubePoint { n, bits }
    }

    /// Fallible constructor for untrusted input.
    pub fn try_new(n: u32, bits: u32) -> Result<Self> {
        if n < 1 || n > MAX_POINT_DIM {
            return Err(Error::InvalidParameter(format!(
                "point dimension n={n} outside 1..={MAX_POINT_DIM}"
            )));
        }
        if bits & !Self::index_mask(n) != 0 {
            return Err(Error::InvalidParameter(format!(
                "bits 0x{bits:x} has stray bits above n={n}"
            )));
        }
        Ok(HypercubePoint { n, bits })
    }

    /// The all-`+1` point.
    pub fn all_plus(n: u32) -> Self {
        Self::new(n, Self::index_mask(n))
    }

    /// The all-`−1` point.
    pub fn all_minus(n: u32) -> Self {
        Self::new(n, 0)
    }

    /// Build from a slice of signs (`+1`/`−1`).
    pub fn from_signs(signs: &[i8]) -> Result<Self> {
        let n = signs.len() as u32;
        if n < 1 || n > MAX_POINT_DIM {
            return Err(Error::InvalidParameter(format!(
                "sign vector length {n} outside 1..={MAX_POINT_DIM}"
            )));
        }
        let mut bits = 0u32;
        for (i, &s) in signs.iter().enumerate() {
            match s {
                1 => bits |= 1 << i,
                -1 => {}
                other => {
                    return Err(Error::InvalidParameter(format!(
                        "sign entry {other} at position {i}, expected ±1"
                    )))
                }
            }
        }
        Ok(HypercubePoint { n, bits })
    }

    #[inline]
    pub fn n(&self) -> u32 {
        self.n
    }

    #[inline]
    pub fn bits(&self) -> u32 {
        self.bits
    }

    /// Coordinate `i` as `+1` or `−1`.
    #[inline]
    pub fn sign(&self, i: u32) -> i64 {
        debug_assert!(i < self.n);
        if self.bits >> i & 1 == 1 {
            1
        } else {
            -1
        }
    }

    /// The neighbor `x^i`: `x` with coordinate `i` flipped.
    #[inline]
    pub fn flip(&self, i: u32) -> Self {
        debug_assert!(i < self.n);
        HypercubePoint {
            n: self.n,
            bits: self.bits ^ (1 << i),
        }
    }

    /// Mask of coordinates where this sign vector is `−1`.
    #[inline]
    pub fn negative_mask(&self) -> u32 {
        !self.bits & Self::index_mask(self.n)
    }

    /// All `2^n` points in index order.
    pub fn iter_all(n: u32) -> impl Iterator<Item = HypercubePoint> {
        (0..=Self::index_mask(n)).map(move |bits| HypercubePoint { n, bits })
    }
}

impl std::fmt::Display for HypercubePoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(")?;
        for i in 0..self.n {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", if self.sign(i) > 0 { "+" } else { "-" })?;
        }
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flip_is_an_involution() {
        for x in HypercubePoint::iter_all(5) {
            for i in 0..5 {
                assert_eq!(x.flip(i).flip(i), x);
                assert_eq!(x.flip(i).sign(i), -x.sign(i));
            }
        }
    }

    #[test]
    fn sign_roundtrip() {
        let x = HypercubePoint::from_signs(&[1, -1, -1, 1]).unwrap();
        assert_eq!(x.bits(), 0b1001);
        assert_eq!(x.sign(0), 1);
        assert_eq!(x.sign(1), -1);
        assert_eq!(x.negative_mask(), 0b0110);
    }

    #[test]
    fn stray_bits_rejected() {
        assert!(HypercubePoint::try_new(3, 0b1000).is_err());
        assert!(HypercubePoint::try_new(0, 0).is_err());
        assert!(HypercubePoint::try_new(31, 0).is_err());
    }
}

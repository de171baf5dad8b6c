//! Exact rational arithmetic helpers.
//!
//! Every exact quantity in the crate (sensitivities, spectral weights, tail
//! probabilities) is a [`Rat`] — an arbitrary-precision rational — so nothing
//! is ever rounded on the exact paths.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, ToPrimitive, Zero};

/// Arbitrary-precision rational.
pub type Rat = BigRational;

/// `num/den` as a [`Rat`].
pub fn rat(num: i64, den: u64) -> Rat {
    assert!(den != 0, "zero denominator");
    Rat::new(BigInt::from(num), BigInt::from(den))
}

/// `num / 2^log_den` as a [`Rat`].
pub fn rat_pow2(num: impl Into<BigInt>, log_den: u32) -> Rat {
    Rat::new(num.into(), BigInt::one() << log_den as usize)
}

/// Exact conversion of a finite `f64` (f64 values are dyadic rationals).
pub fn rat_from_f64(x: f64) -> Rat {
    Rat::from_float(x).expect("non-finite float")
}

/// Nearest `f64` to a [`Rat`] (for reporting; exact paths never depend on it).
pub fn rat_to_f64(x: &Rat) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// `x^k` for non-negative integer `k`.
pub fn rat_pow(x: &Rat, k: u32) -> Rat {
    num::traits::Pow::pow(x.clone(), k as usize)
}

/// Format as `num/den` (integers stay bare).
pub fn rat_display(x: &Rat) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Zero.
pub fn rat_zero() -> Rat {
    Rat::zero()
}

/// One.
pub fn rat_one() -> Rat {
    Rat::one()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dyadic_floats_convert_exactly() {
        assert_eq!(rat_from_f64(0.25), rat(1, 4));
        assert_eq!(rat_from_f64(-1.5), rat(-3, 2));
    }

    #[test]
    fn pow2_denominators() {
        assert_eq!(rat_pow2(3, 3), rat(3, 8));
    }

    #[test]
    fn display_forms() {
        assert_eq!(rat_display(&rat(3, 2)), "3/2");
        assert_eq!(rat_display(&rat(4, 2)), "2");
    }
}

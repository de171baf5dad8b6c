//! Instance generators: extremal threshold functions, random sign-flip
//! unions, random intersections, the bin-flip noise process, and the tribes
//! fixture.

mod binning;
mod family;
mod random;

pub use binning::{
    binned_ns_identity, binned_pair, binning_distribution_check, restricted_function,
    restricted_spec, BinnedNoiseDraw, MAX_BINNING_ENUM_DIM,
};
pub use family::{
    lower_bound_family, union_sensitivity_audit, LowerBoundFamily, UnionAuditReport,
    UnionAuditTrial, MAX_UNION_AUDIT_DIM,
};
pub use random::{random_intersection, tribes, WeightDist};

use num::bigint::BigUint;
use num::{BigInt, One, Zero};

use crate::boolfn::LinearThresholdFunction;
use crate::error::Error;
use crate::rat::{rat, rat_pow2, Rat};
use crate::Result;

/// Cap for exact binomial tail tables.
pub const MAX_BINOMIAL_DIM: u32 = 64;

/// Exact tail probabilities of `Σ_{i=1}^n x_i` for uniform `x ∈ {±1}^n`.
///
/// `tail(t) = Pr(Σ x_i > t)`; the sum takes the value `n − 2j` when exactly
/// `j` coordinates are `−1`, so every tail is a dyadic rational with
/// denominator `2^n`.
#[derive(Debug, Clone)]
pub struct BinomialTailTable {
    n: u32,
    /// `cum[j] = Σ_{l ≤ j} C(n, l)`.
    cum: Vec<BigUint>,
}

impl BinomialTailTable {
    pub fn new(n: u32) -> Result<Self> {
        if n < 1 || n > MAX_BINOMIAL_DIM {
            return Err(Error::SizeCap {
                what: "binomial tail table",
                limit: MAX_BINOMIAL_DIM,
                requested: n,
            });
        }
        let mut cum = Vec::with_capacity(n as usize + 1);
        let mut binom = BigUint::one();
        let mut acc = BigUint::zero();
        for j in 0..=n as u64 {
            if j > 0 {
                binom = binom * (n as u64 - j + 1) / j;
            }
            acc += &binom;
            cum.push(acc.clone());
        }
        Ok(BinomialTailTable { n, cum })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// `Pr(Σ x_i > t)`, exact, for any integer `t`.
    pub fn tail(&self, t: i64) -> Rat {
        let n = self.n as i64;
        if t >= n {
            return Rat::zero();
        }
        if t < -n {
            return Rat::one();
        }
        // Σ = n − 2j > t  ⇔  j ≤ ⌊(n − t − 1)/2⌋
        let jmax = (n - t - 1).div_euclid(2);
        if jmax < 0 {
            return Rat::zero();
        }
        let jmax = (jmax as u64).min(self.n as u64) as usize;
        rat_pow2(BigInt::from(self.cum[jmax].clone()), self.n)
    }
}

/// The unit-weight threshold function `1[Σ x_i > t]` with `t` as large as
/// possible subject to `E[f] ≥ ε` (requires `2^{−n} < ε < 1/2`). Returns the
/// function and its achieved mean.
pub fn threshold_ltf(n: u32, eps: &Rat) -> Result<(LinearThresholdFunction, Rat)> {
    let low = rat_pow2(BigInt::one(), n);
    if *eps <= low || *eps >= rat(1, 2) {
        return Err(Error::InvalidParameter(format!(
            "threshold mass eps={eps} outside (2^-{n}, 1/2)"
        )));
    }
    let tails = BinomialTailTable::new(n)?;
    let theta = largest_theta_with_tail_at_least(&tails, eps);
    let mean = tails.tail(theta);
    debug_assert!(mean >= *eps);
    Ok((LinearThresholdFunction::unit(n, theta), mean))
}

/// Largest integer `t` with `tail(t) ≥ eps` (always exists for `eps ≤ 1`).
pub(crate) fn largest_theta_with_tail_at_least(tails: &BinomialTailTable, eps: &Rat) -> i64 {
    let n = tails.n() as i64;
    let mut theta = -n - 1;
    for t in (-n..n).rev() {
        if tails.tail(t) >= *eps {
            theta = t;
            break;
        }
    }
    theta
}

/// Closed-form exact average sensitivity of `1[Σ x_i > θ]` on `n` variables:
/// an edge in direction `i` is boundary exactly when `Σ_{j≠i} x_j ∈ {θ, θ+1}`,
/// and only one of the two matches the parity of `n−1`.
pub fn unit_threshold_as(n: u32, theta: i64) -> Rat {
    let parity = ((n as i64) - 1).rem_euclid(2);
    let s = if theta.rem_euclid(2) == parity {
        theta
    } else {
        theta + 1
    };
    if s.abs() > n as i64 - 1 {
        return Rat::zero();
    }
    let j = ((n as i64 - 1 - s) / 2) as u64;
    let mut binom = BigUint::one();
    for l in 1..=j {
        binom = binom * (n as u64 - 1 - l + 1) / l;
    }
    rat(n as i64, 1) * rat_pow2(BigInt::from(binom), n - 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exec::Exec;
    use crate::sensitivity::average_sensitivity_exact;

    #[test]
    fn tail_examples() {
        let t3 = BinomialTailTable::new(3).unwrap();
        assert_eq!(t3.tail(0), rat(1, 2));
        assert_eq!(t3.tail(1), rat(1, 8));
        assert_eq!(t3.tail(2), rat(1, 8));
        assert_eq!(t3.tail(3), rat(0, 1));
        assert_eq!(t3.tail(-4), rat(1, 1));
        let t2 = BinomialTailTable::new(2).unwrap();
        assert_eq!(t2.tail(0), rat(1, 4));
    }

    #[test]
    fn tails_monotone_with_dyadic_denominators() {
        let t = BinomialTailTable::new(9).unwrap();
        let mut prev = rat(2, 1);
        for u in -10..=9i64 {
            let cur = t.tail(u);
            assert!(cur <= prev);
            prev = cur;
        }
    }

    #[test]
    fn threshold_examples() {
        let (f, mean) = threshold_ltf(3, &rat(1, 8)).unwrap();
        assert_eq!(f.threshold(), 2);
        assert_eq!(mean, rat(1, 8));

        let (f, mean) = threshold_ltf(3, &rat(49, 100)).unwrap();
        assert_eq!(f.threshold(), 0);
        assert_eq!(mean, rat(1, 2));

        assert!(threshold_ltf(2, &rat(3, 5)).is_err());
        assert!(threshold_ltf(4, &rat(1, 16)).is_err()); // eps = 2^-n not allowed
    }

    #[test]
    fn closed_form_as_matches_edge_scan() {
        for n in 2..=11u32 {
            for theta in -(n as i64)..(n as i64) {
                let f = LinearThresholdFunction::unit(n, theta);
                let table = f.truth_table(Exec::Sequential).unwrap();
                let report = average_sensitivity_exact(&table).unwrap();
                assert_eq!(
                    unit_threshold_as(n, theta),
                    report.as_exact,
                    "n={n} theta={theta}"
                );
            }
        }
    }
}

//! Average and noise sensitivity: exact rational routes, Monte Carlo
//! estimators, and the union build-up audit machinery.
//!
//! The exact average sensitivity comes from the boundary-edge count
//! `as(f) = B / 2^{n−1}` where `B` counts unordered hypercube edges `{x, x^i}`
//! with `f(x) ≠ f(x^i)`. (Counting ordered 1→0 pairs and scaling by `2^{1−n}`
//! gives the same number; we count each unordered pair once.)
//!
//! The exact noise sensitivity enumerates flip masks grouped by Hamming
//! weight: `ns_ρ(f) = 2^{−n}·Σ_d ρ^d(1−ρ)^{n−d}·A_d` with
//! `A_d = Σ_{|m|=d} #{x : f(x) ≠ f(x⊕m)}`. This route is independent of the
//! spectral formula in [`crate::fourier`], and the two are required to agree
//! exactly.

mod audit;
mod mc;

pub use audit::{
    correlation_statistic, edge_inequality_violations, telescoping_audit, EdgeViolation,
    LedgerRow, TelescopingLedger, DEFAULT_BOUND_C,
};
pub use mc::{
    average_sensitivity_mc, average_sensitivity_mc_with, noise_sensitivity_mc,
    noise_sensitivity_mc_with, AsMcMode, MonteCarloEstimate,
};

use num::{One, Zero};

use crate::boolfn::{xor_permute_word, TruthTable};
use crate::error::Error;
use crate::exec::{self, Exec};
use crate::rat::{rat_pow, rat_pow2, Rat};
use crate::Result;

/// Cap for the exact edge scan.
pub const MAX_EXACT_AS_DIM: u32 = 26;
/// Cap for exact noise-sensitivity enumeration (`2^n` masks × `2^n/64` words).
pub const MAX_NS_ENUM_DIM: u32 = 20;

/// Exact sensitivity summary of one function.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SensitivityReport {
    pub n: u32,
    /// Unordered boundary edges `B`.
    pub boundary_edges: u64,
    /// `as(f) = B / 2^{n−1}`, exact.
    pub as_exact: Rat,
    /// `E[f]`, exact.
    pub mean: Rat,
}

/// Exact average sensitivity of a table (`n ≤ 26`).
pub fn average_sensitivity_exact(tt: &TruthTable) -> Result<SensitivityReport> {
    average_sensitivity_exact_with(tt, Exec::default())
}

/// [`average_sensitivity_exact`] on an explicit backend.
pub fn average_sensitivity_exact_with(tt: &TruthTable, exec: Exec) -> Result<SensitivityReport> {
    let n = tt.n();
    if n > MAX_EXACT_AS_DIM {
        return Err(Error::SizeCap {
            what: "exact average sensitivity",
            limit: MAX_EXACT_AS_DIM,
            requested: n,
        });
    }
    let b = tt.boundary_edges(exec);
    Ok(SensitivityReport {
        n,
        boundary_edges: b,
        as_exact: rat_pow2(b, n - 1),
        mean: tt.mean(),
    })
}

/// Exact noise sensitivity by Hamming-aggregated pair enumeration
/// (`n ≤ 20`; rational `ρ ∈ (0,1)`).
pub fn noise_sensitivity_exact(tt: &TruthTable, rho: &Rat) -> Result<Rat> {
    noise_sensitivity_exact_with(tt, rho, Exec::default())
}

/// [`noise_sensitivity_exact`] on an explicit backend.
pub fn noise_sensitivity_exact_with(tt: &TruthTable, rho: &Rat, exec: Exec) -> Result<Rat> {
    if rho <= &Rat::zero() || rho >= &Rat::one() {
        return Err(Error::InvalidParameter(format!(
            "noise rate rho={rho} outside (0,1)"
        )));
    }
    let n = tt.n();
    if n > MAX_NS_ENUM_DIM {
        return Err(Error::SizeCap {
            what: "exact noise sensitivity enumeration",
            limit: MAX_NS_ENUM_DIM,
            requested: n,
        });
    }
    let words = tt.words();
    let size = 1usize << n;
    // A[d] = Σ_{|m|=d} #{x : f(x) ≠ f(x⊕m)}
    let hist = exec::sum_histograms(exec, size, n as usize + 1, |mask, acc| {
        if mask == 0 {
            return;
        }
        let dl = (mask & 63) as u32;
        let dh = mask >> 6;
        let mut c = 0u64;
        for (a, &w) in words.iter().enumerate() {
            c += (w ^ xor_permute_word(words[a ^ dh], dl)).count_ones() as u64;
        }
        acc[mask.count_ones() as usize] += c as u128;
    });
    let one_minus = Rat::one() - rho;
    let mut ns = Rat::zero();
    for (d, &a) in hist.iter().enumerate() {
        if a == 0 {
            continue;
        }
        ns += rat_pow(rho, d as u32)
            * rat_pow(&one_minus, n - d as u32)
            * rat_pow2(num::BigInt::from(a), n);
    }
    Ok(ns)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolfn::LinearThresholdFunction;
    use crate::fourier;
    use crate::rat::rat;

    /// Naive oracle: per-point neighbor scan, `Σ_x #{i : f(x)≠f(x^i)} / 2^n`.
    pub(crate) fn naive_average_sensitivity(tt: &TruthTable) -> Rat {
        let n = tt.n();
        let mut flips = 0u64;
        for x in 0..tt.len() as u32 {
            for i in 0..n {
                if tt.get(x) != tt.get(x ^ (1 << i)) {
                    flips += 1;
                }
            }
        }
        rat_pow2(flips, n)
    }

    /// Naive oracle: full pair enumeration of the noise law,
    /// `Σ_{x,y} 2^{−n}·ρ^{d(x,y)}(1−ρ)^{n−d(x,y)}·[f(x)≠f(y)]`.
    fn naive_noise_sensitivity(tt: &TruthTable, rho: &Rat) -> Rat {
        let n = tt.n();
        let mut ns = Rat::zero();
        let one_minus = Rat::one() - rho;
        for x in 0..tt.len() as u32 {
            for y in 0..tt.len() as u32 {
                if tt.get(x) != tt.get(y) {
                    let d = (x ^ y).count_ones();
                    ns += rat_pow(rho, d) * rat_pow(&one_minus, n - d);
                }
            }
        }
        ns * rat_pow2(num::BigInt::one(), n)
    }

    #[test]
    fn parity_has_full_sensitivity() {
        for n in 1..=8u32 {
            let r = average_sensitivity_exact(&TruthTable::parity(n)).unwrap();
            assert_eq!(r.as_exact, rat(n as i64, 1));
        }
    }

    #[test]
    fn constant_has_zero_sensitivity() {
        let r = average_sensitivity_exact(&TruthTable::constant(6, true)).unwrap();
        assert_eq!(r.boundary_edges, 0);
        assert_eq!(r.as_exact, rat(0, 1));
    }

    #[test]
    fn maj3_sensitivity_is_three_halves() {
        let t = LinearThresholdFunction::unit(3, 0)
            .truth_table(Exec::Sequential)
            .unwrap();
        let r = average_sensitivity_exact(&t).unwrap();
        assert_eq!(r.as_exact, rat(3, 2));
        assert_eq!(r.as_exact, naive_average_sensitivity(&t));
    }

    #[test]
    fn edge_scan_matches_naive_oracle() {
        for n in 1..=10u32 {
            let t = TruthTable::from_fn(n, |b| b.wrapping_mul(0x45d9f3b) & 0x2000 != 0);
            let r = average_sensitivity_exact(&t).unwrap();
            assert_eq!(r.as_exact, naive_average_sensitivity(&t), "n={n}");
        }
    }

    #[test]
    fn ns_examples() {
        // dictator at ρ=1/3 → 1/3
        let d = TruthTable::dictator(4, 2);
        assert_eq!(noise_sensitivity_exact(&d, &rat(1, 3)).unwrap(), rat(1, 3));
        // constant → 0
        let c = TruthTable::constant(4, false);
        assert_eq!(noise_sensitivity_exact(&c, &rat(1, 4)).unwrap(), rat(0, 1));
        // MAJ_3 at ρ=1/4 equals the spectral route exactly
        let maj = LinearThresholdFunction::unit(3, 0)
            .truth_table(Exec::Sequential)
            .unwrap();
        let enum_ns = noise_sensitivity_exact(&maj, &rat(1, 4)).unwrap();
        let spec_ns = fourier::noise_sensitivity_from_spectrum(&fourier::wht(&maj).unwrap(), &rat(1, 4))
            .unwrap();
        assert_eq!(enum_ns, spec_ns);
    }

    #[test]
    fn ns_enumeration_matches_naive_pairs() {
        for n in 1..=6u32 {
            let t = TruthTable::from_fn(n, |b| b.wrapping_mul(2654435761) & 0x20 != 0);
            for rho in [rat(1, 8), rat(1, 4), rat(1, 2)] {
                let fast = noise_sensitivity_exact(&t, &rho).unwrap();
                assert_eq!(fast, naive_noise_sensitivity(&t, &rho), "n={n} rho={rho}");
            }
        }
    }

    #[test]
    fn ns_rejects_bad_rho() {
        let t = TruthTable::parity(3);
        assert!(noise_sensitivity_exact(&t, &rat(0, 1)).is_err());
        assert!(noise_sensitivity_exact(&t, &rat(5, 4)).is_err());
    }
}

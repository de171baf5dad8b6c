//! Exact Walsh–Hadamard analysis.
//!
//! For `f:{±1}^n → {0,1}` we store the integer-scaled spectrum
//! `W(S) = 2^n·f̂(S) = Σ_x f(x)·χ_S(x)` with `χ_S(x) = Π_{i∈S} x_i`, indexed
//! by the subset mask `S`. Under the crate's index convention (bit set ⇔
//! `x_i = +1`) the in-place butterfly stage for coordinate `i` maps the pair
//! `(u, v) = (value at x_i=−1, value at x_i=+1)` to `(u+v, v−u)`; the
//! synthesis direction uses the transposed kernel `(u−v, u+v)` and a final
//! division by `2^n`.
//!
//! Everything here is exact: coefficients are integers, per-degree weights
//! and noise sensitivities are rationals. This module is the oracle the
//! enumeration routes in [`crate::sensitivity`] are checked against, and vice
//! versa.

use num::{BigInt, One, Zero};

use crate::boolfn::TruthTable;
use crate::error::Error;
use crate::exec::{self, Exec};
use crate::rat::{rat, rat_pow, rat_pow2, Rat};
use crate::Result;

/// Cap for exact spectra (`2^26` i32 coefficients = 256 MiB).
pub const MAX_WHT_DIM: u32 = 26;

/// Integer-scaled Fourier spectrum of a 0/1-valued function.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FourierSpectrum {
    n: u32,
    coeffs: Vec<i32>,
}

impl FourierSpectrum {
    #[inline]
    pub fn n(&self) -> u32 {
        self.n
    }

    /// `W(S) = 2^n·f̂(S)` at subset mask `S`.
    #[inline]
    pub fn coeff(&self, mask: u32) -> i64 {
        self.coeffs[mask as usize] as i64
    }

    pub fn coeffs(&self) -> &[i32] {
        &self.coeffs
    }

    /// `f̂(S)` as an exact rational.
    pub fn fourier_coeff(&self, mask: u32) -> Rat {
        rat_pow2(self.coeff(mask), self.n)
    }

    /// Per-degree squared Fourier weight.
    pub fn degree_profile(&self) -> DegreeWeightProfile {
        let mut acc = vec![0u128; self.n as usize + 1];
        for (mask, &w) in self.coeffs.iter().enumerate() {
            let w = w as i128;
            acc[mask.count_ones() as usize] += (w * w) as u128;
        }
        DegreeWeightProfile {
            n: self.n,
            weights: acc
                .into_iter()
                .map(|s| rat_pow2(BigInt::from(s), 2 * self.n))
                .collect(),
        }
    }
}

/// `weights[d] = Σ_{|S|=d} f̂(S)²`, exact. Entries sum to `E[f²] = E[f]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeWeightProfile {
    n: u32,
    weights: Vec<Rat>,
}

impl DegreeWeightProfile {
    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn weights(&self) -> &[Rat] {
        &self.weights
    }

    pub fn weight_at(&self, d: u32) -> &Rat {
        &self.weights[d as usize]
    }

    /// Total spectral weight `Σ_d weights[d] = E[f]`.
    pub fn total(&self) -> Rat {
        self.weights.iter().sum()
    }
}

fn butterfly<T, K>(exec: Exec, data: &mut [T], kernel: K)
where
    T: Copy + Send,
    K: Fn(T, T) -> (T, T) + Sync + Copy,
{
    let len = data.len();
    let mut h = 1usize;
    while h < len {
        let block = 2 * h;
        // a chunk holds whole blocks, so chunks are independent
        let chunk = block.max(1 << 14);
        exec::for_each_chunk_mut(exec, data, chunk, |c| {
            for start in (0..c.len()).step_by(block) {
                for j in start..start + h {
                    let (a, b) = kernel(c[j], c[j + h]);
                    c[j] = a;
                    c[j + h] = b;
                }
            }
        });
        h = block;
    }
}

/// Exact spectrum of a truth table (`n ≤ 26`, `O(n·2^n)` integer ops).
pub fn wht(tt: &TruthTable) -> Result<FourierSpectrum> {
    wht_with(tt, Exec::default())
}

/// [`wht`] on an explicit execution backend.
pub fn wht_with(tt: &TruthTable, exec: Exec) -> Result<FourierSpectrum> {
    let n = tt.n();
    if n > MAX_WHT_DIM {
        return Err(Error::SizeCap {
            what: "Walsh-Hadamard transform",
            limit: MAX_WHT_DIM,
            requested: n,
        });
    }
    let len = 1usize << n;
    let mut data = vec![0i32; len];
    exec::for_each_chunk_mut_indexed(exec, &mut data, 1 << 14, |ci, chunk| {
        let base = ci << 14;
        for (j, v) in chunk.iter_mut().enumerate() {
            *v = tt.get((base + j) as u32) as i32;
        }
    });
    butterfly(exec, &mut data, |u, v| (u + v, v - u));
    Ok(FourierSpectrum { n, coeffs: data })
}

/// Synthesis: rebuild the table of `f` from its spectrum
/// (`2^n·f(x) = Σ_S W(S)·χ_S(x)`). Exposed for the round-trip invariant.
pub fn inverse_wht(spec: &FourierSpectrum) -> TruthTable {
    let len = 1usize << spec.n;
    let mut data: Vec<i64> = spec.coeffs.iter().map(|&w| w as i64).collect();
    butterfly(Exec::Sequential, &mut data, |u, v| (u - v, u + v));
    let scale = len as i64;
    TruthTable::from_fn(spec.n, |bits| {
        let v = data[bits as usize];
        debug_assert!(v == 0 || v == scale, "inverse transform of a non-0/1 table");
        v == scale
    })
}

/// `Σ_{|S|>d} f̂(S)²`, exact.
pub fn tail_weight(profile: &DegreeWeightProfile, d: u32) -> Rat {
    profile
        .weights
        .iter()
        .skip(d as usize + 1)
        .sum()
}

/// Exact spectral noise sensitivity
/// `ns_ρ(f) = 2·Σ_S (1 − (1−2ρ)^{|S|})·f̂(S)²` for rational `ρ ∈ (0,1)`.
///
/// Must agree with pair enumeration
/// ([`crate::sensitivity::noise_sensitivity_exact`]) on every instance.
pub fn noise_sensitivity_from_spectrum(spec: &FourierSpectrum, rho: &Rat) -> Result<Rat> {
    if rho <= &Rat::zero() || rho >= &Rat::one() {
        return Err(Error::InvalidParameter(format!(
            "noise rate rho={rho} outside (0,1)"
        )));
    }
    let profile = spec.degree_profile();
    let base = Rat::one() - rat(2, 1) * rho;
    let mut acc = Rat::zero();
    for (d, w) in profile.weights.iter().enumerate() {
        if w.is_zero() {
            continue;
        }
        acc += (Rat::one() - rat_pow(&base, d as u32)) * w;
    }
    Ok(rat(2, 1) * acc)
}

/// Floating-point fast path of [`noise_sensitivity_from_spectrum`] for
/// experiment-scale runs; agrees with the exact route to ~1e-9 relative.
pub fn noise_sensitivity_from_spectrum_f64(spec: &FourierSpectrum, rho: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&rho) || rho == 0.0 || rho == 1.0 {
        return Err(Error::InvalidParameter(format!(
            "noise rate rho={rho} outside (0,1)"
        )));
    }
    let scale = (1u128 << (2 * spec.n)) as f64;
    let mut acc = vec![0u128; spec.n as usize + 1];
    for (mask, &w) in spec.coeffs.iter().enumerate() {
        let w = w as i128;
        acc[mask.count_ones() as usize] += (w * w) as u128;
    }
    let base = 1.0 - 2.0 * rho;
    let mut ns = 0.0;
    for (d, &s) in acc.iter().enumerate() {
        ns += (1.0 - base.powi(d as i32)) * (s as f64 / scale);
    }
    Ok(2.0 * ns)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolfn::LinearThresholdFunction;

    /// Independent oracle: direct double summation of `Σ_x f(x)·χ_S(x)`.
    fn direct_spectrum(tt: &TruthTable) -> Vec<i64> {
        let n = tt.n();
        let size = 1u32 << n;
        (0..size)
            .map(|s| {
                let mut acc = 0i64;
                for x in 0..size {
                    if tt.get(x) {
                        // χ_S(x) = (−1)^{#(i∈S with x_i = −1)}
                        let minus = (s & !x & (size - 1)).count_ones();
                        acc += if minus % 2 == 0 { 1 } else { -1 };
                    }
                }
                acc
            })
            .collect()
    }

    #[test]
    fn constant_one_spectrum() {
        let t = TruthTable::constant(2, true);
        let s = wht(&t).unwrap();
        assert_eq!(s.coeff(0), 4);
        for mask in 1..4 {
            assert_eq!(s.coeff(mask), 0);
        }
    }

    #[test]
    fn dictator_spectrum_n3() {
        let t = TruthTable::dictator(3, 0);
        let s = wht(&t).unwrap();
        assert_eq!(s.coeff(0), 4);
        assert_eq!(s.coeff(1), 4);
        for mask in 2..8 {
            assert_eq!(s.coeff(mask), 0);
        }
    }

    #[test]
    fn maj3_spectrum_matches_direct_summation() {
        let t = LinearThresholdFunction::unit(3, 0)
            .truth_table(Exec::Sequential)
            .unwrap();
        let s = wht(&t).unwrap();
        let oracle = direct_spectrum(&t);
        for mask in 0..8u32 {
            assert_eq!(s.coeff(mask), oracle[mask as usize]);
        }
        assert_eq!(s.coeff(0), 4);
        for i in 0..3 {
            assert_eq!(s.coeff(1 << i), 2);
        }
        assert_eq!(s.coeff(0b111), -2);
        assert_eq!(s.coeff(0b011), 0);
    }

    #[test]
    fn wht_matches_direct_summation_random() {
        for n in 1..=8u32 {
            let t = TruthTable::from_fn(n, |b| b.wrapping_mul(0x9e3779b9) & 0x40000 != 0);
            let s = wht(&t).unwrap();
            let oracle = direct_spectrum(&t);
            for mask in 0..1u32 << n {
                assert_eq!(s.coeff(mask), oracle[mask as usize], "n={n} mask={mask}");
            }
        }
    }

    #[test]
    fn parseval_and_roundtrip() {
        for n in 1..=10u32 {
            let t = TruthTable::from_fn(n, |b| b.wrapping_mul(2654435761) & 0x100000 != 0);
            let s = wht(&t).unwrap();
            let sum_sq: i128 = s.coeffs().iter().map(|&w| (w as i128) * (w as i128)).sum();
            assert_eq!(sum_sq, (1i128 << n) * t.ones() as i128);
            assert_eq!(inverse_wht(&s), t);
        }
    }

    #[test]
    fn profile_examples() {
        // parity indicator: weight 1/4 at degrees 0 and n
        let p = wht(&TruthTable::parity(4)).unwrap().degree_profile();
        assert_eq!(p.weight_at(0), &rat(1, 4));
        assert_eq!(p.weight_at(4), &rat(1, 4));
        for d in 1..4 {
            assert_eq!(p.weight_at(d), &rat(0, 1));
        }
        // dictator indicator: 1/4 at degrees 0 and 1
        let p = wht(&TruthTable::dictator(3, 1)).unwrap().degree_profile();
        assert_eq!(p.weight_at(0), &rat(1, 4));
        assert_eq!(p.weight_at(1), &rat(1, 4));
        // MAJ_3 indicator: (1/4, 3/16, 0, 1/16)
        let maj = LinearThresholdFunction::unit(3, 0)
            .truth_table(Exec::Sequential)
            .unwrap();
        let p = wht(&maj).unwrap().degree_profile();
        assert_eq!(p.weights(), &[rat(1, 4), rat(3, 16), rat(0, 1), rat(1, 16)]);
        assert_eq!(p.total(), maj.mean());
    }

    #[test]
    fn tail_weight_examples() {
        let maj = LinearThresholdFunction::unit(3, 0)
            .truth_table(Exec::Sequential)
            .unwrap();
        let p = wht(&maj).unwrap().degree_profile();
        assert_eq!(tail_weight(&p, 3), rat(0, 1));
        assert_eq!(tail_weight(&p, 1), rat(1, 16));
        let parity = wht(&TruthTable::parity(5)).unwrap().degree_profile();
        assert_eq!(tail_weight(&parity, 4), rat(1, 4));
    }

    #[test]
    fn spectral_noise_sensitivity_examples() {
        // dictator: ns_ρ = ρ
        let s = wht(&TruthTable::dictator(3, 0)).unwrap();
        assert_eq!(
            noise_sensitivity_from_spectrum(&s, &rat(1, 4)).unwrap(),
            rat(1, 4)
        );
        // constant: 0
        let s = wht(&TruthTable::constant(3, true)).unwrap();
        assert_eq!(
            noise_sensitivity_from_spectrum(&s, &rat(1, 4)).unwrap(),
            rat(0, 1)
        );
        // parity indicator on n=2 at ρ=1/4: (1−(1−2ρ)^n)/2 = 3/8
        let s = wht(&TruthTable::parity(2)).unwrap();
        assert_eq!(
            noise_sensitivity_from_spectrum(&s, &rat(1, 4)).unwrap(),
            rat(3, 8)
        );
        // rejects ρ outside (0,1)
        assert!(noise_sensitivity_from_spectrum(&s, &rat(1, 1)).is_err());
    }

    #[test]
    fn f64_path_tracks_exact() {
        let maj = LinearThresholdFunction::unit(5, 0)
            .truth_table(Exec::Sequential)
            .unwrap();
        let s = wht(&maj).unwrap();
        for rho in [0.125, 0.25, 0.375] {
            let exact = noise_sensitivity_from_spectrum(&s, &crate::rat::rat_from_f64(rho)).unwrap();
            let fast = noise_sensitivity_from_spectrum_f64(&s, rho).unwrap();
            assert!((crate::rat::rat_to_f64(&exact) - fast).abs() < 1e-9);
        }
    }
}

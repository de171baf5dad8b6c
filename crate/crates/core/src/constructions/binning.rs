//! The bin-flip noise process and its exact equivalence check.
//!
//! For integer `m`, an ε = 1/m correlated pair `(x, y)` can be produced by:
//! (1) assigning each coordinate independently to one of `m` bins,
//! (2) drawing `z` uniform, (3) drawing one sign `b_j` per bin and setting
//! `x_i = z_i·b_{bin(i)}`, (4) flipping every coordinate of one uniformly
//! chosen bin to get `y`. The coordinate-flip indicators are then independent
//! Bernoulli(1/m), so the joint law of `(x, y)` equals the direct noise law —
//! [`binning_distribution_check`] verifies the equality by exhausting every
//! atom of process randomness and returns the exact total-variation distance,
//! which must be zero.
//!
//! After steps (1)–(3), `f(x)` as a function of the bin signs `b` is a
//! composite of induced halfspaces in `m` variables with weights
//! `w'_j = Σ_{i∈bin j} w_i·z_i` ([`restricted_spec`]), which is what makes
//! the process useful: single-bin flips of `b` are single-coordinate flips of
//! the restriction.

use num::{BigInt, One, Zero};
use rand::Rng;

use crate::boolfn::{CompositeSpec, HypercubePoint, Term, TruthTable};
use crate::error::Error;
use crate::exec::{self, Exec};
use crate::rat::{rat, rat_pow, rat_pow2, Rat};
use crate::rng::{random_point, stream_rng};
use crate::sensitivity::noise_sensitivity_exact_with;
use crate::Result;

/// Cap for the exhaustive process enumerations (`m^n·2^n·2^m·m` atoms).
pub const MAX_BINNING_ENUM_DIM: u32 = 6;

/// One draw of the bin-flip process.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinnedNoiseDraw {
    pub n: u32,
    pub m: u32,
    /// Coordinate → bin.
    pub bins: Vec<u32>,
    /// Step-2 uniform assignment.
    pub z: HypercubePoint,
    /// Step-3 bin signs (bit `j` set ⇔ `b_j = +1`).
    pub bin_signs: u32,
    /// Step-4 uniformly chosen bin.
    pub chosen_bin: u32,
    /// `b` with the chosen bin flipped.
    pub flipped_bin_signs: u32,
    pub x: HypercubePoint,
    pub y: HypercubePoint,
}

fn bin_masks(n: u32, m: u32, bins: &[u32]) -> Vec<u32> {
    let mut masks = vec![0u32; m as usize];
    for i in 0..n {
        masks[bins[i as usize] as usize] |= 1 << i;
    }
    masks
}

/// `x_i = z_i · b_{bin(i)}`, as packed bits (sign product = XNOR of bits).
fn compose_signs(n: u32, z_bits: u32, bins_broadcast: u32) -> u32 {
    !(z_bits ^ bins_broadcast) & HypercubePoint::index_mask(n)
}

fn broadcast_bin_signs(masks: &[u32], bin_signs: u32) -> u32 {
    masks
        .iter()
        .enumerate()
        .filter(|(j, _)| bin_signs >> j & 1 == 1)
        .fold(0u32, |acc, (_, mask)| acc | mask)
}

/// Execute the 4-step process once.
pub fn binned_pair(n: u32, m: u32, seed: u64) -> Result<BinnedNoiseDraw> {
    if m < 1 || m > n {
        return Err(Error::InvalidParameter(format!(
            "bin count m={m} outside 1..=n ({n})"
        )));
    }
    let mut rng = stream_rng(seed, 0);
    let bins: Vec<u32> = (0..n).map(|_| rng.random_range(0..m)).collect();
    let z = random_point(&mut rng, n);
    let bin_signs = rng.random::<u32>() & ((1u32 << m) - 1);
    let chosen_bin = rng.random_range(0..m);

    let masks = bin_masks(n, m, &bins);
    let x_bits = compose_signs(n, z.bits(), broadcast_bin_signs(&masks, bin_signs));
    let y_bits = x_bits ^ masks[chosen_bin as usize];
    Ok(BinnedNoiseDraw {
        n,
        m,
        bins,
        z,
        bin_signs,
        chosen_bin,
        flipped_bin_signs: bin_signs ^ (1 << chosen_bin),
        x: HypercubePoint::new(n, x_bits),
        y: HypercubePoint::new(n, y_bits),
    })
}

/// Iterate every bin assignment (`m^n` of them) as a mixed-radix counter.
fn for_each_assignment(n: u32, m: u32, index: usize, bins: &mut [u32]) {
    let mut rest = index;
    for i in 0..n as usize {
        bins[i] = (rest % m as usize) as u32;
        rest /= m as usize;
    }
}

/// Exact joint law of the process vs. the direct ε = 1/m noise law, as a
/// total-variation distance. Must be exactly zero. `n ≤ 6`.
pub fn binning_distribution_check(n: u32, m: u32) -> Result<Rat> {
    binning_distribution_check_with(n, m, Exec::default())
}

/// [`binning_distribution_check`] on an explicit backend.
pub fn binning_distribution_check_with(n: u32, m: u32, exec: Exec) -> Result<Rat> {
    if n > MAX_BINNING_ENUM_DIM {
        return Err(Error::SizeCap {
            what: "binning process enumeration",
            limit: MAX_BINNING_ENUM_DIM,
            requested: n,
        });
    }
    if m < 1 || m > n {
        return Err(Error::InvalidParameter(format!(
            "bin count m={m} outside 1..=n ({n})"
        )));
    }
    let size = 1usize << n;
    let assignments = (m as usize).pow(n);
    // counts over (x, y) pairs; every process atom has equal probability
    let counts = exec::sum_histograms(exec, assignments, size * size, |ai, acc| {
        let mut bins = vec![0u32; n as usize];
        for_each_assignment(n, m, ai, &mut bins);
        let masks = bin_masks(n, m, &bins);
        for bin_signs in 0..1u32 << m {
            let bcast = broadcast_bin_signs(&masks, bin_signs);
            for z in 0..size as u32 {
                let x = compose_signs(n, z, bcast);
                for mask in &masks {
                    let y = x ^ mask;
                    acc[((x as usize) << n) | y as usize] += 1;
                }
            }
        }
    });
    let total: u128 =
        (assignments as u128) * (size as u128) * (1u128 << m) * (m as u128);
    let flip = rat(1, m as u64);
    let keep = Rat::one() - &flip;
    let mut tv = Rat::zero();
    for x in 0..size {
        for y in 0..size {
            let d = (x ^ y).count_ones();
            let direct = rat_pow2(BigInt::one(), n) * rat_pow(&flip, d) * rat_pow(&keep, n - d);
            let process = Rat::new(
                BigInt::from(counts[(x << n) | y]),
                BigInt::from(total),
            );
            let diff = direct - process;
            tv += if diff < Rat::zero() { -diff } else { diff };
        }
    }
    Ok(tv / rat(2, 1))
}

/// Induced composite over the `m` bin signs after steps (1)–(2):
/// `g(b) = f(b_{bin(1)}·z_1, …)` with weights `w'_j = Σ_{i∈bin j} w_i·z_i`.
/// Every term must be an LTF.
pub fn restricted_spec(
    spec: &CompositeSpec,
    bins: &[u32],
    m: u32,
    z: &HypercubePoint,
) -> Result<CompositeSpec> {
    let n = spec.n();
    if z.n() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: z.n(),
        });
    }
    if bins.len() != n as usize || bins.iter().any(|&b| b >= m) || m < 1 {
        return Err(Error::InvalidParameter(
            "bins must assign every coordinate to a bin below m".into(),
        ));
    }
    let terms = spec
        .terms()
        .iter()
        .map(|t| match t {
            Term::Ltf(f) => {
                let mut w = vec![0i64; m as usize];
                for (i, &wi) in f.weights().iter().enumerate() {
                    w[bins[i] as usize] += wi * z.sign(i as u32);
                }
                Ok(Term::Ltf(crate::boolfn::LinearThresholdFunction::new(
                    w,
                    f.threshold(),
                )))
            }
            Term::Table(_) => Err(Error::UnsupportedTerm),
        })
        .collect::<Result<Vec<_>>>()?;
    CompositeSpec::new(m, spec.combiner(), terms)
}

/// Truth table of the restriction, `m ≤ 22`.
pub fn restricted_function(
    spec: &CompositeSpec,
    bins: &[u32],
    m: u32,
    z: &HypercubePoint,
) -> Result<TruthTable> {
    if m > 22 {
        return Err(Error::SizeCap {
            what: "restricted function table",
            limit: 22,
            requested: m,
        });
    }
    restricted_spec(spec, bins, m, z)?.truth_table(Exec::default())
}

/// Exact check of `ns_{1/m}(f) = E_{bins,z}[as(g)] / m` by full enumeration
/// of bins and `z` (`n ≤ 6`). Returns `(lhs, rhs)`; equality is the caller's
/// assertion.
pub fn binned_ns_identity(spec: &CompositeSpec, m: u32) -> Result<(Rat, Rat)> {
    binned_ns_identity_with(spec, m, Exec::default())
}

/// [`binned_ns_identity`] on an explicit backend.
pub fn binned_ns_identity_with(spec: &CompositeSpec, m: u32, exec: Exec) -> Result<(Rat, Rat)> {
    let n = spec.n();
    if n > MAX_BINNING_ENUM_DIM {
        return Err(Error::SizeCap {
            what: "binned noise identity enumeration",
            limit: MAX_BINNING_ENUM_DIM,
            requested: n,
        });
    }
    if m < 1 || m > n {
        return Err(Error::InvalidParameter(format!(
            "bin count m={m} outside 1..=n ({n})"
        )));
    }
    let table = spec.truth_table(exec)?;
    let lhs = noise_sensitivity_exact_with(&table, &rat(1, m as u64), exec)?;

    let size = 1usize << n;
    let assignments = (m as usize).pow(n);
    let totals = exec::sum_histograms(exec, assignments, 1, |ai, acc| {
        let mut bins = vec![0u32; n as usize];
        for_each_assignment(n, m, ai, &mut bins);
        for z_bits in 0..size as u32 {
            let z = HypercubePoint::new(n, z_bits);
            let g = restricted_spec(spec, &bins, m, &z)
                .expect("LTF spec restricts")
                .truth_table(Exec::Sequential)
                .expect("m ≤ n ≤ 6");
            acc[0] += g.boundary_edges(Exec::Sequential) as u128;
        }
    });
    // E[as(g)] = ΣB / (m^n · 2^n · 2^{m−1}); the identity divides by m again
    let denom = BigInt::from(assignments) * (BigInt::one() << (n + m - 1) as usize)
        * BigInt::from(m);
    let rhs = Rat::new(BigInt::from(totals[0]), denom);
    Ok((lhs, rhs))
}

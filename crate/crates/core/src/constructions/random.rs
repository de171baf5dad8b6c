//! Random intersections and the tribes fixture.

use num::{BigInt, One, Zero};
use rand::Rng;

use crate::boolfn::{Combiner, CompositeSpec, LinearThresholdFunction, Term};
use crate::error::Error;
use crate::exec::{self, Exec};
use crate::rat::{rat_from_f64, Rat};
use crate::rng::stream_rng;
use crate::Result;

/// Weight distributions for random halfspaces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WeightDist {
    /// All weights 1.
    Unit,
    /// Independent uniform ±1.
    PlusMinusOne,
    /// Sum of 12 independent ±1/2-steps: integer, symmetric, range ±6.
    IntGaussian,
}

fn draw_weights<R: Rng>(rng: &mut R, n: u32, dist: WeightDist) -> Vec<i64> {
    loop {
        let w: Vec<i64> = (0..n)
            .map(|_| match dist {
                WeightDist::Unit => 1,
                WeightDist::PlusMinusOne => {
                    if rng.random::<bool>() {
                        1
                    } else {
                        -1
                    }
                }
                WeightDist::IntGaussian => {
                    (0..12).map(|_| rng.random::<bool>() as i64).sum::<i64>() - 6
                }
            })
            .collect();
        if w.iter().any(|&x| x != 0) {
            return w;
        }
    }
}

/// Largest integer `t` with `Pr(Σ w_i x_i > t) ≥ q` over uniform signs.
///
/// Exact counting DP up to `n = 64`; a floating probability DP above that
/// (still deterministic — the quantile choice only needs the central mass).
pub(crate) fn margin_tail_quantile(weights: &[i64], q: f64) -> i64 {
    let total: i64 = weights.iter().map(|w| w.abs()).sum();
    if total == 0 {
        return -1; // constant margin 0: keep f ≡ 1
    }
    let width = (2 * total + 1) as usize;
    let off = total;
    if weights.len() <= 64 {
        let mut dp = vec![0u128; width];
        dp[off as usize] = 1;
        let mut reach = 0i64;
        for &w in weights {
            let a = w.abs();
            if a == 0 {
                continue;
            }
            let mut next = vec![0u128; width];
            for v in -reach..=reach {
                let c = dp[(v + off) as usize];
                if c != 0 {
                    next[(v + a + off) as usize] += c;
                    next[(v - a + off) as usize] += c;
                }
            }
            dp = next;
            reach += a;
        }
        let zeros = weights.iter().filter(|w| **w == 0).count() as u32;
        let n_eff = weights.len() as u32 - zeros;
        // target = q·2^{n_eff} compared exactly (q is dyadic)
        let target = rat_from_f64(q) * Rat::from_integer(BigInt::one() << n_eff as usize);
        let mut acc = BigInt::zero();
        for v in (-total..=total).rev() {
            acc += BigInt::from(dp[(v + off) as usize]);
            if Rat::from_integer(acc.clone()) >= target {
                return v - 1;
            }
        }
        -total - 1
    } else {
        let mut dp = vec![0f64; width];
        dp[off as usize] = 1.0;
        let mut reach = 0i64;
        for &w in weights {
            let a = w.abs();
            if a == 0 {
                continue;
            }
            let mut next = vec![0f64; width];
            for v in -reach..=reach {
                let c = dp[(v + off) as usize];
                if c != 0.0 {
                    next[(v + a + off) as usize] += 0.5 * c;
                    next[(v - a + off) as usize] += 0.5 * c;
                }
            }
            dp = next;
            reach += a;
        }
        let mut acc = 0.0;
        for v in (-total..=total).rev() {
            acc += dp[(v + off) as usize];
            if acc >= q {
                return v - 1;
            }
        }
        -total - 1
    }
}

/// `k` random halfspaces AND-ed together. Each term keeps mass at least a
/// uniformly drawn point of `mass_band` (thresholds chosen by exact or
/// floating quantile of the margin distribution). `k = 0` gives the
/// constant-1 spec.
pub fn random_intersection(
    n: u32,
    k: u32,
    dist: WeightDist,
    mass_band: (f64, f64),
    seed: u64,
) -> Result<CompositeSpec> {
    let (lo, hi) = mass_band;
    if !(0.0 < lo && lo <= hi && hi < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "mass band ({lo}, {hi}) must satisfy 0 < lo ≤ hi < 1"
        )));
    }
    let terms: Vec<Term> = exec::map_collect(Exec::default(), k as usize, |t| {
        let mut rng = stream_rng(seed, t as u64);
        let w = draw_weights(&mut rng, n, dist);
        let q = if lo == hi {
            lo
        } else {
            rng.random_range(lo..hi)
        };
        let theta = margin_tail_quantile(&w, q);
        Term::Ltf(LinearThresholdFunction::new(w, theta))
    });
    CompositeSpec::new(n, Combiner::And, terms)
}

/// The tribes fixture: an OR of `terms` disjoint width-`width` ANDs, each AND
/// written as the halfspace `1[Σ_block x_i > width−1]`. Unate, not a
/// halfspace intersection in disguise of small sensitivity: its noise
/// sensitivity stays bounded away from 0 at ε ~ 1/log n, which is what the
/// negative-control tests pin down.
pub fn tribes(width: u32, terms: u32) -> Result<CompositeSpec> {
    let n = width
        .checked_mul(terms)
        .filter(|&n| (1..=30).contains(&n))
        .ok_or_else(|| Error::InvalidParameter("tribes: width·terms must be in 1..=30".into()))?;
    if width == 0 || terms == 0 {
        return Err(Error::InvalidParameter(
            "tribes: width and terms must be ≥ 1".into(),
        ));
    }
    let ltfs = (0..terms)
        .map(|t| {
            let mut w = vec![0i64; n as usize];
            for i in 0..width {
                w[(t * width + i) as usize] = 1;
            }
            LinearThresholdFunction::new(w, width as i64 - 1)
        })
        .collect();
    CompositeSpec::union(n, ltfs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolfn::HypercubePoint;
    use crate::rat::rat;

    #[test]
    fn empty_intersection_is_constant_one() {
        let spec = random_intersection(5, 0, WeightDist::Unit, (0.4, 0.6), 1).unwrap();
        let t = spec.truth_table(Exec::Sequential).unwrap();
        assert_eq!(t.ones(), 32);
    }

    #[test]
    fn unit_single_term_is_a_threshold_function() {
        let spec = random_intersection(9, 1, WeightDist::Unit, (0.3, 0.3), 5).unwrap();
        let f = spec.terms()[0].as_ltf().unwrap();
        assert!(f.weights().iter().all(|&w| w == 1));
        let mean = spec.truth_table(Exec::Sequential).unwrap().mean();
        assert!(mean >= rat(3, 10), "mass {mean} below the band");
    }

    #[test]
    fn same_seed_same_spec() {
        let a = random_intersection(14, 6, WeightDist::IntGaussian, (0.6, 0.9), 42).unwrap();
        let b = random_intersection(14, 6, WeightDist::IntGaussian, (0.6, 0.9), 42).unwrap();
        assert_eq!(a, b);
        let c = random_intersection(14, 6, WeightDist::IntGaussian, (0.6, 0.9), 43).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn quantile_matches_enumeration() {
        let w = vec![2i64, -1, 3, 1, -2];
        for q in [0.1, 0.25, 0.5, 0.8] {
            let theta = margin_tail_quantile(&w, q);
            let count_above = |t: i64| -> u32 {
                (0..32u32)
                    .filter(|&bits| {
                        let f = LinearThresholdFunction::new(w.clone(), t);
                        f.eval(&HypercubePoint::new(5, bits))
                    })
                    .count() as u32
            };
            assert!(count_above(theta) as f64 / 32.0 >= q);
            if theta + 1 <= w.iter().map(|x| x.abs()).sum::<i64>() {
                assert!((count_above(theta + 1) as f64) / 32.0 < q);
            }
        }
    }

    #[test]
    fn tribes_is_or_of_block_ands() {
        let spec = tribes(2, 4).unwrap();
        assert_eq!(spec.n(), 8);
        assert_eq!(spec.k(), 4);
        let t = spec.truth_table(Exec::Sequential).unwrap();
        // E[tribes(2,4)] = 1 − (3/4)^4 = 175/256
        assert_eq!(t.mean(), rat(175, 256));
        // value at a point: some block all-plus
        for bits in 0..256u32 {
            let expect = (0..4).any(|b| bits >> (2 * b) & 0b11 == 0b11);
            assert_eq!(t.get(bits), expect);
        }
    }
}

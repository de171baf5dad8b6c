//! Monte Carlo sensitivity estimators with streaming evaluation.
//!
//! Specs are evaluated directly from per-term margins, never through a
//! materialized table, so any dimension a `CompositeSpec` of LTFs can carry
//! (up to 10^6 coordinates) is fair game. Each sample owns one ChaCha8
//! substream indexed by its sample number, so estimates are bit-identical for
//! any worker count, and flipping a coordinate updates a term margin in O(1).

use rand::Rng;

use crate::boolfn::{Combiner, CompositeSpec, Term};
use crate::error::Error;
use crate::exec::{self, Exec};
use crate::rng::{random_word_point, stream_rng};
use crate::Result;

/// How the average-sensitivity estimator spends its per-sample budget.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AsMcMode {
    /// Evaluate all `n` neighbors of each sampled point.
    FullScan,
    /// Evaluate one uniformly chosen direction and scale by `n`.
    SampledDirection,
}

impl AsMcMode {
    pub fn label(self) -> &'static str {
        match self {
            AsMcMode::FullScan => "full-scan",
            AsMcMode::SampledDirection => "sampled-direction",
        }
    }
}

/// A seeded, reproducible Monte Carlo estimate.
#[derive(Debug, Clone, PartialEq)]
pub struct MonteCarloEstimate {
    pub estimate: f64,
    pub stderr: f64,
    pub samples: u64,
    pub seed: u64,
    /// Which sampling scheme produced the estimate.
    pub mode: &'static str,
}

/// Per-term margins of a composite at one streamed point.
struct Margins(Vec<i64>);

fn margins_at(spec: &CompositeSpec, words: &[u64]) -> Margins {
    Margins(
        spec.terms()
            .iter()
            .map(|t| match t {
                Term::Ltf(f) => f.margin_words(words),
                Term::Table(_) => 0,
            })
            .collect(),
    )
}

#[inline]
fn coord_sign(words: &[u64], i: u32) -> i64 {
    if words[(i >> 6) as usize] >> (i & 63) & 1 == 1 {
        1
    } else {
        -1
    }
}

/// Spec value given current margins; `flip_mask` lists coordinates whose sign
/// must be treated as flipped relative to `words`.
fn spec_value(spec: &CompositeSpec, words: &[u64], margins: &Margins, flips: &[u32]) -> bool {
    let eval_term = |ti: usize, term: &Term| -> bool {
        match term {
            Term::Ltf(f) => {
                let mut m = margins.0[ti];
                for &i in flips {
                    m -= 2 * coord_sign(words, i) * f.weights()[i as usize];
                }
                m > f.threshold()
            }
            Term::Table(t) => {
                let mut bits = words[0] as u32;
                for &i in flips {
                    bits ^= 1 << i;
                }
                t.get(bits)
            }
        }
    };
    match spec.combiner() {
        Combiner::And => spec.terms().iter().enumerate().all(|(ti, t)| eval_term(ti, t)),
        Combiner::Or => spec.terms().iter().enumerate().any(|(ti, t)| eval_term(ti, t)),
    }
}

#[derive(Default, Clone, Copy)]
struct Acc {
    sum: u128,
    sum_sq: u128,
    count: u64,
}

impl Acc {
    fn of(v: u64) -> Acc {
        Acc {
            sum: v as u128,
            sum_sq: (v as u128) * (v as u128),
            count: 1,
        }
    }

    fn finish(self, seed: u64, mode: &'static str) -> MonteCarloEstimate {
        let s = self.count as f64;
        let mean = self.sum as f64 / s;
        let stderr = if self.count > 1 {
            let var = (self.sum_sq as f64 - (self.sum as f64) * (self.sum as f64) / s)
                / (s - 1.0);
            (var.max(0.0) / s).sqrt()
        } else {
            0.0
        };
        MonteCarloEstimate {
            estimate: mean,
            stderr,
            samples: self.count,
            seed,
            mode,
        }
    }
}

impl std::iter::Sum for Acc {
    fn sum<I: Iterator<Item = Acc>>(iter: I) -> Acc {
        iter.fold(Acc::default(), |a, b| Acc {
            sum: a.sum + b.sum,
            sum_sq: a.sum_sq + b.sum_sq,
            count: a.count + b.count,
        })
    }
}

fn check_samples(samples: u64) -> Result<()> {
    if samples == 0 {
        return Err(Error::InvalidParameter("samples must be ≥ 1".into()));
    }
    Ok(())
}

/// Unbiased Monte Carlo estimate of `as(f) = E_x[#{i : f(x) ≠ f(x^i)}]`.
pub fn average_sensitivity_mc(
    spec: &CompositeSpec,
    samples: u64,
    seed: u64,
    mode: AsMcMode,
) -> Result<MonteCarloEstimate> {
    average_sensitivity_mc_with(spec, samples, seed, mode, Exec::default())
}

/// [`average_sensitivity_mc`] on an explicit backend.
pub fn average_sensitivity_mc_with(
    spec: &CompositeSpec,
    samples: u64,
    seed: u64,
    mode: AsMcMode,
    exec: Exec,
) -> Result<MonteCarloEstimate> {
    check_samples(samples)?;
    let n = spec.n() as usize;
    let acc: Acc = exec::sum_indexed(exec, samples as usize, |s| {
        let mut rng = stream_rng(seed, s as u64);
        let mut words = Vec::new();
        random_word_point(&mut rng, n, &mut words);
        let margins = margins_at(spec, &words);
        let here = spec_value(spec, &words, &margins, &[]);
        let v = match mode {
            AsMcMode::FullScan => (0..n as u32)
                .filter(|&i| spec_value(spec, &words, &margins, &[i]) != here)
                .count() as u64,
            AsMcMode::SampledDirection => {
                let i = rng.random_range(0..n as u32);
                if spec_value(spec, &words, &margins, &[i]) != here {
                    n as u64
                } else {
                    0
                }
            }
        };
        Acc::of(v)
    });
    Ok(acc.finish(seed, mode.label()))
}

/// Monte Carlo estimate of `ns_ε(f)`: frequency of `f(x) ≠ f(y)` over
/// correlated pairs, each coordinate of `y` flipped independently with
/// probability `ε`.
pub fn noise_sensitivity_mc(
    spec: &CompositeSpec,
    eps: f64,
    samples: u64,
    seed: u64,
) -> Result<MonteCarloEstimate> {
    noise_sensitivity_mc_with(spec, eps, samples, seed, Exec::default())
}

/// [`noise_sensitivity_mc`] on an explicit backend.
pub fn noise_sensitivity_mc_with(
    spec: &CompositeSpec,
    eps: f64,
    samples: u64,
    seed: u64,
    exec: Exec,
) -> Result<MonteCarloEstimate> {
    check_samples(samples)?;
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "noise rate eps={eps} outside (0,1)"
        )));
    }
    let n = spec.n() as usize;
    let acc: Acc = exec::sum_indexed(exec, samples as usize, |s| {
        let mut rng = stream_rng(seed, s as u64);
        let mut words = Vec::new();
        random_word_point(&mut rng, n, &mut words);
        let margins = margins_at(spec, &words);
        let flips: Vec<u32> = (0..n as u32)
            .filter(|_| rng.random::<f64>() < eps)
            .collect();
        let here = spec_value(spec, &words, &margins, &[]);
        let there = spec_value(spec, &words, &margins, &flips);
        Acc::of((here != there) as u64)
    });
    Ok(acc.finish(seed, "correlated-pair"))
}

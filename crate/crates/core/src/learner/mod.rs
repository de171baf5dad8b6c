//! Agnostic learning of halfspace intersections by degree-bounded L1
//! polynomial regression over parity features.
//!
//! The pipeline: pick a degree `d = ⌈C·ln(k)/ε²⌉` (capped at `n`), regress
//! the 0/1 labels onto all parities `χ_S` with `|S| ≤ d` under total L1 loss,
//! and round the fitted polynomial at 1/2. The spectral tail bound that makes
//! this sound for halfspace intersections is verified exactly by the
//! acceptance suite; this module is the algorithmic half.

mod l1;

pub use l1::{SOLVER_METHOD, SOLVER_TOLERANCE};

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::boolfn::HypercubePoint;
use crate::error::Error;
use crate::exec::Exec;
use crate::rng::{mix_seed, random_point, stream_rng};
use crate::Result;

/// One uniform-input example.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LabeledSample {
    pub x: HypercubePoint,
    pub label: bool,
}

/// Resource guardrails for the regression.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegressionLimits {
    /// Cap on the number of parity features `Σ_{j≤d} C(n,j)`.
    pub max_features: usize,
    /// Cap on the dense design size `features × samples`.
    pub max_cells: u64,
}

impl Default for RegressionLimits {
    fn default() -> Self {
        RegressionLimits {
            max_features: 200_000,
            max_cells: 50_000_000,
        }
    }
}

/// `d = ⌈C·ln(k)/ε²⌉` (the caller caps at `n`). Requires `k ≥ 2`,
/// `ε ∈ (0, 1]`, `C > 0`.
pub fn degree_for(k: u32, eps: f64, c: f64) -> Result<u32> {
    if k < 2 {
        return Err(Error::InvalidParameter(format!("degree_for needs k ≥ 2, got {k}")));
    }
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "degree_for needs eps in (0,1], got {eps}"
        )));
    }
    if !(c > 0.0) {
        return Err(Error::InvalidParameter(format!("degree_for needs C > 0, got {c}")));
    }
    Ok((c * (k as f64).ln() / (eps * eps)).ceil() as u32)
}

/// All subset masks of `[n]` with `|S| ≤ d`, in increasing mask order.
pub fn feature_masks(n: u32, d: u32) -> Vec<u32> {
    let mut masks: Vec<u32> = Vec::new();
    // enumerate by combinations to avoid scanning all 2^n indices
    fn rec(masks: &mut Vec<u32>, n: u32, start: u32, left: u32, acc: u32) {
        masks.push(acc);
        if left == 0 {
            return;
        }
        for i in start..n {
            rec(masks, n, i + 1, left - 1, acc | (1 << i));
        }
    }
    rec(&mut masks, n, 0, d.min(n), 0);
    masks.sort_unstable();
    masks.dedup();
    masks
}

/// `χ_S(x)` for every mask in `masks`, as ±1 floats.
pub fn parity_features(x: &HypercubePoint, masks: &[u32]) -> Vec<f64> {
    masks.iter().map(|&s| chi(s, x.bits(), x.n())).collect()
}

#[inline]
fn chi(mask: u32, bits: u32, n: u32) -> f64 {
    // χ_S(x) = (−1)^{#(i ∈ S with x_i = −1)}
    let minus = (mask & !bits & HypercubePoint::index_mask(n)).count_ones();
    if minus % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Fitted low-degree polynomial `p(x) = Σ_S c_S·χ_S(x)`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LowDegreePolynomial {
    pub n: u32,
    pub degree: u32,
    /// `(mask, coefficient)` in increasing mask order; all masks with
    /// `|S| ≤ degree` are present.
    pub terms: Vec<(u32, f64)>,
    /// Solver identification recorded with the model.
    pub method: String,
    pub tolerance: f64,
    /// Total training L1 loss `Σ_j |p(x_j) − y_j|`.
    pub loss: f64,
}

impl LowDegreePolynomial {
    pub fn eval(&self, x: &HypercubePoint) -> f64 {
        assert_eq!(x.n(), self.n, "dimension mismatch");
        self.terms
            .iter()
            .map(|&(mask, coeff)| coeff * chi(mask, x.bits(), self.n))
            .sum()
    }
}

/// Deterministic 0/1 predictor: `h(x) = 1 ⇔ p(x) ≥ 1/2`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Hypothesis {
    pub poly: LowDegreePolynomial,
}

impl Hypothesis {
    pub fn predict(&self, x: &HypercubePoint) -> bool {
        self.poly.eval(x) >= 0.5
    }
}

/// Minimize total L1 loss `Σ_j |p(x_j) − label_j|` over polynomials of degree
/// ≤ `d`. The solution is within the recorded solver tolerance of optimal.
pub fn l1_regress(
    samples: &[LabeledSample],
    n: u32,
    d: u32,
    limits: &RegressionLimits,
) -> Result<LowDegreePolynomial> {
    l1_regress_with(samples, n, d, limits, Exec::default())
}

/// [`l1_regress`] on an explicit backend.
pub fn l1_regress_with(
    samples: &[LabeledSample],
    n: u32,
    d: u32,
    limits: &RegressionLimits,
    exec: Exec,
) -> Result<LowDegreePolynomial> {
    if samples.is_empty() {
        return Err(Error::InvalidParameter("empty sample set".into()));
    }
    let masks = feature_masks(n, d);
    if masks.len() > limits.max_features {
        return Err(Error::InvalidParameter(format!(
            "{} parity features exceed the configured cap {}",
            masks.len(),
            limits.max_features
        )));
    }
    let cells = masks.len() as u64 * samples.len() as u64;
    if cells > limits.max_cells {
        return Err(Error::InvalidParameter(format!(
            "design of {} features × {} samples = {cells} cells exceeds the configured cap {}",
            masks.len(),
            samples.len(),
            limits.max_cells
        )));
    }
    let s_dim = samples.len();
    let f_dim = masks.len();
    let mut x = DMatrix::<f64>::zeros(s_dim, f_dim);
    for (i, sample) in samples.iter().enumerate() {
        for (j, &mask) in masks.iter().enumerate() {
            x[(i, j)] = chi(mask, sample.x.bits(), n);
        }
    }
    let y = DVector::from_iterator(s_dim, samples.iter().map(|s| s.label as u8 as f64));
    let sol = l1::solve_lad(&x, &y, exec)?;
    Ok(LowDegreePolynomial {
        n,
        degree: d,
        terms: masks.into_iter().zip(sol.coeffs).collect(),
        method: SOLVER_METHOD.to_string(),
        tolerance: SOLVER_TOLERANCE,
        loss: sol.loss,
    })
}

/// Where training examples come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrainingSet {
    /// Every point of the cube, labeled exactly.
    FullCube,
    /// `count` i.i.d. uniform samples.
    Samples(u64),
    /// The default budget `feature_count·⌈8/ε²⌉` (an engineering default,
    /// not a derived bound).
    DefaultSamples,
}

/// Outcome of one learning run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LearnReport {
    pub n: u32,
    pub k: u32,
    pub eps: f64,
    pub degree_const: f64,
    pub degree: u32,
    pub features: usize,
    pub samples: u64,
    /// Mean per-example training L1 loss.
    pub train_loss_mean: f64,
    /// Training disagreement of the rounded hypothesis.
    pub train_error: f64,
    /// Held-out disagreement `Pr[h(x) ≠ label(x)]`: exact over the cube for
    /// full-cube training, a fresh sample batch otherwise.
    pub holdout_error: f64,
    pub holdout_exact: bool,
    pub seed: u64,
}

/// The default sampled-training budget.
pub fn default_sample_count(features: usize, eps: f64) -> u64 {
    features as u64 * (8.0 / (eps * eps)).ceil() as u64
}

/// Learn a hypothesis for arbitrary labels under the uniform distribution:
/// degree from `(k, ε, C)`, fit by L1 regression, round at 1/2, report
/// training and held-out error. `k = 1` is treated as `k = 2` for the log.
#[allow(clippy::too_many_arguments)]
pub fn agnostic_learn<F>(
    label_fn: F,
    n: u32,
    k: u32,
    eps: f64,
    degree_const: f64,
    training: TrainingSet,
    seed: u64,
    limits: &RegressionLimits,
) -> Result<(Hypothesis, LearnReport)>
where
    F: Fn(&HypercubePoint) -> bool + Sync,
{
    let d = degree_for(k.max(2), eps, degree_const)?.min(n);
    let features = feature_masks(n, d).len();
    let sample_count = match training {
        TrainingSet::FullCube => 1u64 << n,
        TrainingSet::Samples(c) => c,
        TrainingSet::DefaultSamples => default_sample_count(features, eps),
    };
    if sample_count == 0 {
        return Err(Error::InvalidParameter("empty sample set".into()));
    }
    let train: Vec<LabeledSample> = match training {
        TrainingSet::FullCube => HypercubePoint::iter_all(n)
            .map(|x| LabeledSample {
                x,
                label: label_fn(&x),
            })
            .collect(),
        _ => {
            let mut rng = stream_rng(seed, 0);
            (0..sample_count)
                .map(|_| {
                    let x = random_point(&mut rng, n);
                    LabeledSample {
                        x,
                        label: label_fn(&x),
                    }
                })
                .collect()
        }
    };
    let poly = l1_regress(&train, n, d, limits)?;
    let hyp = Hypothesis { poly };

    let train_error = train
        .iter()
        .filter(|s| hyp.predict(&s.x) != s.label)
        .count() as f64
        / train.len() as f64;

    let (holdout_error, holdout_exact) = match training {
        TrainingSet::FullCube => (
            HypercubePoint::iter_all(n)
                .filter(|x| hyp.predict(x) != label_fn(x))
                .count() as f64
                / (1u64 << n) as f64,
            true,
        ),
        _ => {
            let mut rng = stream_rng(mix_seed(seed, 0x686f_6c64), 0);
            let misses = (0..sample_count)
                .filter(|_| {
                    let x = random_point(&mut rng, n);
                    hyp.predict(&x) != label_fn(&x)
                })
                .count();
            (misses as f64 / sample_count as f64, false)
        }
    };

    let report = LearnReport {
        n,
        k,
        eps,
        degree_const,
        degree: d,
        features,
        samples: sample_count,
        train_loss_mean: hyp.poly.loss / train.len() as f64,
        train_error,
        holdout_error,
        holdout_exact,
        seed,
    };
    Ok((hyp, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolfn::{CompositeSpec, LinearThresholdFunction, TruthTable};

    #[test]
    fn degree_examples() {
        assert_eq!(degree_for(2, 1.0, 1.0).unwrap(), 1);
        assert!(degree_for(2, 1.0, 0.0).is_err());
        // ⌈2·ln(4)·4⌉ = ⌈11.09⌉ = 12
        assert_eq!(degree_for(4, 0.5, 2.0).unwrap(), 12);
    }

    #[test]
    fn feature_mask_order() {
        assert_eq!(feature_masks(2, 0), vec![0]);
        assert_eq!(feature_masks(2, 2), vec![0b00, 0b01, 0b10, 0b11]);
        assert_eq!(feature_masks(4, 1), vec![0, 1, 2, 4, 8]);
        // Σ_{j≤2} C(5,j) = 1 + 5 + 10
        assert_eq!(feature_masks(5, 2).len(), 16);
    }

    #[test]
    fn parity_feature_examples() {
        let masks = feature_masks(2, 2);
        let x = HypercubePoint::from_signs(&[1, -1]).unwrap();
        assert_eq!(parity_features(&x, &masks), vec![1.0, 1.0, -1.0, -1.0]);
        let all = HypercubePoint::all_plus(3);
        let masks3 = feature_masks(3, 2);
        assert!(parity_features(&all, &masks3).iter().all(|&v| v == 1.0));
        assert_eq!(parity_features(&all, &feature_masks(3, 0)), vec![1.0]);
    }

    fn full_cube_samples(t: &TruthTable) -> Vec<LabeledSample> {
        HypercubePoint::iter_all(t.n())
            .map(|x| LabeledSample {
                x,
                label: t.eval(&x),
            })
            .collect()
    }

    #[test]
    fn zero_labels_fit_zero_polynomial() {
        let t = TruthTable::constant(4, false);
        let p = l1_regress(&full_cube_samples(&t), 4, 1, &RegressionLimits::default()).unwrap();
        assert!(p.loss < 1e-6);
        for &(_, c) in &p.terms {
            assert!(c.abs() < 1e-6);
        }
    }

    #[test]
    fn dictator_interpolates_exactly_at_degree_one() {
        let t = TruthTable::dictator(4, 0);
        let p = l1_regress(&full_cube_samples(&t), 4, 1, &RegressionLimits::default()).unwrap();
        assert!(p.loss < 1e-6, "loss {}", p.loss);
        let coeff = |mask: u32| p.terms.iter().find(|(m, _)| *m == mask).unwrap().1;
        assert!((coeff(0) - 0.5).abs() < 1e-5);
        assert!((coeff(1) - 0.5).abs() < 1e-5);
    }

    #[test]
    fn parity_labels_leave_half_loss() {
        // parity is orthogonal to every degree-1 polynomial: best total L1
        // loss over the full cube is 2^{n−1}
        let n = 4u32;
        let t = TruthTable::parity(n);
        let p = l1_regress(&full_cube_samples(&t), n, 1, &RegressionLimits::default()).unwrap();
        assert!((p.loss - (1 << (n - 1)) as f64).abs() < 1e-5, "loss {}", p.loss);
    }

    #[test]
    fn caps_are_enforced() {
        let t = TruthTable::constant(10, false);
        let samples = full_cube_samples(&t);
        let tight = RegressionLimits {
            max_features: 5,
            max_cells: u64::MAX,
        };
        assert!(l1_regress(&samples, 10, 2, &tight).is_err());
        let tight = RegressionLimits {
            max_features: usize::MAX,
            max_cells: 100,
        };
        assert!(l1_regress(&samples, 10, 2, &tight).is_err());
    }

    #[test]
    fn learns_a_single_halfspace_on_the_cube() {
        let f = LinearThresholdFunction::new(vec![2, -1, 1, 1, -2, 1, 1, -1, 2, 1], 1);
        let spec = CompositeSpec::intersection(10, vec![f]).unwrap();
        let (_h, report) = agnostic_learn(
            |x| spec.eval(x),
            10,
            1,
            0.2,
            0.25,
            TrainingSet::FullCube,
            7,
            &RegressionLimits::default(),
        )
        .unwrap();
        assert!(report.holdout_exact);
        assert!(
            report.holdout_error <= 0.2,
            "held-out error {}",
            report.holdout_error
        );
    }

    #[test]
    fn adversarial_parity_reports_half_error() {
        let t = TruthTable::parity(8);
        let (_h, report) = agnostic_learn(
            |x| t.eval(x),
            8,
            2,
            0.5,
            0.5,
            TrainingSet::FullCube,
            3,
            &RegressionLimits::default(),
        )
        .unwrap();
        assert!(
            (report.holdout_error - 0.5).abs() <= 0.05,
            "error {}",
            report.holdout_error
        );
    }

    #[test]
    fn sampled_training_two_halfspaces() {
        let f1 = LinearThresholdFunction::unit(12, -2);
        let f2 = LinearThresholdFunction::new(
            vec![1, -1, 1, 1, -1, 1, 1, 1, -1, 1, 1, 1],
            -2,
        );
        let spec = CompositeSpec::intersection(12, vec![f1, f2]).unwrap();
        let (_h, report) = agnostic_learn(
            |x| spec.eval(x),
            12,
            2,
            0.25,
            0.2,
            TrainingSet::Samples(10_000),
            11,
            &RegressionLimits::default(),
        )
        .unwrap();
        assert!(
            report.holdout_error <= 0.25 + 0.05,
            "held-out error {}",
            report.holdout_error
        );
    }
}

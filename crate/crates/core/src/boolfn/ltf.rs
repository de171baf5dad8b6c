//! Linear threshold functions (halfspace indicators).
//!
//! `f(x) = 1 ⇔ Σ_i w_i·x_i > θ` with integer weights and a strict comparison,
//! so ties cannot occur and no rounding ever enters the exact paths. Any
//! halfspace over `{±1}^n` with real weights is realized by some integer
//! weight vector, so nothing is lost.

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::exec::{self, Exec};
use crate::Result;

use super::orientation::{CoordOrientation, Orientation};
use super::point::{HypercubePoint, SignVector};
use super::table::{TruthTable, MAX_TABLE_DIM};

/// Halfspace indicator `1[Σ w_i x_i > θ]` with integer weights.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LinearThresholdFunction {
    weights: Vec<i64>,
    threshold: i64,
}

impl LinearThresholdFunction {
    /// Construct from weights and a strict threshold.
    pub fn new(weights: Vec<i64>, threshold: i64) -> Self {
        assert!(!weights.is_empty(), "LTF needs at least one coordinate");
        LinearThresholdFunction { weights, threshold }
    }

    /// Unit-weight threshold function `1[Σ x_i > θ]`.
    pub fn unit(n: u32, threshold: i64) -> Self {
        Self::new(vec![1; n as usize], threshold)
    }

    /// The constant-1 function as an LTF (`0 > −1`).
    pub fn constant_one(n: u32) -> Self {
        Self::new(vec![0; n as usize], -1)
    }

    #[inline]
    pub fn n(&self) -> u32 {
        self.weights.len() as u32
    }

    pub fn weights(&self) -> &[i64] {
        &self.weights
    }

    pub fn threshold(&self) -> i64 {
        self.threshold
    }

    /// `Σ w_i x_i` at a packed point.
    #[inline]
    pub fn margin(&self, bits: u32) -> i64 {
        let mut s = 0i64;
        for (i, &w) in self.weights.iter().enumerate() {
            if bits >> i & 1 == 1 {
                s += w;
            } else {
                s -= w;
            }
        }
        s
    }

    /// Evaluate at a point.
    #[inline]
    pub fn eval(&self, x: &HypercubePoint) -> bool {
        assert_eq!(
            x.n(),
            self.n(),
            "point dimension {} does not match LTF dimension {}",
            x.n(),
            self.n()
        );
        self.margin(x.bits()) > self.threshold
    }

    /// `Σ w_i x_i` for a word-packed point of arbitrary dimension
    /// (bit set ⇔ `+1`). Used by the streaming Monte Carlo paths.
    pub fn margin_words(&self, words: &[u64]) -> i64 {
        debug_assert!(words.len() * 64 >= self.weights.len());
        let mut s = 0i64;
        for (i, &w) in self.weights.iter().enumerate() {
            if words[i >> 6] >> (i & 63) & 1 == 1 {
                s += w;
            } else {
                s -= w;
            }
        }
        s
    }

    /// Evaluate on a word-packed point.
    pub fn eval_words(&self, words: &[u64]) -> bool {
        self.margin_words(words) > self.threshold
    }

    /// The sign-relabeled function `f_s(x) = f(s_1 x_1, …, s_n x_n)`:
    /// weights become `s_i·w_i`, the threshold is unchanged. Mean and average
    /// sensitivity are invariant under this relabeling.
    pub fn flip_signs(&self, s: &SignVector) -> Result<Self> {
        if s.n() != self.n() {
            return Err(Error::DimensionMismatch {
                expected: self.n(),
                found: s.n(),
            });
        }
        let weights = self
            .weights
            .iter()
            .enumerate()
            .map(|(i, &w)| s.sign(i as u32) * w)
            .collect();
        Ok(LinearThresholdFunction {
            weights,
            threshold: self.threshold,
        })
    }

    /// The complement `1 − f` as an LTF:
    /// `1 − 1[s > θ] = 1[−s > −θ−1]` over integers.
    pub fn complement(&self) -> Self {
        LinearThresholdFunction {
            weights: self.weights.iter().map(|w| -w).collect(),
            threshold: -self.threshold - 1,
        }
    }

    /// Orientation read off the weight signs: `w_i > 0` increasing, `w_i < 0`
    /// decreasing, `w_i = 0` constant. (The truth-table scan may report
    /// `Constant` for a coordinate with nonzero weight that is never pivotal;
    /// the two views are consistent but not always identical.)
    pub fn orientation(&self) -> Orientation {
        Orientation::new(
            self.weights
                .iter()
                .map(|&w| match w.cmp(&0) {
                    std::cmp::Ordering::Greater => CoordOrientation::Increasing,
                    std::cmp::Ordering::Less => CoordOrientation::Decreasing,
                    std::cmp::Ordering::Equal => CoordOrientation::Constant,
                })
                .collect(),
        )
    }

    /// Materialize the truth table (`n ≤ 30`).
    ///
    /// Each 64-index chunk seeds the margin once and then walks indices in
    /// order, updating the margin by the flipped coordinates of each binary
    /// increment — amortized O(1) per point.
    pub fn truth_table(&self, exec: Exec) -> Result<TruthTable> {
        let n = self.n();
        if n > MAX_TABLE_DIM {
            return Err(Error::SizeCap {
                what: "LTF truth table",
                limit: MAX_TABLE_DIM,
                requested: n,
            });
        }
        let size = 1u64 << n;
        let mut words = vec![0u64; TruthTable::word_len(n)];
        let theta = self.threshold;
        let weights = &self.weights;
        exec::fill_chunks(exec, &mut words, 64, |ci, chunk| {
            for (k, out) in chunk.iter_mut().enumerate() {
                let base = ((ci * 64 + k) as u64) << 6;
                if base >= size {
                    break;
                }
                let hi = 64.min(size - base) as u32;
                let mut margin = self.margin(base as u32);
                let mut acc = 0u64;
                if margin > theta {
                    acc |= 1;
                }
                for j in 1..hi {
                    // moving from index b−1 to b flips exactly the bits of (b−1)^b
                    let idx = base as u32 + j;
                    let mut flipped = (idx - 1) ^ idx;
                    while flipped != 0 {
                        let i = flipped.trailing_zeros();
                        // bit i goes 0→1 except the lowest carry chain bits go 1→0
                        if idx >> i & 1 == 1 {
                            margin += 2 * weights[i as usize];
                        } else {
                            margin -= 2 * weights[i as usize];
                        }
                        flipped &= flipped - 1;
                    }
                    if margin > theta {
                        acc |= 1 << j;
                    }
                }
                *out = acc;
            }
        });
        Ok(TruthTable::from_words(n, words))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dictator_on_first_coordinate() {
        let f = LinearThresholdFunction::new(vec![1, 0, 0], 0);
        let x = HypercubePoint::from_signs(&[1, -1, -1]).unwrap();
        assert!(f.eval(&x));
        assert!(!f.eval(&x.flip(0)));
    }

    #[test]
    fn strict_majority_of_three() {
        // 1[Σ x_i > 2] holds only at the all-plus point
        let f = LinearThresholdFunction::new(vec![1, 1, 1], 2);
        for x in HypercubePoint::iter_all(3) {
            assert_eq!(f.eval(&x), x.bits() == 0b111);
        }
    }

    #[test]
    fn table_matches_pointwise_eval() {
        let f = LinearThresholdFunction::new(vec![3, -2, 5, -1, 2, 1, -4, 2, 1, -1, 3, 1], 1);
        let t = f.truth_table(Exec::default()).unwrap();
        for x in HypercubePoint::iter_all(12) {
            assert_eq!(t.eval(&x), f.eval(&x), "mismatch at {x}");
        }
    }

    #[test]
    fn maj3_table() {
        let f = LinearThresholdFunction::unit(3, 0);
        let t = f.truth_table(Exec::Sequential).unwrap();
        // 1 exactly on the four points with at least two +1 coordinates
        let expect = [false, false, false, true, false, true, true, true];
        for (bits, &e) in expect.iter().enumerate() {
            assert_eq!(t.get(bits as u32), e);
        }
    }

    #[test]
    fn complement_is_pointwise_negation() {
        let f = LinearThresholdFunction::new(vec![2, -3, 1, 1], -1);
        let g = f.complement();
        for x in HypercubePoint::iter_all(4) {
            assert_eq!(f.eval(&x), !g.eval(&x));
        }
    }

    #[test]
    fn flip_signs_identity_and_dictator() {
        let f = LinearThresholdFunction::new(vec![1, 0, 0], 0);
        let id = SignVector::all_plus(3);
        assert_eq!(f.flip_signs(&id).unwrap(), f);
        let s = SignVector::from_signs(&[-1, 1, 1]).unwrap();
        let g = f.flip_signs(&s).unwrap();
        assert_eq!(g.weights(), &[-1, 0, 0]);
        let x = HypercubePoint::from_signs(&[-1, 1, 1]).unwrap();
        assert!(g.eval(&x)); // dictator on −x_1
    }

    #[test]
    fn margin_words_agrees_with_packed() {
        let f = LinearThresholdFunction::new(vec![3, -2, 5, -1, 2, 1, -4], 0);
        for x in HypercubePoint::iter_all(7) {
            let words = [x.bits() as u64];
            assert_eq!(f.margin_words(&words), f.margin(x.bits()));
        }
    }
}

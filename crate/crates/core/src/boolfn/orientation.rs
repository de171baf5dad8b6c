//! Unateness analysis.
//!
//! A function is unate when every coordinate is (weakly) monotone in one
//! direction. [`orientation`] classifies each coordinate by a truth-table
//! scan; [`normalize_increasing`] relabels inputs so that a unate function
//! becomes increasing in every coordinate, returning the sign vector used.

use crate::error::Error;
use crate::Result;

use super::point::{HypercubePoint, SignVector};
use super::table::TruthTable;

/// Monotonicity class of a single coordinate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoordOrientation {
    /// Never decreases, strictly increases somewhere.
    Increasing,
    /// Never increases, strictly decreases somewhere.
    Decreasing,
    /// The function does not depend on the coordinate.
    Constant,
    /// Both strict directions occur.
    Mixed,
}

/// Per-coordinate monotonicity of a Boolean function.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Orientation {
    coords: Vec<CoordOrientation>,
}

impl Orientation {
    pub(crate) fn new(coords: Vec<CoordOrientation>) -> Self {
        Orientation { coords }
    }

    pub fn coords(&self) -> &[CoordOrientation] {
        &self.coords
    }

    pub fn coord(&self, i: u32) -> CoordOrientation {
        self.coords[i as usize]
    }

    /// Unate ⇔ no coordinate is mixed.
    pub fn is_unate(&self) -> bool {
        self.coords.iter().all(|c| *c != CoordOrientation::Mixed)
    }

    /// First mixed coordinate, if any.
    pub fn mixed_coord(&self) -> Option<u32> {
        self.coords
            .iter()
            .position(|c| *c == CoordOrientation::Mixed)
            .map(|i| i as u32)
    }

    /// Mask of coordinates classified as decreasing.
    pub fn decreasing_mask(&self) -> u32 {
        self.coords
            .iter()
            .enumerate()
            .filter(|(_, c)| **c == CoordOrientation::Decreasing)
            .fold(0u32, |m, (i, _)| m | (1 << i))
    }

    /// Sign vector `σ` with `σ_i = −1` exactly on decreasing coordinates.
    pub fn sign_vector(&self) -> SignVector {
        let n = self.coords.len() as u32;
        SignVector::new(n, HypercubePoint::index_mask(n) & !self.decreasing_mask())
    }

    /// Is `self` consistent with `other` in the refinement sense: wherever
    /// both are strict they agree, and a strict class in `self` may appear as
    /// `Constant` in `other` (a never-pivotal coordinate)?
    pub fn refines(&self, other: &Orientation) -> bool {
        use CoordOrientation::*;
        self.coords.len() == other.coords.len()
            && self.coords.iter().zip(&other.coords).all(|(a, b)| {
                matches!(
                    (a, b),
                    (Increasing, Increasing)
                        | (Decreasing, Decreasing)
                        | (Constant, Constant)
                        | (Increasing, Constant)
                        | (Decreasing, Constant)
                )
            })
    }
}

/// Classify every coordinate of `f` by scanning all `2^{n−1}` co-assignments
/// per direction.
pub fn orientation(tt: &TruthTable) -> Orientation {
    let coords = (0..tt.n())
        .map(|i| {
            let (inc, dec) = tt.direction_flags(i);
            match (inc, dec) {
                (false, false) => CoordOrientation::Constant,
                (true, false) => CoordOrientation::Increasing,
                (false, true) => CoordOrientation::Decreasing,
                (true, true) => CoordOrientation::Mixed,
            }
        })
        .collect();
    Orientation::new(coords)
}

/// Relabel inputs of a unate `f` so the result is increasing in every
/// coordinate: returns `(g, σ)` with `g(x) = f(σ_1 x_1, …, σ_n x_n)` and
/// `σ_i = −1` exactly for decreasing coordinates. `as(g) = as(f)`.
pub fn normalize_increasing(
    tt: &TruthTable,
    o: &Orientation,
) -> Result<(TruthTable, SignVector)> {
    if let Some(coord) = o.mixed_coord() {
        return Err(Error::NotUnate { coord });
    }
    let mask = o.decreasing_mask();
    Ok((tt.xor_permute(mask), o.sign_vector()))
}

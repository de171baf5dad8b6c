//! Sensitivity analysis of Boolean functions on the hypercube `{±1}^n`, built
//! around halfspace intersections and unions of unate functions.
//!
//! The crate provides:
//!
//! - [`boolfn`]: bit-packed truth tables, linear threshold functions (halfspaces),
//!   AND/OR composites, and unateness analysis.
//! - [`fourier`]: exact integer Walsh–Hadamard spectra, per-degree weight profiles,
//!   tail weights, and the spectral noise-sensitivity formula.
//! - [`sensitivity`]: exact (rational) and Monte Carlo average sensitivity and noise
//!   sensitivity, plus audit machinery for the union build-up inequality
//!   `as(F_m) − as(F_{m−1}) ≤ 2·E[S_m(x)·Σ_i σ_i x_i]`.
//! - [`constructions`]: extremal threshold functions, random sign-flip unions,
//!   random intersections, and the bin-flip noise process.
//! - [`learner`]: degree-bounded L1 polynomial regression over parity features and
//!   the agnostic learner built on it.
//! - [`experiments`]: reproducible grid experiments with CSV/SVG output.
//!
//! All exact quantities are integers or arbitrary-precision rationals; Monte Carlo
//! estimates are driven by a counter-based generator (ChaCha8 streams) so that every
//! result is reproducible from `(seed, samples)` alone, independent of thread count.
//!
//! The `parallel` feature (on by default) runs the data-parallel kernels on a rayon
//! pool; without it every code path falls back to the sequential implementation.

pub mod boolfn;
pub mod constructions;
pub mod error;
pub mod exec;
pub mod experiments;
pub mod fourier;
pub mod io;
pub mod learner;
pub mod rat;
pub mod rng;
pub mod sensitivity;

pub use boolfn::{
    Combiner, CompositeSpec, CoordOrientation, HypercubePoint, LinearThresholdFunction,
    Orientation, SignVector, Term, TruthTable,
};
pub use error::Error;
pub use exec::Exec;
pub use fourier::{DegreeWeightProfile, FourierSpectrum};
pub use rat::Rat;
pub use sensitivity::{MonteCarloEstimate, SensitivityReport, TelescopingLedger};

/// Convenience result alias used across the crate.
pub type Result<T> = std::result::Result<T, Error>;

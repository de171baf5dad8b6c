//! Audit machinery for unions of unate functions.
//!
//! Building `F_m = f_1 ∨ … ∨ f_m` one term at a time, write
//! `S_m = F_m − F_{m−1}` (the increment set) and `p_m = E[S_m]`. For a term
//! whose orientation is `σ` (each `f_m` unate), the pointwise inequality
//!
//! ```text
//! |F_m(x)−F_m(x^i)| − |F_{m−1}(x)−F_{m−1}(x^i)|
//!     ≤ σ_i·x_i·((F_m(x)−F_m(x^i)) − (F_{m−1}(x)−F_{m−1}(x^i)))
//! ```
//!
//! holds for every `(x, i)`, and summing it gives the per-term bound
//! `as(F_m) − as(F_{m−1}) ≤ 2·E[S_m(x)·Σ_i σ_i x_i]`. The telescoping ledger
//! records `p_m`, the sensitivity increment, the correlation statistic, and a
//! floating reference bound `c·p·√(n·ln(1/p))`; the exact inequality
//! `Δas ≤ corr` is the quantity audits assert.
//!
//! [`edge_inequality_violations`] checks the pointwise inequality with
//! `σ = +1` (term already normalized to be coordinate-increasing); feeding it
//! a term with a decreasing coordinate surfaces the violating `(x, i)` pairs
//! instead of silently failing.

use num::{One, Zero};

use crate::boolfn::{orientation, HypercubePoint, SignVector, TruthTable};
use crate::error::Error;
use crate::exec::Exec;
use crate::rat::{rat, rat_pow2, rat_to_f64, Rat};
use crate::Result;

/// Cap for the exhaustive audits.
pub const MAX_AUDIT_DIM: u32 = 20;

/// Default constant for the ledger's floating reference bound.
pub const DEFAULT_BOUND_C: f64 = 3.0;

/// Exact `E[S(x)·Σ_i σ_i x_i]`.
pub fn correlation_statistic(s_tt: &TruthTable, sigma: &SignVector) -> Result<Rat> {
    if sigma.n() != s_tt.n() {
        return Err(Error::DimensionMismatch {
            expected: s_tt.n(),
            found: sigma.n(),
        });
    }
    let ones = s_tt.ones() as i128;
    let plus_counts = s_tt.ones_with_coordinate_plus();
    let mut numer = 0i128;
    for (i, &c) in plus_counts.iter().enumerate() {
        // Σ_{x:S=1} x_i = (#{x_i=+1} − #{x_i=−1}) over the support
        numer += sigma.sign(i as u32) as i128 * (2 * c as i128 - ones);
    }
    Ok(rat_pow2(num::BigInt::from(numer), s_tt.n()))
}

/// One `(x, i)` pair violating the pointwise edge inequality.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EdgeViolation {
    pub point: HypercubePoint,
    pub coord: u32,
    pub lhs: i64,
    pub rhs: i64,
}

/// Check the pointwise edge inequality for `F_m = prev ∨ term` at every
/// `(x, i)`, with `σ = +1` (so `term` must already be increasing in every
/// coordinate for the guarantee to apply).
///
/// Returns the violating pairs — empty exactly when the inequality holds
/// everywhere. A term with a mixed coordinate is rejected; a unate term with
/// decreasing coordinates is allowed so the failure mode is observable.
pub fn edge_inequality_violations(
    prev: &TruthTable,
    term: &TruthTable,
) -> Result<Vec<EdgeViolation>> {
    let n = term.n();
    if prev.n() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: prev.n(),
        });
    }
    if n > MAX_AUDIT_DIM {
        return Err(Error::SizeCap {
            what: "edge inequality check",
            limit: MAX_AUDIT_DIM,
            requested: n,
        });
    }
    if let Some(coord) = orientation(term).mixed_coord() {
        return Err(Error::NotUnate { coord });
    }
    let union = prev.or(term);
    let mut violations = Vec::new();
    for bits in 0..union.len() as u32 {
        let x = HypercubePoint::new(n, bits);
        for i in 0..n {
            let xi = x.flip(i).bits();
            let dm = union.get(bits) as i64 - union.get(xi) as i64;
            let dp = prev.get(bits) as i64 - prev.get(xi) as i64;
            let lhs = dm.abs() - dp.abs();
            let rhs = x.sign(i) * (dm - dp);
            if lhs > rhs {
                violations.push(EdgeViolation {
                    point: x,
                    coord: i,
                    lhs,
                    rhs,
                });
            }
        }
    }
    Ok(violations)
}

/// One row of the telescoping ledger.
#[derive(Debug, Clone, PartialEq)]
pub struct LedgerRow {
    /// 1-based term index.
    pub m: usize,
    /// `p_m = E[S_m]`.
    pub p: Rat,
    /// `as(F_m) − as(F_{m−1})`.
    pub delta_as: Rat,
    /// `2·E[S_m(x)·Σ_i σ_i x_i]` with `σ` from the term's orientation.
    pub corr: Rat,
    /// Reference bound `c·p·√(n·ln(1/p))` (0 when `p ∈ {0, 1}`).
    pub bound: f64,
}

/// Per-term build-up ledger of a union of unate functions.
#[derive(Debug, Clone, PartialEq)]
pub struct TelescopingLedger {
    pub n: u32,
    pub rows: Vec<LedgerRow>,
    /// `E[F] = Σ_m p_m`, exact.
    pub union_mean: Rat,
    /// `as(F) = Σ_m Δas_m`, exact.
    pub union_as: Rat,
    /// The constant used for the floating reference bounds.
    pub bound_c: f64,
}

impl TelescopingLedger {
    /// Does `Δas_m ≤ corr_m` hold for every row (the aggregated pointwise
    /// inequality)?
    pub fn claim_holds(&self) -> bool {
        self.rows.iter().all(|r| r.delta_as <= r.corr)
    }

    /// `Σ_m corr_m` — an exact upper bound for `as(F)` whenever
    /// [`TelescopingLedger::claim_holds`].
    pub fn corr_sum(&self) -> Rat {
        self.rows.iter().map(|r| r.corr.clone()).sum()
    }
}

/// Build `F_m = ⋁_{j≤m} f_j` and record `(p_m, Δas_m, corr_m, bound_m)` per
/// term. Every term must be unate (`n ≤ 20`).
pub fn telescoping_audit(terms: &[TruthTable], bound_c: f64) -> Result<TelescopingLedger> {
    telescoping_audit_with(terms, bound_c, Exec::default())
}

/// [`telescoping_audit`] on an explicit backend.
pub fn telescoping_audit_with(
    terms: &[TruthTable],
    bound_c: f64,
    exec: Exec,
) -> Result<TelescopingLedger> {
    let n = match terms.first() {
        Some(t) => t.n(),
        None => {
            return Err(Error::InvalidParameter(
                "telescoping audit needs at least one term".into(),
            ))
        }
    };
    if n > MAX_AUDIT_DIM {
        return Err(Error::SizeCap {
            what: "telescoping audit",
            limit: MAX_AUDIT_DIM,
            requested: n,
        });
    }
    let mut union = TruthTable::constant(n, false);
    let mut prev_as = Rat::zero();
    let mut rows = Vec::with_capacity(terms.len());
    for (idx, term) in terms.iter().enumerate() {
        if term.n() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: term.n(),
            });
        }
        let o = orientation(term);
        if let Some(coord) = o.mixed_coord() {
            return Err(Error::NotUnate { coord });
        }
        let sigma = o.sign_vector();
        let next = union.or(term);
        let increment = next.and_not(&union);
        let p = increment.mean();
        let as_next = rat_pow2(next.boundary_edges(exec), n - 1);
        let delta_as = &as_next - &prev_as;
        let corr = rat(2, 1) * correlation_statistic(&increment, &sigma)?;
        let bound = reference_bound(bound_c, &p, n);
        rows.push(LedgerRow {
            m: idx + 1,
            p,
            delta_as,
            corr,
            bound,
        });
        union = next;
        prev_as = as_next;
    }
    Ok(TelescopingLedger {
        n,
        rows,
        union_mean: union.mean(),
        union_as: prev_as,
        bound_c,
    })
}

/// `c·p·√(n·ln(1/p))`, the floating reference bound attached to each row.
pub fn reference_bound(c: f64, p: &Rat, n: u32) -> f64 {
    let pf = rat_to_f64(p);
    if pf <= 0.0 || pf >= 1.0 {
        return 0.0;
    }
    c * pf * (n as f64 * (1.0 / pf).ln()).sqrt()
}

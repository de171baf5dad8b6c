//! Random sign-flip unions: families whose expected average sensitivity
//! scales like `√(n·ln k)`.
//!
//! The base term is the extremal unit-weight threshold function at mass
//! `ε = 1/k`. If its mean exceeds 1/4 the base alone is the family; otherwise
//! `m = min(⌊1/(4·E[f])⌋, k)` independent uniformly sign-flipped copies are
//! OR-ed. The audit resamples sign families, computes the exact sensitivity
//! of every sampled union, and also measures how often a boundary edge of one
//! term is covered by another term — the quantity the union bound caps at 1/2.

use num::{BigInt, ToPrimitive};

use crate::boolfn::{
    CompositeSpec, LinearThresholdFunction, SignVector, TruthTable,
};
use crate::error::Error;
use crate::exec::{self, Exec};
use crate::rat::{rat, rat_pow2, rat_to_f64, Rat};
use crate::rng::{random_point, stream_rng};
use crate::Result;

use super::{largest_theta_with_tail_at_least, BinomialTailTable};

/// Cap for exact union audits.
pub const MAX_UNION_AUDIT_DIM: u32 = 22;

/// How many terms one audit trial examines for edge coverage.
const COVER_AUDIT_TERMS: usize = 8;

/// A union of sign-flipped copies of one extremal threshold function.
#[derive(Debug, Clone)]
pub struct LowerBoundFamily {
    pub n: u32,
    pub k: u32,
    /// Number of OR-ed terms, `m ≤ k`.
    pub m: u32,
    pub base: LinearThresholdFunction,
    pub base_theta: i64,
    /// `E[base]`, exact.
    pub base_mean: Rat,
    /// The requested mass `1/k`.
    pub requested_eps: Rat,
    /// True when `1/k` fell outside `(2^{−n}, 1/2)` and the achievable tail
    /// mass was used instead.
    pub clamped: bool,
    pub signs: Vec<SignVector>,
    pub seed: u64,
}

impl LowerBoundFamily {
    /// The sign-flipped terms.
    pub fn terms(&self) -> Vec<LinearThresholdFunction> {
        self.signs
            .iter()
            .map(|s| self.base.flip_signs(s).expect("dimensions agree"))
            .collect()
    }

    /// The OR spec `F = ⋁_i f_{s_i}`.
    pub fn union(&self) -> CompositeSpec {
        CompositeSpec::union(self.n, self.terms()).expect("dimensions agree")
    }
}

/// Build the family for `(n, k, seed)`. Requires `k ≤ 2^n`.
pub fn lower_bound_family(n: u32, k: u32, seed: u64) -> Result<LowerBoundFamily> {
    if k == 0 {
        return Err(Error::InvalidParameter("k must be ≥ 1".into()));
    }
    if n > 30 || (n < 31 && k as u64 > 1u64 << n) {
        return Err(Error::InvalidParameter(format!(
            "family requires k ≤ 2^n and n ≤ 30, got n={n}, k={k}"
        )));
    }
    let requested_eps = rat(1, k as u64);
    let clamped = requested_eps <= rat_pow2(BigInt::one(), n) || requested_eps >= rat(1, 2);
    let tails = BinomialTailTable::new(n)?;
    let theta = largest_theta_with_tail_at_least(&tails, &requested_eps);
    let base_mean = tails.tail(theta);
    let base = LinearThresholdFunction::unit(n, theta);

    let m = if base_mean > rat(1, 4) {
        1u32
    } else {
        // ⌊1/(4·E[f])⌋, capped at k
        let inv = (rat(1, 4) / &base_mean).floor();
        inv.numer().to_u32().unwrap_or(u32::MAX).min(k).max(1)
    };

    let mut rng = stream_rng(seed, 0);
    let signs = (0..m).map(|_| random_point(&mut rng, n)).collect();
    Ok(LowerBoundFamily {
        n,
        k,
        m,
        base,
        base_theta: theta,
        base_mean,
        requested_eps,
        clamped,
        signs,
        seed,
    })
}

/// One audited sign family.
#[derive(Debug, Clone, PartialEq)]
pub struct UnionAuditTrial {
    pub trial: u32,
    /// `as(F)` for this sign family, exact.
    pub as_exact: Rat,
    /// `as(F) / √(n·ln k)`.
    pub ratio: f64,
    /// Boundary edges of the audited terms.
    pub edges_audited: u64,
    /// Of those, edges with an endpoint covered by some other term.
    pub edges_covered: u64,
}

/// Aggregate over resampled sign families.
#[derive(Debug, Clone)]
pub struct UnionAuditReport {
    pub n: u32,
    pub k: u32,
    pub m: u32,
    pub trials: Vec<UnionAuditTrial>,
    /// Mean exact `as(F)` over trials.
    pub mean_as: Rat,
    /// `mean_as / √(n·ln k)`.
    pub mean_ratio: f64,
    /// Pooled `edges_covered / edges_audited` over all trials.
    pub cover_rate: f64,
    /// Index of the trial with the largest `as(F)`.
    pub best_trial: u32,
    pub best_as: Rat,
    /// The sign family achieving `best_as` (the retained witness).
    pub best_signs: Vec<SignVector>,
}

/// Scaling denominator `√(n·ln k)` (NaN for `k < 2`).
pub fn scale_sqrt_n_ln_k(n: u32, k: u32) -> f64 {
    if k < 2 {
        return f64::NAN;
    }
    ((n as f64) * (k as f64).ln()).sqrt()
}

/// Exact `as(⋁_i f_{s_i})` for an explicit sign family over `family`'s base
/// (used to replay a retained witness or force degenerate sign choices).
pub fn union_as_for_signs(
    family: &LowerBoundFamily,
    signs: &[SignVector],
    exec: Exec,
) -> Result<Rat> {
    let n = family.n;
    if n > MAX_UNION_AUDIT_DIM {
        return Err(Error::SizeCap {
            what: "union sensitivity audit",
            limit: MAX_UNION_AUDIT_DIM,
            requested: n,
        });
    }
    let base_table = family.base.truth_table(exec)?;
    let mut union = TruthTable::constant(n, false);
    for s in signs {
        union.or_assign(&base_table.xor_permute(s.negative_mask()));
    }
    Ok(rat_pow2(union.boundary_edges(exec), n - 1))
}

/// Count boundary edges of `term` and how many of them have an endpoint where
/// `cover` is 1.
fn covered_edge_counts(term: &TruthTable, cover: &TruthTable) -> (u64, u64) {
    use crate::boolfn::HALF_MASK;
    let tw = term.words();
    let cw = cover.words();
    let mut edges = 0u64;
    let mut covered = 0u64;
    for i in 0..term.n().min(6) {
        let s = 1u32 << i;
        let m = HALF_MASK[i as usize];
        for (t, c) in tw.iter().zip(cw) {
            let diff = (t ^ (t >> s)) & m;
            let cov = (c | (c >> s)) & m;
            edges += diff.count_ones() as u64;
            covered += (diff & cov).count_ones() as u64;
        }
    }
    for i in 6..term.n() {
        let bit = 1usize << (i - 6);
        for lo in 0..tw.len() {
            if lo & bit != 0 {
                continue;
            }
            let diff = tw[lo] ^ tw[lo | bit];
            let cov = cw[lo] | cw[lo | bit];
            edges += diff.count_ones() as u64;
            covered += (diff & cov).count_ones() as u64;
        }
    }
    (edges, covered)
}

/// Resample `trials` independent sign families for `family`'s base, compute
/// the exact `as(F)` of each sampled union, and audit edge coverage on the
/// first [`COVER_AUDIT_TERMS`] terms of each family (`n ≤ 22`).
pub fn union_sensitivity_audit(
    family: &LowerBoundFamily,
    trials: u32,
    seed: u64,
) -> Result<UnionAuditReport> {
    union_sensitivity_audit_with(family, trials, seed, Exec::default())
}

/// [`union_sensitivity_audit`] on an explicit backend.
pub fn union_sensitivity_audit_with(
    family: &LowerBoundFamily,
    trials: u32,
    seed: u64,
    exec: Exec,
) -> Result<UnionAuditReport> {
    let n = family.n;
    if n > MAX_UNION_AUDIT_DIM {
        return Err(Error::SizeCap {
            what: "union sensitivity audit",
            limit: MAX_UNION_AUDIT_DIM,
            requested: n,
        });
    }
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be ≥ 1".into()));
    }
    let base_table = family.base.truth_table(exec)?;
    let m = family.m as usize;
    let scale = scale_sqrt_n_ln_k(n, family.k);

    let results: Vec<(UnionAuditTrial, Vec<SignVector>)> =
        exec::map_collect(exec, trials as usize, |t| {
            let mut rng = stream_rng(seed, t as u64);
            let signs: Vec<SignVector> = (0..m).map(|_| random_point(&mut rng, n)).collect();
            let term_tables: Vec<TruthTable> = signs
                .iter()
                .take(COVER_AUDIT_TERMS)
                .map(|s| base_table.xor_permute(s.negative_mask()))
                .collect();
            let mut union = TruthTable::constant(n, false);
            let mut rest = TruthTable::constant(n, false);
            for (idx, s) in signs.iter().enumerate() {
                if idx < COVER_AUDIT_TERMS {
                    union.or_assign(&term_tables[idx]);
                } else {
                    let tt = base_table.xor_permute(s.negative_mask());
                    union.or_assign(&tt);
                    rest.or_assign(&tt);
                }
            }
            let b = union.boundary_edges(Exec::Sequential);
            let as_exact = rat_pow2(b, n - 1);
            let ratio = rat_to_f64(&as_exact) / scale;

            let mut edges_audited = 0u64;
            let mut edges_covered = 0u64;
            let audited = term_tables.len();
            for i in 0..audited {
                let mut cover = rest.clone();
                for (j, tt) in term_tables.iter().enumerate() {
                    if j != i {
                        cover.or_assign(tt);
                    }
                }
                let (e, c) = covered_edge_counts(&term_tables[i], &cover);
                edges_audited += e;
                edges_covered += c;
            }
            (
                UnionAuditTrial {
                    trial: t as u32,
                    as_exact,
                    ratio,
                    edges_audited,
                    edges_covered,
                },
                signs,
            )
        });

    let mut mean_as = Rat::from_integer(BigInt::from(0));
    let mut total_edges = 0u64;
    let mut total_covered = 0u64;
    let mut best = 0usize;
    for (i, (row, _)) in results.iter().enumerate() {
        mean_as += &row.as_exact;
        total_edges += row.edges_audited;
        total_covered += row.edges_covered;
        if row.as_exact > results[best].0.as_exact {
            best = i;
        }
    }
    mean_as /= rat(trials as i64, 1);
    let mean_ratio = rat_to_f64(&mean_as) / scale;
    let cover_rate = if total_edges > 0 {
        total_covered as f64 / total_edges as f64
    } else {
        0.0
    };
    let best_as = results[best].0.as_exact.clone();
    let best_signs = results[best].1.clone();
    let trials_rows = results.into_iter().map(|(row, _)| row).collect();
    Ok(UnionAuditReport {
        n,
        k: family.k,
        m: family.m,
        trials: trials_rows,
        mean_as,
        mean_ratio,
        cover_rate,
        best_trial: best as u32,
        best_as,
        best_signs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sensitivity::average_sensitivity_exact;

    #[test]
    fn degenerate_small_case_has_a_term() {
        // n=4, k=2: ε = 1/2 is outside the open range, so the mass clamps to
        // the largest achievable tail ≥ 1/2 and the family is a single term.
        let fam = lower_bound_family(4, 2, 9).unwrap();
        assert!(fam.clamped);
        assert!(fam.m >= 1);
        assert_eq!(fam.signs.len(), fam.m as usize);
        assert!(fam.base_mean > rat(1, 4));
        assert_eq!(fam.m, 1);
    }

    #[test]
    fn family_structure_n10_k8() {
        let fam = lower_bound_family(10, 8, 1).unwrap();
        assert!(!fam.clamped);
        assert!(fam.base_mean >= rat(1, 8));
        if fam.base_mean <= rat(1, 4) {
            let inv = (rat(1, 4) / &fam.base_mean).floor();
            let expect = inv.numer().to_u32().unwrap().min(8);
            assert_eq!(fam.m, expect);
        } else {
            assert_eq!(fam.m, 1);
        }
        // every term shares the base's mean and sensitivity
        let base_table = fam.base.truth_table(Exec::Sequential).unwrap();
        let base_report = average_sensitivity_exact(&base_table).unwrap();
        for term in fam.terms() {
            let t = term.truth_table(Exec::Sequential).unwrap();
            let r = average_sensitivity_exact(&t).unwrap();
            assert_eq!(r.mean, base_report.mean);
            assert_eq!(r.as_exact, base_report.as_exact);
        }
    }

    #[test]
    fn k_above_cube_rejected() {
        assert!(lower_bound_family(3, 9, 0).is_err());
    }

    #[test]
    fn single_term_audit_has_zero_variance() {
        let fam = lower_bound_family(8, 2, 5).unwrap();
        assert_eq!(fam.m, 1);
        let report = union_sensitivity_audit(&fam, 6, 33).unwrap();
        let first = report.trials[0].as_exact.clone();
        for t in &report.trials {
            assert_eq!(t.as_exact, first);
        }
        let base_as = average_sensitivity_exact(&fam.base.truth_table(Exec::Sequential).unwrap())
            .unwrap()
            .as_exact;
        assert_eq!(first, base_as);
        // no other terms: nothing can cover an edge
        assert_eq!(report.cover_rate, 0.0);
    }

    #[test]
    fn audit_mean_and_best_are_consistent() {
        let fam = lower_bound_family(12, 16, 7).unwrap();
        let report = union_sensitivity_audit(&fam, 8, 21).unwrap();
        assert_eq!(report.trials.len(), 8);
        let sum: Rat = report.trials.iter().map(|t| t.as_exact.clone()).sum();
        assert_eq!(report.mean_as, sum / rat(8, 1));
        assert!(report.best_as >= report.mean_as);
        assert_eq!(
            report.best_as,
            report.trials[report.best_trial as usize].as_exact
        );
        assert!(report.cover_rate >= 0.0 && report.cover_rate <= 1.0);
    }

    #[test]
    fn forced_identical_signs_collapse_to_base() {
        let fam = lower_bound_family(10, 64, 2).unwrap();
        assert!(fam.m > 1);
        let s = SignVector::from_signs(&[1, -1, 1, 1, -1, -1, 1, -1, 1, 1]).unwrap();
        let signs = vec![s; fam.m as usize];
        let as_union = union_as_for_signs(&fam, &signs, Exec::Sequential).unwrap();
        let base_as = average_sensitivity_exact(&fam.base.truth_table(Exec::Sequential).unwrap())
            .unwrap()
            .as_exact;
        assert_eq!(as_union, base_as);
    }

    #[test]
    fn audit_is_deterministic() {
        let fam = lower_bound_family(10, 16, 3).unwrap();
        let a = union_sensitivity_audit_with(&fam, 5, 11, Exec::Sequential).unwrap();
        let b = union_sensitivity_audit_with(&fam, 5, 11, Exec::default()).unwrap();
        assert_eq!(a.trials, b.trials);
        assert_eq!(a.mean_as, b.mean_as);
    }
}

//! Least-absolute-deviation regression by a primal-dual interior-point
//! method.
//!
//! The problem `min_c ‖Xc − y‖₁` is the LP
//!
//! ```text
//! max  yᵀλ   s.t.  Xᵀλ = 0,  −1 ≤ λ ≤ 1
//! ```
//!
//! whose equality multipliers are the regression coefficients `c`. With box
//! slacks `s = 1−λ`, `t = 1+λ` and their multipliers `u, v ≥ 0`, each Newton
//! step reduces to one F×F positive-definite solve
//!
//! ```text
//! (Xᵀ D⁻¹ X) Δc = Xᵀ(r₁/d) − r_d,     d = u/s + v/t,
//! ```
//!
//! so the per-iteration cost is forming the normal matrix (S·F² multiplies,
//! block-parallel over samples with a fixed block count, hence deterministic
//! for any thread count) plus one Cholesky factorization. Mehrotra's
//! predictor-corrector keeps the iteration count small.

use nalgebra::{Cholesky, DMatrix, DVector};

use crate::error::Error;
use crate::exec::{self, Exec};
use crate::Result;

/// Reported optimality tolerance of the solver.
pub const SOLVER_TOLERANCE: f64 = 1e-8;
/// Method string recorded in model metadata.
pub const SOLVER_METHOD: &str = "primal-dual interior point (Mehrotra)";

const MAX_ITERS: usize = 200;
const STEP_SCALE: f64 = 0.995;
const NORMAL_BLOCKS: usize = 64;

/// Solution of one regression.
pub(crate) struct LadSolution {
    pub coeffs: Vec<f64>,
    /// Total L1 loss `‖Xc − y‖₁` at the returned coefficients.
    pub loss: f64,
    pub iterations: usize,
}

/// `Xᵀ·diag(w)·X` with a fixed block split over rows (deterministic sum order).
fn weighted_normal_matrix(x: &DMatrix<f64>, w: &DVector<f64>, exec: Exec) -> DMatrix<f64> {
    let s = x.nrows();
    let f = x.ncols();
    let blocks = NORMAL_BLOCKS.min(s.max(1));
    let rows_per = s.div_ceil(blocks);
    let parts: Vec<DMatrix<f64>> = exec::map_collect(exec, blocks, |b| {
        let r0 = b * rows_per;
        if r0 >= s {
            return DMatrix::zeros(f, f);
        }
        let rows = (s - r0).min(rows_per);
        let xb = x.rows(r0, rows);
        let mut xw = xb.clone_owned();
        for i in 0..rows {
            let wi = w[r0 + i];
            for j in 0..f {
                xw[(i, j)] *= wi;
            }
        }
        xb.tr_mul(&xw)
    });
    let mut m = DMatrix::zeros(f, f);
    for p in parts {
        m += p;
    }
    m
}

fn max_step(z: &DVector<f64>, dz: &DVector<f64>) -> f64 {
    let mut a = f64::INFINITY;
    for i in 0..z.len() {
        if dz[i] < 0.0 {
            a = a.min(-z[i] / dz[i]);
        }
    }
    a
}

fn factorize(mut m: DMatrix<f64>) -> Option<Cholesky<f64, nalgebra::Dyn>> {
    let f = m.nrows();
    let trace: f64 = (0..f).map(|i| m[(i, i)]).sum();
    let mut delta = 0.0;
    for _ in 0..12 {
        if delta > 0.0 {
            for i in 0..f {
                m[(i, i)] += delta;
            }
        }
        if let Some(ch) = Cholesky::new(m.clone()) {
            return Some(ch);
        }
        delta = if delta == 0.0 {
            1e-12 * (trace / f as f64).max(1.0)
        } else {
            delta * 100.0
        };
    }
    None
}

/// Solve `min_c ‖Xc − y‖₁`.
pub(crate) fn solve_lad(x: &DMatrix<f64>, y: &DVector<f64>, exec: Exec) -> Result<LadSolution> {
    let s_dim = x.nrows();
    let f_dim = x.ncols();
    if s_dim == 0 || f_dim == 0 {
        return Err(Error::InvalidParameter(
            "regression needs at least one sample and one feature".into(),
        ));
    }
    let mut c = DVector::<f64>::zeros(f_dim);
    let mut lambda = DVector::<f64>::zeros(s_dim);
    let mut u = DVector::<f64>::from_element(s_dim, 1.0);
    let mut v = DVector::<f64>::from_element(s_dim, 1.0);

    let mut iterations = 0;
    for iter in 0..MAX_ITERS {
        iterations = iter + 1;
        let s_slack = lambda.map(|l| 1.0 - l);
        let t_slack = lambda.map(|l| 1.0 + l);
        let xc = x * &c;
        let r_p = y - &xc - &u + &v;
        let r_d = -x.tr_mul(&lambda);
        let mu = (u.dot(&s_slack) + v.dot(&t_slack)) / (2.0 * s_dim as f64);

        let feas_p = r_p.amax();
        let feas_d = r_d.amax();
        if mu <= SOLVER_TOLERANCE * 1e-2 && feas_p <= SOLVER_TOLERANCE && feas_d <= SOLVER_TOLERANCE
        {
            break;
        }

        let d = u.zip_map(&s_slack, |a, b| a / b) + v.zip_map(&t_slack, |a, b| a / b);
        let dinv = d.map(|z| 1.0 / z);
        let m = weighted_normal_matrix(x, &dinv, exec);
        let chol = factorize(m).ok_or_else(|| {
            Error::NotConverged("normal matrix lost positive definiteness".into())
        })?;

        let solve_direction = |r1: &DVector<f64>| -> (DVector<f64>, DVector<f64>) {
            let rhs = x.tr_mul(&r1.component_mul(&dinv)) - &r_d;
            let dc = chol.solve(&rhs);
            let dl = (r1 - x * &dc).component_mul(&dinv);
            (dc, dl)
        };

        // predictor (σ = 0): r1 reduces to y − Xc
        let r1_aff = y - &xc;
        let (_dc_aff, dl_aff) = solve_direction(&r1_aff);
        let du_aff = u.zip_zip_map(&s_slack, &dl_aff, |ui, si, dli| (-ui * si + ui * dli) / si);
        let dv_aff = v.zip_zip_map(&t_slack, &dl_aff, |vi, ti, dli| (-vi * ti - vi * dli) / ti);
        let ds_aff = -&dl_aff;
        let dt_aff = dl_aff.clone();
        let alpha_aff = [
            max_step(&u, &du_aff),
            max_step(&v, &dv_aff),
            max_step(&s_slack, &ds_aff),
            max_step(&t_slack, &dt_aff),
        ]
        .into_iter()
        .fold(1.0f64, f64::min);
        let mu_aff = ((&u + &du_aff * alpha_aff).dot(&(&s_slack + &ds_aff * alpha_aff))
            + (&v + &dv_aff * alpha_aff).dot(&(&t_slack + &dt_aff * alpha_aff)))
            / (2.0 * s_dim as f64);
        let sigma = (mu_aff / mu).powi(3).clamp(1e-8, 0.9999);

        // corrector with second-order complementarity terms
        let comp_u = du_aff.zip_map(&ds_aff, |a, b| sigma * mu - a * b)
            - u.component_mul(&s_slack);
        let comp_v = dv_aff.zip_map(&dt_aff, |a, b| sigma * mu - a * b)
            - v.component_mul(&t_slack);
        let r1 = &r_p - comp_u.component_div(&s_slack) + comp_v.component_div(&t_slack);
        let (dc, dl) = solve_direction(&r1);
        let du = (&comp_u + u.component_mul(&dl)).component_div(&s_slack);
        let dv = (&comp_v - v.component_mul(&dl)).component_div(&t_slack);
        let ds = -&dl;
        let dt = dl.clone();

        let alpha_primal = [max_step(&s_slack, &ds), max_step(&t_slack, &dt)]
            .into_iter()
            .fold(1.0f64 / STEP_SCALE, f64::min)
            * STEP_SCALE;
        let alpha_dual = [max_step(&u, &du), max_step(&v, &dv)]
            .into_iter()
            .fold(1.0f64 / STEP_SCALE, f64::min)
            * STEP_SCALE;

        lambda += &dl * alpha_primal;
        c += &dc * alpha_dual;
        u += &du * alpha_dual;
        v += &dv * alpha_dual;

        if iter + 1 == MAX_ITERS {
            return Err(Error::NotConverged(format!(
                "LAD interior point hit {MAX_ITERS} iterations (mu={mu:.3e}, feas=({feas_p:.3e},{feas_d:.3e}))"
            )));
        }
    }

    let loss = (x * &c - y).abs().sum();
    Ok(LadSolution {
        coeffs: c.iter().copied().collect(),
        loss,
        iterations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn solve(rows: &[&[f64]], y: &[f64]) -> LadSolution {
        let s = rows.len();
        let f = rows[0].len();
        let x = DMatrix::from_fn(s, f, |i, j| rows[i][j]);
        let y = DVector::from_column_slice(y);
        solve_lad(&x, &y, Exec::Sequential).unwrap()
    }

    #[test]
    fn zero_labels_give_zero_loss() {
        let sol = solve(
            &[&[1.0, 1.0], &[1.0, -1.0], &[1.0, 1.0], &[1.0, -1.0]],
            &[0.0, 0.0, 0.0, 0.0],
        );
        assert!(sol.loss < 1e-7, "loss {}", sol.loss);
    }

    #[test]
    fn exact_interpolation_when_possible() {
        // y = 0.5 + 0.5·x over x ∈ {±1}, two features (1, x)
        let sol = solve(
            &[&[1.0, 1.0], &[1.0, -1.0], &[1.0, 1.0], &[1.0, -1.0]],
            &[1.0, 0.0, 1.0, 0.0],
        );
        assert!(sol.loss < 1e-7);
        assert!((sol.coeffs[0] - 0.5).abs() < 1e-6);
        assert!((sol.coeffs[1] - 0.5).abs() < 1e-6);
    }

    #[test]
    fn median_recovery() {
        // single constant feature: the L1 fit is a median of y
        let sol = solve(
            &[&[1.0], &[1.0], &[1.0], &[1.0], &[1.0]],
            &[0.0, 0.0, 1.0, 5.0, 9.0],
        );
        assert!((sol.coeffs[0] - 1.0).abs() < 1e-6, "median {}", sol.coeffs[0]);
        assert!((sol.loss - 13.0).abs() < 1e-6);
    }

    #[test]
    fn robust_to_one_outlier() {
        // y = 2x except one corrupted point; L1 ignores the outlier
        let sol = solve(
            &[&[1.0], &[2.0], &[3.0], &[4.0], &[5.0]],
            &[2.0, 4.0, 6.0, 8.0, 100.0],
        );
        assert!((sol.coeffs[0] - 2.0).abs() < 1e-6, "slope {}", sol.coeffs[0]);
    }
}

//! Independent oracles for the integration and acceptance suites. Nothing
//! here calls the solver or estimator paths under test: the SVR oracle is
//! projected gradient on the dual, the regression oracle is explicit dummy
//! expansion solved by SVD.

#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};

/// Result of the dual projected-gradient SVR oracle.
pub struct PgOracle {
    pub beta: Vec<f64>,
    pub alpha: f64,
    pub primal: f64,
    pub thetas: Vec<f64>,
}

/// Solve the epsilon-insensitive SVR dual by projected gradient descent:
/// variables (lambda_plus, lambda_minus) in [0, c]^2n with
/// sum(lambda_plus - lambda_minus) = 0, run until the iterate stops moving
/// by more than `tol` in sup norm. Dense inputs, no shortcuts.
pub fn dual_pg_svr(rows: &[Vec<f64>], y: &[f64], c: f64, eps: f64, tol: f64) -> PgOracle {
    let n = rows.len();
    let q: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| rows[i].iter().zip(&rows[j]).map(|(a, b)| a * b).sum())
                .collect()
        })
        .collect();
    // Gershgorin bound on the largest eigenvalue of the effective Hessian.
    let l: f64 = q
        .iter()
        .map(|row| row.iter().map(|v: &f64| v.abs()).sum::<f64>())
        .fold(0.0, f64::max)
        .max(1e-12)
        * 2.0;
    let step = 1.0 / l;

    let dual_value = |lp: &[f64], lm: &[f64]| -> f64 {
        let theta: Vec<f64> = lp.iter().zip(lm).map(|(p, m)| p - m).collect();
        let mut quad = 0.0;
        for i in 0..n {
            for j in 0..n {
                quad += 0.5 * theta[i] * q[i][j] * theta[j];
            }
        }
        let rest: f64 = (0..n)
            .map(|i| eps * (lp[i] + lm[i]) - y[i] * theta[i])
            .sum();
        quad + rest
    };

    let mut lp = vec![0.0f64; n];
    let mut lm = vec![0.0f64; n];
    let mut last_check = f64::INFINITY;
    let max_iter = 2_000_000;
    for iter in 0..max_iter {
        let theta: Vec<f64> = lp.iter().zip(&lm).map(|(p, m)| p - m).collect();
        let qtheta: Vec<f64> = (0..n)
            .map(|i| q[i].iter().zip(&theta).map(|(a, b)| a * b).sum())
            .collect();
        let vp: Vec<f64> = (0..n)
            .map(|i| lp[i] - step * (qtheta[i] + eps - y[i]))
            .collect();
        let vm: Vec<f64> = (0..n)
            .map(|i| lm[i] - step * (-qtheta[i] + eps + y[i]))
            .collect();
        let (new_lp, new_lm) = project_box_hyperplane(&vp, &vm, c);
        let gap = new_lp
            .iter()
            .zip(&lp)
            .chain(new_lm.iter().zip(&lm))
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        lp = new_lp;
        lm = new_lm;
        if gap <= tol {
            break;
        }
        // The iterate can rattle inside the projection long after the
        // objective has converged; stop when a sweep of 4096 iterations no
        // longer improves the dual value measurably.
        if iter % 4096 == 0 {
            let d = dual_value(&lp, &lm);
            if (last_check - d).abs() <= 1e-13 * d.abs().max(1.0) {
                break;
            }
            last_check = d;
        }
    }

    let thetas: Vec<f64> = lp.iter().zip(&lm).map(|(p, m)| p - m).collect();
    let dim = rows[0].len();
    let mut beta = vec![0.0; dim];
    for (theta, row) in thetas.iter().zip(rows) {
        for (b, v) in beta.iter_mut().zip(row) {
            *b += theta * v;
        }
    }
    let residual_base: Vec<f64> = rows
        .iter()
        .zip(y)
        .map(|(row, yi)| yi - row.iter().zip(&beta).map(|(a, b)| a * b).sum::<f64>())
        .collect();
    let alpha = minimize_intercept(&residual_base, eps);
    let reg: f64 = 0.5 * beta.iter().map(|b| b * b).sum::<f64>();
    let loss: f64 = residual_base
        .iter()
        .map(|r| ((r - alpha).abs() - eps).max(0.0))
        .sum();
    PgOracle {
        beta,
        alpha,
        primal: reg + c * loss,
        thetas,
    }
}

/// Project (vp, vm) onto the box [0, c]^2n intersected with the hyperplane
/// sum(vp) - sum(vm) = 0, by bisecting on the hyperplane multiplier.
fn project_box_hyperplane(vp: &[f64], vm: &[f64], c: f64) -> (Vec<f64>, Vec<f64>) {
    let clip = |v: f64| v.clamp(0.0, c);
    let constraint = |mu: f64| -> f64 {
        let sp: f64 = vp.iter().map(|&v| clip(v - mu)).sum();
        let sm: f64 = vm.iter().map(|&v| clip(v + mu)).sum();
        sp - sm
    };
    let bound = vp
        .iter()
        .chain(vm.iter())
        .map(|v| v.abs())
        .fold(0.0, f64::max)
        + c
        + 1.0;
    let (mut lo, mut hi) = (-bound, bound);
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if constraint(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mu = 0.5 * (lo + hi);
    (
        vp.iter().map(|&v| clip(v - mu)).collect(),
        vm.iter().map(|&v| clip(v + mu)).collect(),
    )
}

/// Exact-ish intercept for fixed beta: ternary search on the convex
/// piecewise-linear epsilon-insensitive loss.
fn minimize_intercept(residual_base: &[f64], eps: f64) -> f64 {
    let loss = |a: f64| -> f64 {
        residual_base
            .iter()
            .map(|r| ((r - a).abs() - eps).max(0.0))
            .sum()
    };
    let mut lo = residual_base.iter().cloned().fold(f64::INFINITY, f64::min) - eps - 1.0;
    let mut hi = residual_base.iter().cloned().fold(f64::NEG_INFINITY, f64::max) + eps + 1.0;
    for _ in 0..300 {
        let m1 = lo + (hi - lo) / 3.0;
        let m2 = hi - (hi - lo) / 3.0;
        if loss(m1) <= loss(m2) {
            hi = m2;
        } else {
            lo = m1;
        }
    }
    0.5 * (lo + hi)
}

/// The shared 5-observation, 3-feature oracle instance. Integer-valued
/// features, since document vectors carry phrase counts.
pub fn oracle_instance() -> (Vec<Vec<f64>>, Vec<f64>) {
    let rows = vec![
        vec![1.0, 0.0, 2.0],
        vec![0.0, 1.0, 1.0],
        vec![2.0, 1.0, 0.0],
        vec![1.0, 3.0, 1.0],
        vec![1.0, 1.0, 1.0],
    ];
    let y = vec![0.9, 0.2, 0.55, 0.35, 0.6];
    (rows, y)
}

/// Dummy-expansion fixed-effects OLS oracle: intercept, G1-1 dummies for
/// the first factor, G2-1 for the second, then the regressors; solved by
/// SVD least squares. Returns (coefficients on the regressors, residuals,
/// r_squared).
pub struct DummyOls {
    pub coef: Vec<f64>,
    pub residuals: Vec<f64>,
    pub r_squared: f64,
}

pub fn dummy_expansion_ols(
    y: &[f64],
    regressors: &[Vec<f64>],
    factor1: &[u32],
    g1: usize,
    factor2: &[u32],
    g2: usize,
) -> DummyOls {
    let n = y.len();
    let k_reg = regressors.len();
    let k = 1 + (g1 - 1) + (g2 - 1) + k_reg;
    let mut x = DMatrix::<f64>::zeros(n, k);
    for i in 0..n {
        x[(i, 0)] = 1.0;
        if factor1[i] > 0 {
            x[(i, factor1[i] as usize)] = 1.0;
        }
        if factor2[i] > 0 {
            x[(i, g1 - 1 + factor2[i] as usize)] = 1.0;
        }
        for (j, reg) in regressors.iter().enumerate() {
            x[(i, 1 + (g1 - 1) + (g2 - 1) + j)] = reg[i];
        }
    }
    let yv = DVector::from_column_slice(y);
    let svd = x.clone().svd(true, true);
    let beta = svd.solve(&yv, 1e-12).expect("least squares solve");
    let fitted = &x * &beta;
    let residuals: Vec<f64> = yv.iter().zip(fitted.iter()).map(|(a, b)| a - b).collect();
    let mean = y.iter().sum::<f64>() / n as f64;
    let sst: f64 = y.iter().map(|v| (v - mean) * (v - mean)).sum();
    let ssr: f64 = residuals.iter().map(|e| e * e).sum();
    DummyOls {
        coef: (0..k_reg)
            .map(|j| beta[1 + (g1 - 1) + (g2 - 1) + j])
            .collect(),
        residuals,
        r_squared: 1.0 - ssr / sst,
    }
}

/// Deterministic 100-row unbalanced two-factor panel with known slopes.
pub fn unbalanced_panel() -> (Vec<f64>, Vec<Vec<f64>>, Vec<u32>, usize, Vec<u32>, usize) {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(20240715);
    let n = 100;
    let g1 = 12;
    let g2 = 8;
    // First rows cover every level so no group is empty; the rest is random
    // (unbalanced).
    let f1: Vec<u32> = (0..n)
        .map(|i| {
            if i < g1 {
                i as u32
            } else {
                rng.gen_range(0..g1 as u32)
            }
        })
        .collect();
    let f2: Vec<u32> = (0..n)
        .map(|i| {
            if i < g2 {
                i as u32
            } else {
                rng.gen_range(0..g2 as u32)
            }
        })
        .collect();
    let fe1: Vec<f64> = (0..g1).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let fe2: Vec<f64> = (0..g2).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let x1: Vec<f64> = (0..n).map(|_| rng.gen_range(-2.0..2.0)).collect();
    let x2: Vec<f64> = (0..n).map(|_| rng.gen_range(-2.0..2.0)).collect();
    let y: Vec<f64> = (0..n)
        .map(|i| {
            0.3 * x1[i] - 0.7 * x2[i]
                + fe1[f1[i] as usize]
                + fe2[f2[i] as usize]
                + rng.gen_range(-0.3..0.3)
        })
        .collect();
    (y, vec![x1, x2], f1, g1, f2, g2)
}

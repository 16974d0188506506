use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::label::LabeledExample;

/// Grid points below this product short-circuit to the intercept-only fit.
const NUMERICAL_FLOOR: f64 = 1e-12;

/// Training parameters for the epsilon-insensitive linear SVR.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SvrConfig {
    /// Half-width of the insensitive tube.
    pub epsilon: f64,
    /// Candidate inverse-regularization values for cross-validation.
    pub c_grid: Vec<f64>,
    /// Cross-validation fold count.
    pub folds: usize,
    /// Relative primal-objective tolerance for the solver.
    pub tolerance: f64,
    /// Seed for fold shuffling.
    pub seed: u64,
}

impl Default for SvrConfig {
    fn default() -> Self {
        SvrConfig {
            epsilon: 0.001,
            c_grid: (-15..=4).map(|j| 10f64.powi(j)).collect(),
            folds: 3,
            tolerance: 1e-6,
            seed: 0,
        }
    }
}

impl SvrConfig {
    pub fn validate(&self) -> Result<()> {
        if self.epsilon < 0.0 || !self.epsilon.is_finite() {
            return Err(Error::data("epsilon must be finite and >= 0"));
        }
        if self.c_grid.is_empty() {
            return Err(Error::data("c_grid must be non-empty"));
        }
        if self.c_grid.iter().any(|c| !c.is_finite() || *c <= 0.0) {
            return Err(Error::data("c_grid values must be finite and positive"));
        }
        if self.folds < 2 {
            return Err(Error::data("folds must be at least 2"));
        }
        if self.tolerance <= 0.0 {
            return Err(Error::data("tolerance must be positive"));
        }
        Ok(())
    }
}

/// A converged fit: intercept, dense coefficient vector, and the dual
/// coefficients theta_i (useful for inspecting the support set).
#[derive(Debug, Clone)]
pub struct SvrFit {
    pub alpha: f64,
    pub beta: Vec<f64>,
    pub thetas: Vec<f64>,
    pub primal_objective: f64,
    pub iterations: u64,
}

impl SvrFit {
    pub fn raw_score(&self, counts: &[(u32, u32)]) -> f64 {
        self.alpha
            + counts
                .iter()
                .map(|&(i, c)| self.beta[i as usize] * c as f64)
                .sum::<f64>()
    }
}

/// Train an epsilon-insensitive linear SVR with an unregularized intercept:
///
///   minimize  0.5 * ||beta||^2 + c * sum_i max(0, |y_i - alpha - beta.x_i| - epsilon)
///
/// The dual is solved by sequential minimal optimization on maximal
/// violating pairs; the loop tightens its KKT threshold until the duality
/// gap certifies the primal objective to within `config.tolerance` relative.
pub fn train_svr(
    examples: &[LabeledExample],
    dim: usize,
    c: f64,
    config: &SvrConfig,
) -> Result<SvrFit> {
    if examples.is_empty() {
        return Err(Error::data("cannot train on an empty example set"));
    }
    if !c.is_finite() || c <= 0.0 {
        return Err(Error::numeric(format!("c must be finite and positive, got {c}")));
    }
    let n = examples.len();
    let mut rows: Vec<Vec<(u32, f64)>> = Vec::with_capacity(n);
    let mut y = Vec::with_capacity(n);
    for ex in examples {
        if !ex.y.is_finite() {
            return Err(Error::numeric(format!(
                "non-finite label for {}",
                ex.proposal_id
            )));
        }
        let row: Vec<(u32, f64)> = ex.x.counts.iter().map(|&(i, v)| (i, v as f64)).collect();
        if row.iter().any(|&(i, v)| !v.is_finite() || i as usize >= dim) {
            return Err(Error::numeric(format!(
                "non-finite or out-of-range feature in {}",
                ex.proposal_id
            )));
        }
        rows.push(row);
        y.push(ex.y);
    }

    if c * n as f64 <= NUMERICAL_FLOOR {
        let alpha = epsilon_insensitive_center(&y, config.epsilon);
        let fit = SvrFit {
            alpha,
            beta: vec![0.0; dim],
            thetas: vec![0.0; n],
            primal_objective: primal_objective(&rows, &y, &vec![0.0; dim], alpha, c, config.epsilon),
            iterations: 0,
        };
        return Ok(fit);
    }

    let n_f = n as u64;
    let mut solver = Smo::new(rows, y, dim, c, config.epsilon);

    // Phase 1: capped SMO warm start to get the support geometry roughly
    // right. Phase 2: active-set polish solving the free-set KKT system
    // exactly, which certifies the objective through the duality gap even
    // where pairwise updates crawl. Phase 3 (rare): uncapped SMO with a
    // tightening threshold as a fallback.
    solver.run(1e-2, Some(300 * n_f))?;
    if let Some(result) = solver.try_finish(config.tolerance) {
        return Ok(result);
    }
    let mut kkt_tol = 1e-3;
    for _ in 0..40 {
        solver.polish(config.tolerance);
        if let Some(result) = solver.try_finish(config.tolerance) {
            return Ok(result);
        }
        solver.run(kkt_tol, Some(200 * n_f))?;
        if let Some(result) = solver.try_finish(config.tolerance) {
            return Ok(result);
        }
        kkt_tol = (kkt_tol / 10.0).max(1e-12);
    }
    Err(Error::numeric(
        "SVR solver could not certify the requested tolerance",
    ))
}

/// Exact minimizer of `sum_i max(0, |y_i - a| - eps)` over `a`; used for
/// the intercept-only fit. The function is piecewise linear and convex, so
/// the minimum is attained on an interval between breakpoints; the
/// midpoint of that interval is returned for determinism.
pub fn epsilon_insensitive_center(y: &[f64], eps: f64) -> f64 {
    assert!(!y.is_empty());
    let mut breaks: Vec<f64> = y.iter().flat_map(|&v| [v - eps, v + eps]).collect();
    breaks.sort_by(|a, b| a.partial_cmp(b).expect("finite breakpoints"));
    breaks.dedup();
    let slope = |a: f64| -> i64 {
        let above = y.iter().filter(|&&v| a > v + eps).count() as i64;
        let below = y.iter().filter(|&&v| a < v - eps).count() as i64;
        above - below
    };
    if breaks.len() == 1 {
        return breaks[0];
    }
    // Find the segment where the slope turns non-negative.
    let mut lo = breaks[0];
    for w in breaks.windows(2) {
        let mid = 0.5 * (w[0] + w[1]);
        let s = slope(mid);
        if s > 0 {
            return lo;
        }
        if s == 0 {
            // Flat segment: extend through any further flat segments.
            let mut hi = w[1];
            for w2 in breaks.windows(2) {
                if w2[0] >= w[1] {
                    let mid2 = 0.5 * (w2[0] + w2[1]);
                    if slope(mid2) == 0 {
                        hi = w2[1];
                    } else {
                        break;
                    }
                }
            }
            return 0.5 * (lo + hi);
        }
        lo = w[1];
    }
    *breaks.last().unwrap()
}

fn primal_objective(
    rows: &[Vec<(u32, f64)>],
    y: &[f64],
    beta: &[f64],
    alpha: f64,
    c: f64,
    eps: f64,
) -> f64 {
    let reg: f64 = 0.5 * beta.iter().map(|b| b * b).sum::<f64>();
    let loss: f64 = rows
        .iter()
        .zip(y)
        .map(|(row, &yi)| {
            let f: f64 = row.iter().map(|&(i, v)| beta[i as usize] * v).sum();
            (yi - f - alpha).abs() - eps
        })
        .map(|r| r.max(0.0))
        .sum();
    reg + c * loss
}

/// Sequential minimal optimization over the 2n split dual variables
/// (lambda_plus, lambda_minus), each in [0, c], subject to
/// sum(lambda_plus - lambda_minus) = 0. The Gram matrix is precomputed so
/// every iteration is O(n): first-order selection of the up-side variable,
/// second-order selection of its partner, analytic pair update, and a
/// rank-one refresh of f = Q theta.
struct Smo {
    rows: Vec<Vec<(u32, f64)>>,
    y: Vec<f64>,
    c: f64,
    eps: f64,
    dim: usize,
    lambda_plus: Vec<f64>,
    lambda_minus: Vec<f64>,
    /// f_i = (Q theta)_i = beta . x_i, maintained incrementally.
    f: Vec<f64>,
    /// Dense Gram matrix, row-major.
    gram: Vec<f64>,
    iterations: u64,
}

/// One side of a candidate pair: example index plus which multiplier.
#[derive(Clone, Copy, PartialEq)]
struct Var {
    i: usize,
    /// +1 selects lambda_plus, -1 selects lambda_minus.
    sign: f64,
}

const MAX_PAIR_UPDATES: u64 = 50_000_000;

impl Smo {
    fn new(rows: Vec<Vec<(u32, f64)>>, y: Vec<f64>, dim: usize, c: f64, eps: f64) -> Self {
        let n = rows.len();
        let mut gram = vec![0.0; n * n];
        for i in 0..n {
            gram[i * n + i] = rows[i].iter().map(|&(_, v)| v * v).sum();
            for j in 0..i {
                let d = sparse_dot(&rows[i], &rows[j]);
                gram[i * n + j] = d;
                gram[j * n + i] = d;
            }
        }
        Smo {
            rows,
            y,
            c,
            eps,
            dim,
            lambda_plus: vec![0.0; n],
            lambda_minus: vec![0.0; n],
            f: vec![0.0; n],
            gram,
            iterations: 0,
        }
    }

    fn q(&self, i: usize, j: usize) -> f64 {
        self.gram[i * self.y.len() + j]
    }

    /// Recover the primal coefficient vector from the dual variables.
    fn beta(&self) -> Vec<f64> {
        let mut beta = vec![0.0; self.dim];
        for (i, row) in self.rows.iter().enumerate() {
            let theta = self.lambda_plus[i] - self.lambda_minus[i];
            if theta != 0.0 {
                for &(idx, v) in row {
                    beta[idx as usize] += theta * v;
                }
            }
        }
        beta
    }

    /// KKT score for a variable: the multiplier of the equality constraint
    /// must equal this value when the variable is strictly interior.
    fn v(&self, var: Var) -> f64 {
        let i = var.i;
        if var.sign > 0.0 {
            // -grad of the dual wrt lambda_plus: y - eps - f.
            self.y[i] - self.eps - self.f[i]
        } else {
            // +grad wrt lambda_minus: y + eps - f.
            self.y[i] + self.eps - self.f[i]
        }
    }

    fn lambda(&self, var: Var) -> f64 {
        if var.sign > 0.0 {
            self.lambda_plus[var.i]
        } else {
            self.lambda_minus[var.i]
        }
    }

    /// First-order scan: the up-side variable with the largest KKT value
    /// and the down-side variable with the smallest.
    fn select(&self) -> (Option<(Var, f64)>, Option<(Var, f64)>) {
        let mut best_low: Option<(Var, f64)> = None;
        let mut best_up: Option<(Var, f64)> = None;
        for i in 0..self.y.len() {
            for sign in [1.0f64, -1.0] {
                let var = Var { i, sign };
                let lam = self.lambda(var);
                let in_lower = (sign > 0.0 && lam < self.c) || (sign < 0.0 && lam > 0.0);
                let in_upper = (sign > 0.0 && lam > 0.0) || (sign < 0.0 && lam < self.c);
                if in_lower || in_upper {
                    let val = self.v(var);
                    if in_lower && best_low.map_or(true, |(_, b)| val > b) {
                        best_low = Some((var, val));
                    }
                    if in_upper && best_up.map_or(true, |(_, b)| val < b) {
                        best_up = Some((var, val));
                    }
                }
            }
        }
        (best_low, best_up)
    }

    /// Second-order partner choice: among down-side variables with a KKT
    /// value below `va`, maximize the objective decrease
    /// (va - vb)^2 / (2 rho).
    fn select_partner(&self, a: Var, va: f64) -> Option<(Var, f64)> {
        let n = self.y.len();
        let mut best: Option<(Var, f64, f64)> = None; // (var, v, gain)
        for j in 0..n {
            let rho_raw = self.q(a.i, a.i) + self.q(j, j) - 2.0 * self.q(a.i, j);
            let rho = if rho_raw > 0.0 { rho_raw } else { 1e-12 };
            for sign in [1.0f64, -1.0] {
                let var = Var { i: j, sign };
                let lam = self.lambda(var);
                let in_upper = (sign > 0.0 && lam > 0.0) || (sign < 0.0 && lam < self.c);
                if !in_upper {
                    continue;
                }
                let vb = self.v(var);
                let diff = va - vb;
                if diff <= 0.0 {
                    continue;
                }
                let gain = diff * diff / rho;
                if best.as_ref().map_or(true, |(_, _, g)| gain > *g) {
                    best = Some((var, vb, gain));
                }
            }
        }
        best.map(|(var, vb, _)| (var, vb))
    }

    fn run(&mut self, kkt_tol: f64, cap: Option<u64>) -> Result<()> {
        let started = self.iterations;
        loop {
            if let Some(cap) = cap {
                if self.iterations - started >= cap {
                    return Ok(());
                }
            }
            let (low, up) = self.select();
            let (Some((a, va)), Some((_, min_v))) = (low, up) else {
                return Ok(());
            };
            if va - min_v <= kkt_tol {
                return Ok(());
            }
            let Some((b, vb)) = self.select_partner(a, va) else {
                return Ok(());
            };
            self.iterations += 1;
            if self.iterations > MAX_PAIR_UPDATES {
                return Err(Error::numeric(
                    "SVR solver exceeded its pair-update budget without converging",
                ));
            }
            self.update_pair(a, b, va, vb);
        }
    }

    /// Compute the exact duality gap; when it certifies `tolerance`, package
    /// the fit.
    fn try_finish(&self, tolerance: f64) -> Option<SvrFit> {
        let alpha = self.intercept();
        let beta = self.beta();
        let primal = self.primal(&beta, alpha);
        let gap = primal + self.dual_value(&beta);
        if gap <= tolerance * primal.abs().max(1.0) {
            Some(SvrFit {
                alpha,
                thetas: self.thetas(),
                primal_objective: primal,
                iterations: self.iterations,
                beta,
            })
        } else {
            None
        }
    }

    /// Analytic minimization over the pair (a, b) along the feasible
    /// direction: theta_{i(a)} += u, theta_{i(b)} -= u.
    fn update_pair(&mut self, a: Var, b: Var, va: f64, vb: f64) {
        let (i, j) = (a.i, b.i);
        let mut rho = self.q(i, i) + self.q(j, j) - 2.0 * self.q(i, j);
        if rho <= 0.0 {
            rho = 1e-12;
        }
        let mut u = (va - vb) / rho;
        // Box limits: moving u changes lambda(a) by u*sign_a, lambda(b) by -u*sign_b.
        let cap_a = if a.sign > 0.0 {
            self.c - self.lambda(a)
        } else {
            self.lambda(a)
        };
        let cap_b = if b.sign > 0.0 {
            self.lambda(b)
        } else {
            self.c - self.lambda(b)
        };
        u = u.min(cap_a).min(cap_b);
        if u <= 0.0 {
            return;
        }
        // Clipped multipliers snap to their exact bound; otherwise float
        // residue leaves them one ulp short and the pair stalls.
        let hit_a = u >= cap_a;
        let hit_b = u >= cap_b;
        if a.sign > 0.0 {
            self.lambda_plus[i] = if hit_a { self.c } else { self.lambda_plus[i] + u };
        } else {
            self.lambda_minus[i] = if hit_a { 0.0 } else { self.lambda_minus[i] - u };
        }
        if b.sign > 0.0 {
            self.lambda_plus[j] = if hit_b { 0.0 } else { self.lambda_plus[j] - u };
        } else {
            self.lambda_minus[j] = if hit_b { self.c } else { self.lambda_minus[j] + u };
        }
        // theta_i += u, theta_j -= u, so f += u * (Q_i - Q_j).
        let n = self.y.len();
        for k in 0..n {
            self.f[k] += u * (self.gram[i * n + k] - self.gram[j * n + k]);
        }
    }

    /// Active-set polish. Classifies points by their residuals into bound
    /// and free sets (promoting a few of the worst violators per round),
    /// solves the free-set KKT system, and moves along that direction with
    /// an exact one-dimensional line search clipped at the box. Falls back
    /// to a projected-gradient direction when the face system is
    /// inconsistent. The caller decides success through the duality-gap
    /// certificate.
    fn polish(&mut self, _tolerance: f64) {
        use nalgebra::{DMatrix, DVector};
        let n = self.y.len();
        let slack = 1e-9 * (1.0 + self.y.iter().fold(0.0f64, |m, v| m.max(v.abs())));
        let bound_snap = 1e-10 * self.c.max(1.0);
        let promotions_per_round = 8;
        let mut theta = self.thetas();
        let mut f = vec![0.0; n];
        for k in 0..n {
            f[k] = (0..n).map(|j| self.q(k, j) * theta[j]).sum();
        }

        let rounds = 200 + 2 * n;
        for _ in 0..rounds {
            for t in theta.iter_mut() {
                if (*t - self.c).abs() <= bound_snap {
                    *t = self.c;
                } else if (*t + self.c).abs() <= bound_snap {
                    *t = -self.c;
                } else if t.abs() <= bound_snap {
                    *t = 0.0;
                }
            }
            let alpha = self.intercept_from(&theta, &f);

            // Interior coordinates are free; bound coordinates violating
            // their side of the tube queue for promotion, worst first.
            let mut free: Vec<usize> = Vec::new();
            let mut sign: Vec<f64> = Vec::new();
            let mut candidates: Vec<(f64, usize, f64)> = Vec::new();
            let mut violation = 0.0f64;
            for i in 0..n {
                let r = self.y[i] - f[i] - alpha;
                if theta[i] == self.c {
                    if r < self.eps - slack {
                        candidates.push((self.eps - r, i, 1.0));
                    }
                } else if theta[i] == -self.c {
                    if r > -self.eps + slack {
                        candidates.push((r + self.eps, i, -1.0));
                    }
                } else if theta[i] == 0.0 {
                    if r > self.eps + slack {
                        candidates.push((r - self.eps, i, 1.0));
                    } else if r < -self.eps - slack {
                        candidates.push((-r - self.eps, i, -1.0));
                    }
                } else if theta[i] > 0.0 {
                    free.push(i);
                    sign.push(1.0);
                    violation = violation.max((r - self.eps).abs());
                } else {
                    free.push(i);
                    sign.push(-1.0);
                    violation = violation.max((r + self.eps).abs());
                }
            }
            candidates.sort_by(|a, b| b.0.partial_cmp(&a.0).expect("finite violations"));
            for &(v, i, s) in candidates.iter().take(promotions_per_round) {
                violation = violation.max(v);
                free.push(i);
                sign.push(s);
            }
            if free.is_empty() || violation <= slack {
                break;
            }

            // Bordered KKT system for the face:
            // Q_FF theta_F + alpha = y - eps*s - Q_FB theta_B,
            // sum(theta_F) = -sum(theta_B).
            let solve_target = |free: &[usize], sign: &[f64], theta: &[f64], f: &[f64]| {
                let m = free.len();
                let mut mat = DMatrix::<f64>::zeros(m + 1, m + 1);
                let mut rhs = DVector::<f64>::zeros(m + 1);
                let free_sum: f64 = free.iter().map(|&i| theta[i]).sum();
                let total: f64 = theta.iter().sum();
                let bound_sum = total - free_sum;
                for (a, &fa) in free.iter().enumerate() {
                    for (b, &fb) in free.iter().enumerate() {
                        mat[(a, b)] = self.q(fa, fb);
                    }
                    mat[(a, m)] = 1.0;
                    mat[(m, a)] = 1.0;
                    let bound_part: f64 = f[fa]
                        - free
                            .iter()
                            .map(|&fb| self.q(fa, fb) * theta[fb])
                            .sum::<f64>();
                    rhs[a] = self.y[fa] - self.eps * sign[a] - bound_part;
                }
                rhs[m] = -bound_sum;
                let svd = mat.svd(true, true);
                let sol = svd.solve(&rhs, 1e-12).ok()?;
                let mut target: Vec<f64> = (0..m).map(|a| sol[a]).collect();
                let drift = target.iter().sum::<f64>() + bound_sum;
                let fix = drift / m as f64;
                for t in target.iter_mut() {
                    *t -= fix;
                }
                Some(target)
            };

            // Newton direction with stuck-coordinate removal.
            let mut direction: Option<Vec<f64>> = None;
            loop {
                let Some(target) = solve_target(&free, &sign, &theta, &f) else {
                    break;
                };
                let mut stuck: Vec<usize> = Vec::new();
                for (a, &fa) in free.iter().enumerate() {
                    let (lo, hi) = if sign[a] > 0.0 { (0.0, self.c) } else { (-self.c, 0.0) };
                    let d = target[a] - theta[fa];
                    if (theta[fa] >= hi && d > 0.0) || (theta[fa] <= lo && d < 0.0) {
                        stuck.push(a);
                    }
                }
                if stuck.is_empty() {
                    direction = Some(
                        free.iter()
                            .enumerate()
                            .map(|(a, &fa)| target[a] - theta[fa])
                            .collect(),
                    );
                    break;
                }
                for &a in stuck.iter().rev() {
                    free.remove(a);
                    sign.remove(a);
                }
                if free.is_empty() {
                    break;
                }
            }
            if free.is_empty() {
                continue;
            }

            // Face gradient of the dual (the constraint multiplier cancels
            // along zero-sum directions).
            let grad: Vec<f64> = free
                .iter()
                .zip(&sign)
                .map(|(&fa, &s)| f[fa] + self.eps * s - self.y[fa])
                .collect();

            let descent = |d: &[f64]| -> f64 { grad.iter().zip(d).map(|(g, d)| g * d).sum() };

            let mut dir = match direction {
                Some(d) if descent(&d) < 0.0 => d,
                _ => {
                    // Projected gradient on the face: remove the mean so the
                    // direction keeps the equality constraint, flip sign.
                    let mean = grad.iter().sum::<f64>() / grad.len() as f64;
                    grad.iter().map(|g| -(g - mean)).collect()
                }
            };
            // Zero out components that immediately leave the box.
            for (a, &fa) in free.iter().enumerate() {
                let (lo, hi) = if sign[a] > 0.0 { (0.0, self.c) } else { (-self.c, 0.0) };
                if (theta[fa] >= hi && dir[a] > 0.0) || (theta[fa] <= lo && dir[a] < 0.0) {
                    dir[a] = 0.0;
                }
            }
            let slope = descent(&dir);
            if slope >= -1e-15 {
                break;
            }
            // Exact line search: t* = -g.d / (d.Q.d), clipped at the box.
            let mut curvature = 0.0;
            for (a, &fa) in free.iter().enumerate() {
                for (b, &fb) in free.iter().enumerate() {
                    curvature += dir[a] * dir[b] * self.q(fa, fb);
                }
            }
            let mut t_max = f64::INFINITY;
            for (a, &fa) in free.iter().enumerate() {
                let (lo, hi) = if sign[a] > 0.0 { (0.0, self.c) } else { (-self.c, 0.0) };
                if dir[a] > 0.0 {
                    t_max = t_max.min((hi - theta[fa]) / dir[a]);
                } else if dir[a] < 0.0 {
                    t_max = t_max.min((lo - theta[fa]) / dir[a]);
                }
            }
            let t_star = if curvature > 0.0 {
                -slope / curvature
            } else {
                f64::INFINITY
            };
            let t = t_star.min(t_max);
            if !(t > 0.0) || !t.is_finite() {
                break;
            }
            for (a, &fa) in free.iter().enumerate() {
                let d = t * dir[a];
                if d != 0.0 {
                    theta[fa] += d;
                    for k in 0..n {
                        f[k] += d * self.q(fa, k);
                    }
                }
            }
        }

        // Write the polished state back as complementary split multipliers.
        for i in 0..n {
            self.lambda_plus[i] = theta[i].max(0.0);
            self.lambda_minus[i] = (-theta[i]).max(0.0);
            self.f[i] = f[i];
        }
    }

    /// Intercept from an explicit (theta, f) state.
    fn intercept_from(&self, theta: &[f64], f: &[f64]) -> f64 {
        let mut m = f64::NEG_INFINITY;
        let mut big_m = f64::INFINITY;
        for i in 0..self.y.len() {
            // Plus-side variable: lambda_plus = max(theta, 0).
            let lp = theta[i].max(0.0);
            let lm = (-theta[i]).max(0.0);
            let vp = self.y[i] - self.eps - f[i];
            let vm = self.y[i] + self.eps - f[i];
            if lp < self.c {
                m = m.max(vp);
            }
            if lp > 0.0 {
                big_m = big_m.min(vp);
            }
            if lm > 0.0 {
                m = m.max(vm);
            }
            if lm < self.c {
                big_m = big_m.min(vm);
            }
        }
        match (m.is_finite(), big_m.is_finite()) {
            (true, true) => 0.5 * (m + big_m),
            (true, false) => m,
            (false, true) => big_m,
            (false, false) => 0.0,
        }
    }

    /// Midpoint of the feasible interval for the equality-constraint
    /// multiplier, which is the primal intercept.
    fn intercept(&self) -> f64 {
        let (low, up) = self.select();
        match (low, up) {
            (Some((_, m)), Some((_, big_m))) => 0.5 * (m + big_m),
            (Some((_, m)), None) => m,
            (None, Some((_, big_m))) => big_m,
            (None, None) => 0.0,
        }
    }

    /// Primal objective, recomputing beta . x_i exactly so that the
    /// certificate is not affected by incremental-update drift in `f`.
    fn primal(&self, beta: &[f64], alpha: f64) -> f64 {
        primal_objective(&self.rows, &self.y, beta, alpha, self.c, self.eps)
    }

    /// Value of the dual objective being minimized; -dual_value lower-bounds
    /// the primal optimum, so primal + dual_value is the duality gap.
    fn dual_value(&self, beta: &[f64]) -> f64 {
        let quad: f64 = 0.5 * beta.iter().map(|b| b * b).sum::<f64>();
        let mut rest = 0.0;
        for i in 0..self.y.len() {
            let theta = self.lambda_plus[i] - self.lambda_minus[i];
            rest += self.eps * (self.lambda_plus[i] + self.lambda_minus[i]) - self.y[i] * theta;
        }
        quad + rest
    }

    fn thetas(&self) -> Vec<f64> {
        self.lambda_plus
            .iter()
            .zip(&self.lambda_minus)
            .map(|(p, m)| p - m)
            .collect()
    }
}

fn sparse_dot(a: &[(u32, f64)], b: &[(u32, f64)]) -> f64 {
    let mut out = 0.0;
    let (mut ia, mut ib) = (0, 0);
    while ia < a.len() && ib < b.len() {
        match a[ia].0.cmp(&b[ib].0) {
            std::cmp::Ordering::Less => ia += 1,
            std::cmp::Ordering::Greater => ib += 1,
            std::cmp::Ordering::Equal => {
                out += a[ia].1 * b[ib].1;
                ia += 1;
                ib += 1;
            }
        }
    }
    out
}

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

use super::ols::OlsCore;

/// Classical homoskedastic standard errors: sigma^2 (X'X)^-1 with
/// sigma^2 = SSR / (n - K), where `k_absorbed` counts parameters removed
/// by fixed-effect demeaning.
pub fn classical_se(core: &OlsCore, k_absorbed: usize) -> Result<Vec<f64>> {
    let dof = dof(core, k_absorbed)?;
    let ssr: f64 = core.residuals.iter().map(|e| e * e).sum();
    let sigma2 = ssr / dof;
    Ok((0..core.k)
        .map(|j| (sigma2 * core.xtx_inv[(j, j)]).max(0.0).sqrt())
        .collect())
}

/// HC1 heteroskedasticity-robust standard errors:
/// (X'X)^-1 [sum_i e_i^2 x_i x_i'] (X'X)^-1 scaled by n / (n - K).
pub fn robust_se(core: &OlsCore, x: &DMatrix<f64>, k_absorbed: usize) -> Result<Vec<f64>> {
    let dof = dof(core, k_absorbed)?;
    let n = core.n;
    let mut meat = DMatrix::<f64>::zeros(core.k, core.k);
    for i in 0..n {
        let e2 = core.residuals[i] * core.residuals[i];
        let xi = x.row(i);
        for a in 0..core.k {
            for b in 0..core.k {
                meat[(a, b)] += e2 * xi[a] * xi[b];
            }
        }
    }
    let v = &core.xtx_inv * meat * &core.xtx_inv * (n as f64 / dof);
    Ok((0..core.k).map(|j| v[(j, j)].max(0.0).sqrt()).collect())
}

/// Cluster-robust sandwich standard errors:
/// (X'X)^-1 [sum_g X_g' e_g e_g' X_g] (X'X)^-1 with the small-sample factor
/// [G/(G-1)] [(n-1)/(n-K)]. With singleton clusters this reduces exactly to
/// HC1. `k_absorbed` counts fixed-effect parameters removed by demeaning.
pub fn cluster_se(
    core: &OlsCore,
    x: &DMatrix<f64>,
    clusters: &[u32],
    n_clusters: usize,
    k_absorbed: usize,
) -> Result<Vec<f64>> {
    if clusters.len() != core.n {
        return Err(Error::data("cluster labels do not match row count"));
    }
    if n_clusters < 2 {
        return Err(Error::data(
            "clustered standard errors require at least two clusters",
        ));
    }
    let dof = dof(core, k_absorbed)?;
    // Score sums per cluster: s_g = X_g' e_g.
    let mut scores = vec![DVector::<f64>::zeros(core.k); n_clusters];
    for i in 0..core.n {
        let g = clusters[i] as usize;
        let e = core.residuals[i];
        for j in 0..core.k {
            scores[g][j] += x[(i, j)] * e;
        }
    }
    let mut meat = DMatrix::<f64>::zeros(core.k, core.k);
    for s in &scores {
        meat += s * s.transpose();
    }
    let g = n_clusters as f64;
    let n = core.n as f64;
    let factor = (g / (g - 1.0)) * ((n - 1.0) / dof);
    let v = &core.xtx_inv * meat * &core.xtx_inv * factor;
    Ok((0..core.k).map(|j| v[(j, j)].max(0.0).sqrt()).collect())
}

fn dof(core: &OlsCore, k_absorbed: usize) -> Result<f64> {
    let k_total = core.k + k_absorbed;
    if core.n <= k_total {
        return Err(Error::numeric(format!(
            "no residual degrees of freedom: n = {}, K = {k_total}",
            core.n
        )));
    }
    Ok((core.n - k_total) as f64)
}

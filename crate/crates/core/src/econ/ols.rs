use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Coefficients, residuals, and the (X'X)^-1 factor needed by the sandwich
/// variance estimators.
#[derive(Debug, Clone)]
pub struct OlsCore {
    pub beta: Vec<f64>,
    pub residuals: Vec<f64>,
    pub fitted: Vec<f64>,
    pub xtx_inv: DMatrix<f64>,
    pub n: usize,
    pub k: usize,
}

/// Least squares via Householder QR. Rank deficiency is detected with a
/// column-pivoted QR first and reported with the names of the dependent
/// columns.
pub fn ols(y: &[f64], x: &DMatrix<f64>, column_names: &[String]) -> Result<OlsCore> {
    let n = x.nrows();
    let k = x.ncols();
    if y.len() != n {
        return Err(Error::data("outcome and design matrix row counts differ"));
    }
    if n < k {
        return Err(Error::numeric(format!(
            "{n} rows cannot identify {k} coefficients"
        )));
    }
    if y.iter().any(|v| !v.is_finite()) || x.iter().any(|v| !v.is_finite()) {
        return Err(Error::numeric("non-finite value in regression inputs"));
    }

    // Rank check: column-pivoted QR pushes dependent columns to the tail.
    let pivoted = x.clone().col_piv_qr();
    let r_piv = pivoted.r();
    let scale = r_piv[(0, 0)].abs().max(f64::MIN_POSITIVE);
    let rank = (0..k)
        .take_while(|&i| r_piv[(i, i)].abs() > scale * 1e-12)
        .count();
    if rank < k {
        let perm = pivoted.p();
        let mut order: Vec<usize> = (0..k).collect();
        // PermutationSequence applies column swaps in sequence.
        let mut order_matrix = DMatrix::<f64>::zeros(1, k);
        for (i, v) in order_matrix.iter_mut().enumerate() {
            *v = i as f64;
        }
        perm.permute_columns(&mut order_matrix);
        for (slot, v) in order.iter_mut().zip(order_matrix.iter()) {
            *slot = *v as usize;
        }
        let dependent: Vec<&str> = order[rank..]
            .iter()
            .map(|&i| column_names.get(i).map(String::as_str).unwrap_or("?"))
            .collect();
        return Err(Error::numeric(format!(
            "design matrix is rank deficient (rank {rank} of {k}); dependent columns: {}",
            dependent.join(", ")
        )));
    }

    let yv = DVector::from_column_slice(y);
    let qr = x.clone().qr();
    let qty = qr.q().transpose() * &yv;
    let r = qr.r();
    let beta = r
        .solve_upper_triangular(&qty)
        .ok_or_else(|| Error::numeric("triangular solve failed"))?;

    let fitted = x * &beta;
    let residuals: Vec<f64> = yv
        .iter()
        .zip(fitted.iter())
        .map(|(y, f)| y - f)
        .collect();

    // (X'X)^-1 = R^-1 R^-T from the same factorization.
    let r_inv = r
        .try_inverse()
        .ok_or_else(|| Error::numeric("R factor not invertible"))?;
    let xtx_inv = &r_inv * r_inv.transpose();

    Ok(OlsCore {
        beta: beta.iter().copied().collect(),
        residuals,
        fitted: fitted.iter().copied().collect(),
        xtx_inv,
        n,
        k,
    })
}

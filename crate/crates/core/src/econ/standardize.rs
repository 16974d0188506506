use crate::error::{Error, Result};

/// Sample standard deviation (n - 1 denominator).
pub fn sample_sd(values: &[f64]) -> f64 {
    if values.len() < 2 {
        return 0.0;
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let ss: f64 = values.iter().map(|v| (v - mean) * (v - mean)).sum();
    (ss / (n - 1.0)).sqrt()
}

/// Divide a column by its sample standard deviation. No centering: fixed
/// effects absorb location, and leaving the mean intact keeps levels
/// interpretable in specs without fixed effects.
pub fn standardize(name: &str, values: &[f64]) -> Result<Vec<f64>> {
    let sd = sample_sd(values);
    if !(sd > 0.0) || !sd.is_finite() {
        return Err(Error::numeric(format!(
            "column {name:?} has zero or undefined standard deviation"
        )));
    }
    Ok(values.iter().map(|v| v / sd).collect())
}

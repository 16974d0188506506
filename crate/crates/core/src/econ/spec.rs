use std::fmt::Write as _;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::frame::Frame;
use super::ols::ols;
use super::se::{classical_se, cluster_se, robust_se};
use super::standardize::standardize;
use super::within::within_transform;

/// Which variance estimator a spec requests.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SeKind {
    Classical,
    /// HC1 sandwich.
    Robust,
    Clustered,
}

/// Declarative description of one regression.
///
/// `fe_factors` holds zero, one, or two factor column names; a name of the
/// form `"a*b"` denotes the interaction of two factor columns (used for
/// institution-by-year effects). `cluster` selects cluster-robust errors;
/// otherwise `robust` selects HC1; otherwise errors are classical.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RegressionSpec {
    pub outcome: String,
    pub regressors: Vec<String>,
    #[serde(default)]
    pub fe_factors: Vec<String>,
    #[serde(default)]
    pub cluster: Option<String>,
    #[serde(default)]
    pub robust: bool,
    /// Scale each regressor by its sample standard deviation.
    #[serde(default)]
    pub standardize: bool,
}

/// Estimates, inference, and enough metadata to render a table.
#[derive(Debug, Clone)]
pub struct RegressionResult {
    pub spec_outcome: String,
    pub names: Vec<String>,
    pub coef: Vec<f64>,
    pub se: Vec<f64>,
    pub t_stat: Vec<f64>,
    pub r2: f64,
    pub n: usize,
    pub residuals: Vec<f64>,
    pub se_kind: SeKind,
    pub cluster_column: Option<String>,
    pub n_clusters: Option<usize>,
    pub fe_description: String,
    pub k_absorbed: usize,
}

/// Overall R-squared on the untransformed outcome: fixed-effect
/// contributions count as explained variation.
pub fn r_squared(y_original: &[f64], residuals: &[f64]) -> Result<f64> {
    let n = y_original.len() as f64;
    let mean = y_original.iter().sum::<f64>() / n;
    let sst: f64 = y_original.iter().map(|v| (v - mean) * (v - mean)).sum();
    if !(sst > 0.0) {
        return Err(Error::numeric("outcome has zero variance; R^2 undefined"));
    }
    let ssr: f64 = residuals.iter().map(|e| e * e).sum();
    Ok(1.0 - ssr / sst)
}

/// Run one spec end to end: listwise-delete rows with missing values,
/// standardize, absorb fixed effects, estimate, and attach the requested
/// standard errors.
pub fn run_spec(frame: &Frame, spec: &RegressionSpec) -> Result<RegressionResult> {
    for name in std::iter::once(&spec.outcome).chain(&spec.regressors) {
        if !frame.has_column(name) {
            return Err(Error::data(format!("missing column {name:?}")));
        }
    }
    if spec.fe_factors.len() > 2 {
        return Err(Error::data("at most two fixed-effect factors are supported"));
    }
    let y_all = frame.numeric(&spec.outcome)?;
    let reg_all: Vec<&[f64]> = spec
        .regressors
        .iter()
        .map(|r| frame.numeric(r))
        .collect::<Result<_>>()?;

    // Listwise deletion over the outcome and regressors.
    let keep: Vec<usize> = (0..y_all.len())
        .filter(|&i| y_all[i].is_finite() && reg_all.iter().all(|c| c[i].is_finite()))
        .collect();
    if keep.is_empty() {
        return Err(Error::data("no complete rows for this specification"));
    }
    let y: Vec<f64> = keep.iter().map(|&i| y_all[i]).collect();
    let mut regressors: Vec<Vec<f64>> = reg_all
        .iter()
        .map(|c| keep.iter().map(|&i| c[i]).collect())
        .collect();

    if spec.standardize {
        for (name, col) in spec.regressors.iter().zip(regressors.iter_mut()) {
            *col = standardize(name, col)?;
        }
    }

    let factors: Vec<(Vec<u32>, usize)> = spec
        .fe_factors
        .iter()
        .map(|name| factor_for(frame, name, &keep))
        .collect::<Result<_>>()?;

    let (names, x_cols, y_used, k_absorbed) = if factors.is_empty() {
        let mut cols = vec![vec![1.0; y.len()]];
        cols.extend(regressors);
        let mut names = vec!["(intercept)".to_owned()];
        names.extend(spec.regressors.iter().cloned());
        (names, cols, y, 0usize)
    } else {
        let mut cols = Vec::with_capacity(regressors.len() + 1);
        cols.push(y);
        cols.extend(regressors);
        within_transform(&mut cols, &factors)?;
        let y_used = cols.remove(0);
        // One factor absorbs all its levels; a second shares the grand mean.
        let k_absorbed = factors
            .iter()
            .enumerate()
            .map(|(i, (_, g))| if i == 0 { *g } else { g - 1 })
            .sum();
        (spec.regressors.clone(), cols, y_used, k_absorbed)
    };

    let n = y_used.len();
    let k = x_cols.len();
    let mut x = DMatrix::<f64>::zeros(n, k);
    for (j, col) in x_cols.iter().enumerate() {
        for (i, v) in col.iter().enumerate() {
            x[(i, j)] = *v;
        }
    }
    let core = ols(&y_used, &x, &names)?;

    let (se, se_kind, n_clusters) = if let Some(cluster_col) = &spec.cluster {
        let (codes, g) = factor_for(frame, cluster_col, &keep)?;
        (
            cluster_se(&core, &x, &codes, g, k_absorbed)?,
            SeKind::Clustered,
            Some(g),
        )
    } else if spec.robust {
        (robust_se(&core, &x, k_absorbed)?, SeKind::Robust, None)
    } else {
        (classical_se(&core, k_absorbed)?, SeKind::Classical, None)
    };

    let y_original: Vec<f64> = keep.iter().map(|&i| y_all[i]).collect();
    let r2 = r_squared(&y_original, &core.residuals)?;
    let t_stat: Vec<f64> = core
        .beta
        .iter()
        .zip(&se)
        .map(|(b, s)| if *s > 0.0 { b / s } else { 0.0 })
        .collect();

    Ok(RegressionResult {
        spec_outcome: spec.outcome.clone(),
        names,
        coef: core.beta,
        se,
        t_stat,
        r2,
        n,
        residuals: core.residuals,
        se_kind,
        cluster_column: spec.cluster.clone(),
        n_clusters,
        fe_description: if spec.fe_factors.is_empty() {
            "none".to_owned()
        } else {
            spec.fe_factors.join(", ")
        },
        k_absorbed,
    })
}

/// Factor codes for a plain column or an `a*b` interaction, restricted to
/// the kept rows and recoded densely.
fn factor_for(frame: &Frame, name: &str, keep: &[usize]) -> Result<(Vec<u32>, usize)> {
    let (codes_all, _) = if let Some((a, b)) = name.split_once('*') {
        frame.interacted_codes(a.trim(), b.trim())?
    } else {
        frame.factor_codes(name)?
    };
    let subset: Vec<u32> = keep.iter().map(|&i| codes_all[i]).collect();
    let mut levels: Vec<u32> = subset.clone();
    levels.sort_unstable();
    levels.dedup();
    let index: std::collections::BTreeMap<u32, u32> = levels
        .iter()
        .enumerate()
        .map(|(i, v)| (*v, i as u32))
        .collect();
    Ok((subset.iter().map(|v| index[v]).collect(), levels.len()))
}

fn stars(t: f64) -> &'static str {
    let a = t.abs();
    if a > 2.5758293035489004 {
        "***"
    } else if a > 1.959963984540054 {
        "**"
    } else if a > 1.6448536269514722 {
        "*"
    } else {
        ""
    }
}

impl RegressionResult {
    /// Plain-text table: coefficient with significance stars, t-statistic
    /// in brackets, then the footer rows.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let width = self
            .names
            .iter()
            .map(|n| n.len())
            .max()
            .unwrap_or(8)
            .max(18);
        let _ = writeln!(out, "outcome: {}", self.spec_outcome);
        let _ = writeln!(out, "{}", "-".repeat(width + 26));
        for i in 0..self.names.len() {
            let coef = format!("{:.4}{}", self.coef[i], stars(self.t_stat[i]));
            let _ = writeln!(
                out,
                "{:<width$}  {:>12}  [{:.2}]",
                self.names[i], coef, self.t_stat[i]
            );
        }
        let _ = writeln!(out, "{}", "-".repeat(width + 26));
        let _ = writeln!(out, "{:<width$}  {:>12}", "observations", self.n);
        let _ = writeln!(out, "{:<width$}  {:>12.3}", "r-squared", self.r2);
        let _ = writeln!(out, "fixed effects: {}", self.fe_description);
        let se_line = match self.se_kind {
            SeKind::Classical => "classical".to_owned(),
            SeKind::Robust => "robust (HC1 sandwich)".to_owned(),
            SeKind::Clustered => format!(
                "clustered by {} ({} clusters)",
                self.cluster_column.as_deref().unwrap_or("?"),
                self.n_clusters.unwrap_or(0)
            ),
        };
        let _ = writeln!(out, "standard errors: {se_line}");
        let _ = writeln!(out, "stars: * p<0.10, ** p<0.05, *** p<0.01");
        out
    }

    /// CSV rendering with one row per coefficient.
    pub fn render_csv(&self) -> String {
        let mut out = String::from("term,coef,se,t,stars,n,r2\n");
        for i in 0..self.names.len() {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{}",
                self.names[i],
                self.coef[i],
                self.se[i],
                self.t_stat[i],
                stars(self.t_stat[i]),
                self.n,
                self.r2
            );
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn frame_from(csv: &str) -> Frame {
        Frame::from_csv_reader(csv.as_bytes()).unwrap()
    }

    #[test]
    fn perfect_fit_r2_one() {
        assert!((r_squared(&[1.0, 2.0, 3.0], &[0.0, 0.0, 0.0]).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn intercept_only_r2_zero() {
        let y = [1.0, 2.0, 3.0];
        let mean = 2.0;
        let resid: Vec<f64> = y.iter().map(|v| v - mean).collect();
        assert!(r_squared(&y, &resid).unwrap().abs() < 1e-15);
    }

    #[test]
    fn missing_column_named() {
        let frame = frame_from("y,x\n1,2\n2,3\n");
        let spec = RegressionSpec {
            outcome: "y".into(),
            regressors: vec!["zz".into()],
            fe_factors: vec![],
            cluster: None,
            robust: false,
            standardize: false,
        };
        let err = run_spec(&frame, &spec).unwrap_err();
        assert!(err.to_string().contains("zz"), "{err}");
    }

    #[test]
    fn simple_line_with_intercept() {
        let frame = frame_from("y,x\n1,0\n3,1\n5,2\n7,3\n");
        let spec = RegressionSpec {
            outcome: "y".into(),
            regressors: vec!["x".into()],
            fe_factors: vec![],
            cluster: None,
            robust: false,
            standardize: false,
        };
        let res = run_spec(&frame, &spec).unwrap();
        assert_eq!(res.names[0], "(intercept)");
        assert!((res.coef[0] - 1.0).abs() < 1e-10);
        assert!((res.coef[1] - 2.0).abs() < 1e-10);
        assert!((res.r2 - 1.0).abs() < 1e-10);
    }

    #[test]
    fn standardization_equivariance() {
        let frame = frame_from(
            "y,x,g\n1.0,0.5,a\n2.1,1.5,a\n3.2,2.0,b\n3.9,3.5,b\n5.4,4.0,c\n6.1,5.5,c\n",
        );
        let raw_spec = RegressionSpec {
            outcome: "y".into(),
            regressors: vec!["x".into()],
            fe_factors: vec![],
            cluster: None,
            robust: true,
            standardize: false,
        };
        let std_spec = RegressionSpec {
            standardize: true,
            ..raw_spec.clone()
        };
        let raw = run_spec(&frame, &raw_spec).unwrap();
        let std = run_spec(&frame, &std_spec).unwrap();
        let sd = super::super::standardize::sample_sd(frame.numeric("x").unwrap());
        assert!((std.coef[1] - raw.coef[1] * sd).abs() < 1e-10);
        assert!((std.t_stat[1] - raw.t_stat[1]).abs() < 1e-10);
    }

    #[test]
    fn listwise_deletion_drops_missing_rows() {
        let frame = frame_from("y,x\n1,0\n,1\n5,2\n7,3\n");
        let spec = RegressionSpec {
            outcome: "y".into(),
            regressors: vec!["x".into()],
            fe_factors: vec![],
            cluster: None,
            robust: false,
            standardize: false,
        };
        let res = run_spec(&frame, &spec).unwrap();
        assert_eq!(res.n, 3);
    }
}

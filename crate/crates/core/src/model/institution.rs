use std::fs;
use std::path::Path;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::text::{DocVector, Vocabulary};

use super::grid::grid_search;
use super::label::LabeledExample;
use super::svr::{train_svr, SvrConfig};

const MODEL_FORMAT: &str = "proxy-align-model-v1";

/// A trained preference model for one institution over one training window.
#[derive(Debug, Clone)]
pub struct InstitutionModel {
    pub institution_id: String,
    pub alpha: f64,
    /// Dense coefficient vector, one entry per vocabulary phrase.
    pub beta: Vec<f64>,
    pub vocab_version: String,
    pub window: (NaiveDate, NaiveDate),
    pub n_train: usize,
    pub cv_mae: f64,
    pub best_c: f64,
}

/// One row of the exported coefficient table.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CoefficientRow {
    pub phrase: String,
    /// Coefficient scaled by 10,000 for readability.
    pub coefficient_x10k: f64,
}

impl InstitutionModel {
    /// Predicted alignment for a document vector built on this model's
    /// vocabulary: `clamp(alpha + beta . x, 0, 1)`.
    pub fn predict_align(&self, x: &DocVector, vocab: &Vocabulary) -> Result<f64> {
        if vocab.version() != self.vocab_version {
            return Err(Error::data(format!(
                "vocabulary mismatch: model built on {}, vector built on {}",
                self.vocab_version,
                vocab.version()
            )));
        }
        Ok((self.alpha + x.dot(&self.beta)).clamp(0.0, 1.0))
    }

    /// Mean absolute error of clamped predictions on a held-out set.
    pub fn evaluate_mae(&self, heldout: &[LabeledExample], vocab: &Vocabulary) -> Result<f64> {
        if heldout.is_empty() {
            return Err(Error::data("cannot evaluate on an empty held-out set"));
        }
        let mut total = 0.0;
        for ex in heldout {
            total += (ex.y - self.predict_align(&ex.x, vocab)?).abs();
        }
        Ok(total / heldout.len() as f64)
    }

    /// Full coefficient table, scaled by 10,000 and sorted by absolute
    /// magnitude descending (phrase order breaks exact ties).
    pub fn export_coefficients(&self, phrases: &[String]) -> Vec<CoefficientRow> {
        let mut rows: Vec<CoefficientRow> = self
            .beta
            .iter()
            .zip(phrases)
            .map(|(b, p)| CoefficientRow {
                phrase: p.clone(),
                coefficient_x10k: b * 10_000.0,
            })
            .collect();
        rows.sort_by(|a, b| {
            b.coefficient_x10k
                .abs()
                .partial_cmp(&a.coefficient_x10k.abs())
                .expect("finite coefficients")
                .then_with(|| a.phrase.cmp(&b.phrase))
        });
        rows
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_json())?;
        Ok(())
    }

    pub fn to_json(&self) -> String {
        let sparse: Vec<(u32, f64)> = self
            .beta
            .iter()
            .enumerate()
            .filter(|(_, b)| **b != 0.0)
            .map(|(i, b)| (i as u32, *b))
            .collect();
        let file = ModelFile {
            format: MODEL_FORMAT.to_owned(),
            institution_id: self.institution_id.clone(),
            alpha: self.alpha,
            vocab_version: self.vocab_version.clone(),
            window_start: self.window.0,
            window_end: self.window.1,
            n_train: self.n_train,
            cv_mae: self.cv_mae,
            best_c: self.best_c,
            k: self.beta.len() as u32,
            beta: sparse,
        };
        serde_json::to_string(&file).expect("model serialization")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let file: ModelFile =
            serde_json::from_str(s).map_err(|e| Error::parse(format!("model file: {e}")))?;
        if file.format != MODEL_FORMAT {
            return Err(Error::parse(format!(
                "unsupported model format {:?}",
                file.format
            )));
        }
        let mut beta = vec![0.0; file.k as usize];
        for (i, v) in file.beta {
            let slot = beta
                .get_mut(i as usize)
                .ok_or_else(|| Error::parse("beta index out of range"))?;
            *slot = v;
        }
        Ok(InstitutionModel {
            institution_id: file.institution_id,
            alpha: file.alpha,
            beta,
            vocab_version: file.vocab_version,
            window: (file.window_start, file.window_end),
            n_train: file.n_train,
            cv_mae: file.cv_mae,
            best_c: file.best_c,
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        InstitutionModel::from_json(&fs::read_to_string(path)?)
    }
}

#[derive(Serialize, Deserialize)]
struct ModelFile {
    format: String,
    institution_id: String,
    alpha: f64,
    vocab_version: String,
    window_start: NaiveDate,
    window_end: NaiveDate,
    n_train: usize,
    cv_mae: f64,
    best_c: f64,
    k: u32,
    beta: Vec<(u32, f64)>,
}

/// Cross-validate the regularization strength, then train on the full
/// window and package the result.
pub fn fit_institution(
    institution_id: &str,
    examples: &[LabeledExample],
    vocab: &Vocabulary,
    window: (NaiveDate, NaiveDate),
    config: &SvrConfig,
) -> Result<InstitutionModel> {
    let search = grid_search(examples, vocab.len(), config)?;
    let fit = train_svr(examples, vocab.len(), search.best_c, config)?;
    Ok(InstitutionModel {
        institution_id: institution_id.to_owned(),
        alpha: fit.alpha,
        beta: fit.beta,
        vocab_version: vocab.version().to_owned(),
        window,
        n_train: examples.len(),
        cv_mae: search.cv_mae,
        best_c: search.best_c,
    })
}

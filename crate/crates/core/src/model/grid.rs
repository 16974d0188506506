use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

use super::label::LabeledExample;
use super::svr::{train_svr, SvrConfig};

/// Outcome of the cross-validated regularization search.
#[derive(Debug, Clone)]
pub struct GridSearchResult {
    pub best_c: f64,
    pub cv_mae: f64,
    /// Mean squared error of the winning grid point, logged alongside MAE.
    pub cv_mse: f64,
    /// (c, mae, mse) for every grid point, in ascending c order.
    pub table: Vec<(f64, f64, f64)>,
}

/// K-fold grid search over `config.c_grid`, selecting the value with the
/// lowest pooled out-of-fold mean absolute error. Ties break toward the
/// smaller c (stronger regularization). Fold assignment is a seeded
/// shuffle, so results are reproducible for a given `config.seed`.
pub fn grid_search(
    examples: &[LabeledExample],
    dim: usize,
    config: &SvrConfig,
) -> Result<GridSearchResult> {
    config.validate()?;
    if examples.len() < config.folds {
        return Err(Error::data(format!(
            "need at least {} examples for {}-fold search, got {}",
            config.folds,
            config.folds,
            examples.len()
        )));
    }
    let mut order: Vec<usize> = (0..examples.len()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    order.shuffle(&mut rng);
    let fold_of: Vec<usize> = {
        let mut f = vec![0; examples.len()];
        for (pos, &idx) in order.iter().enumerate() {
            f[idx] = pos % config.folds;
        }
        f
    };

    let mut grid: Vec<f64> = config.c_grid.clone();
    grid.sort_by(|a, b| a.partial_cmp(b).expect("finite grid"));
    grid.dedup();

    let mut table = Vec::with_capacity(grid.len());
    let mut best: Option<(f64, f64, f64)> = None;
    for &c in &grid {
        let mut abs_sum = 0.0;
        let mut sq_sum = 0.0;
        let mut count = 0usize;
        for fold in 0..config.folds {
            let train: Vec<LabeledExample> = examples
                .iter()
                .zip(&fold_of)
                .filter(|(_, &f)| f != fold)
                .map(|(e, _)| e.clone())
                .collect();
            if train.is_empty() {
                continue;
            }
            let fit = train_svr(&train, dim, c, config)?;
            for (ex, _) in examples.iter().zip(&fold_of).filter(|(_, &f)| f == fold) {
                let pred = fit.raw_score(&ex.x.counts).clamp(0.0, 1.0);
                let err = ex.y - pred;
                abs_sum += err.abs();
                sq_sum += err * err;
                count += 1;
            }
        }
        let mae = abs_sum / count as f64;
        let mse = sq_sum / count as f64;
        table.push((c, mae, mse));
        // Strict improvement required, so the smallest c wins ties.
        if best.map_or(true, |(_, best_mae, _)| mae < best_mae) {
            best = Some((c, mae, mse));
        }
    }
    let (best_c, cv_mae, cv_mse) = best.expect("non-empty grid");
    Ok(GridSearchResult {
        best_c,
        cv_mae,
        cv_mse,
        table,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::DocVector;

    fn ex(id: usize, counts: Vec<(u32, u32)>, y: f64) -> LabeledExample {
        LabeledExample {
            proposal_id: format!("p{id}"),
            x: DocVector {
                doc_id: format!("p{id}"),
                counts,
            },
            y,
        }
    }

    #[test]
    fn constant_labels_tie_to_smallest_c() {
        let examples: Vec<_> = (0..9).map(|i| ex(i, vec![(i as u32 % 3, 1)], 0.4)).collect();
        let config = SvrConfig {
            c_grid: vec![1.0, 1e-3, 1e2],
            ..SvrConfig::default()
        };
        let res = grid_search(&examples, 3, &config).unwrap();
        assert_eq!(res.best_c, 1e-3, "all c fit a constant equally; smallest wins");
        assert!(res.cv_mae < 1e-9);
    }

    #[test]
    fn sparse_linear_signal_prefers_fitting_over_max_regularization() {
        // y = 0.5 + 0.2 * x0 - 0.2 * x1, no noise.
        let mut examples = Vec::new();
        for i in 0..30 {
            let a = (i % 3) as u32;
            let b = ((i / 3) % 2) as u32;
            let y = 0.5 + 0.2 * a as f64 - 0.2 * b as f64;
            let mut counts = Vec::new();
            if a > 0 {
                counts.push((0, a));
            }
            if b > 0 {
                counts.push((1, b));
            }
            examples.push(ex(i, counts, y));
        }
        let config = SvrConfig {
            c_grid: vec![1e-15, 1e-3, 1.0],
            seed: 7,
            ..SvrConfig::default()
        };
        let res = grid_search(&examples, 2, &config).unwrap();
        let strongest_reg = res.table.first().unwrap();
        assert!(
            res.cv_mae < strongest_reg.1,
            "best mae {} should beat the beta=0 grid point {}",
            res.cv_mae,
            strongest_reg.1
        );
        assert!(res.best_c > 1e-15);
    }

    #[test]
    fn too_few_examples_error() {
        let examples = vec![ex(0, vec![], 0.5), ex(1, vec![], 0.5)];
        let config = SvrConfig::default();
        assert!(grid_search(&examples, 1, &config).is_err());
    }
}

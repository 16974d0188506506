//! Per-institution preference models: against-management labels,
//! epsilon-insensitive linear SVR training, cross-validated regularization
//! choice, and alignment scoring of new texts.

mod grid;
mod institution;
mod label;
mod svr;

pub use grid::{grid_search, GridSearchResult};
pub use institution::{fit_institution, CoefficientRow, InstitutionModel};
pub use label::{
    make_label, select_training_set, subtract_years, LabeledExample, VoteCode, VoteRecord,
};
pub use svr::{epsilon_insensitive_center, train_svr, SvrConfig, SvrFit};

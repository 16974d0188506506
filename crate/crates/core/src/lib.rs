//! Measure how closely activist proxy-fight communications align with
//! mutual-fund institutions' revealed voting preferences.
//!
//! The pipeline runs in stages, each backed by a module here:
//!
//! - [`edgar`] retrieves and caches SEC filings and parses index/header
//!   metadata into structured records.
//! - [`filing`] turns raw filings into proposal texts, activist messages,
//!   proxy-guideline sections, and bunched campaigns.
//! - [`text`] normalizes text and builds sparse n-gram count vectors over
//!   a corpus-derived vocabulary.
//! - [`model`] constructs against-management labels and trains
//!   per-institution epsilon-insensitive linear SVR preference models.
//! - [`alignment`] scores campaigns against those models and assembles the
//!   proxy-fight-by-institution panel (holdings, support, interactions).
//! - [`attention`] converts EDGAR server logs plus an IP-to-organization
//!   map into per-campaign, per-institution view counts.
//! - [`econ`] estimates fixed-effects regressions with cluster-robust or
//!   heteroskedasticity-robust standard errors and renders tables.
//! - [`synth`] generates seeded synthetic corpora, votes, holdings, logs,
//!   and outcomes with planted ground truth for end-to-end verification.

pub mod alignment;
pub mod attention;
pub mod econ;
pub mod edgar;
pub mod error;
pub mod filing;
pub mod model;
pub mod synth;
pub mod text;

pub use error::{Error, Result};

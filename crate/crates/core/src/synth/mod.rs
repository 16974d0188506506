//! Seeded synthetic data with planted ground truth: corpora and votes for
//! the preference models, holdings/outcome panels for the regressions, and
//! server-log fixtures for the attention pipeline. Everything deterministic
//! under (seed, stream id), so modules can draw independently.

mod config;
mod corpus;
mod panel;

pub use config::SynthConfig;
pub use corpus::{gen_corpus, gen_votes, SynthCampaign, SynthCorpus, SynthInstitution, SynthProposal};
pub use panel::{gen_logs, gen_panel, SynthLogs, SynthOutcomeRow, SynthPanel, SynthPanelRow};

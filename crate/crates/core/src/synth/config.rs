use serde::{Deserialize, Serialize};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Generator parameters. All randomness flows from `seed`; each generation
/// stage draws from its own stream of the counter-based generator, so
/// stages can run in any order without perturbing one another.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SynthConfig {
    pub seed: u64,
    pub n_institutions: usize,
    pub n_proposals: usize,
    pub n_campaigns: usize,
    pub vocab_size: usize,
    pub noise_sd: f64,
    /// Coefficient planted on standardized holdings in the alignment panel.
    pub planted_beta_holding: f64,
    /// Interaction coefficient planted in the win outcome model.
    pub planted_interaction: f64,
    pub n_funds: usize,
    pub doc_len: usize,
    /// Planted positive (and negative) phrases per institution.
    pub planted_phrases: usize,
    /// Magnitude of each planted phrase weight.
    pub planted_weight: f64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig {
            seed: 42,
            n_institutions: 10,
            n_proposals: 200,
            n_campaigns: 60,
            vocab_size: 300,
            noise_sd: 0.1,
            planted_beta_holding: 0.005,
            planted_interaction: 0.1,
            n_funds: 10,
            doc_len: 60,
            planted_phrases: 10,
            planted_weight: 0.08,
        }
    }
}

/// Stream ids, one per generation stage.
#[derive(Debug, Clone, Copy)]
pub(crate) enum Stream {
    Weights = 0,
    Proposals = 1,
    Votes = 2,
    Campaigns = 3,
    Panel = 4,
    Outcomes = 5,
    Logs = 6,
}

impl SynthConfig {
    pub(crate) fn rng(&self, stream: Stream) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(stream as u64);
        rng
    }
}

use std::collections::BTreeMap;

use chrono::NaiveDate;
use rand::distributions::{Bernoulli, Distribution};
use rand::Rng;
use rand_distr::Normal;

use crate::filing::{Campaign, CampaignFiling};
use crate::model::{VoteCode, VoteRecord};

use super::config::{Stream, SynthConfig};

/// One institution's planted preference structure.
#[derive(Debug, Clone)]
pub struct SynthInstitution {
    pub institution_id: String,
    pub alpha0: f64,
    /// token index -> true weight (sparse, signed).
    pub weights: BTreeMap<u32, f64>,
}

#[derive(Debug, Clone)]
pub struct SynthProposal {
    pub proposal_id: String,
    pub meeting_date: NaiveDate,
    pub tokens: Vec<String>,
    pub description: String,
}

#[derive(Debug, Clone)]
pub struct SynthCampaign {
    pub campaign: Campaign,
    pub tokens: Vec<String>,
    /// Index of the institution whose positive phrases the message leans on.
    pub tilt: Option<usize>,
}

#[derive(Debug, Clone)]
pub struct SynthCorpus {
    pub tokens: Vec<String>,
    pub institutions: Vec<SynthInstitution>,
    pub proposals: Vec<SynthProposal>,
    pub campaigns: Vec<SynthCampaign>,
}

impl SynthCorpus {
    /// True latent score of a token sequence for one institution:
    /// alpha0 + sum of planted weights over token occurrences.
    pub fn true_score(&self, institution: usize, tokens: &[String]) -> f64 {
        let inst = &self.institutions[institution];
        let index: BTreeMap<&str, u32> = self
            .tokens
            .iter()
            .enumerate()
            .map(|(i, t)| (t.as_str(), i as u32))
            .collect();
        let mut score = inst.alpha0;
        for tok in tokens {
            if let Some(idx) = index.get(tok.as_str()) {
                if let Some(w) = inst.weights.get(idx) {
                    score += w;
                }
            }
        }
        score
    }

    pub fn proposal_token_lists(&self) -> Vec<Vec<String>> {
        self.proposals.iter().map(|p| p.tokens.clone()).collect()
    }
}

fn token_name(i: usize) -> String {
    format!("w{i:04}")
}

/// Generate institutions with sparse planted weights, proposal texts as
/// token sequences, and campaign messages (one in `n_institutions` of which
/// is tilted toward each institution's positive phrases, round robin).
pub fn gen_corpus(config: &SynthConfig) -> SynthCorpus {
    let tokens: Vec<String> = (0..config.vocab_size).map(token_name).collect();

    let mut rng = config.rng(Stream::Weights);
    let mut institutions = Vec::with_capacity(config.n_institutions);
    for i in 0..config.n_institutions {
        let mut weights = BTreeMap::new();
        while weights.len() < config.planted_phrases {
            let idx = rng.gen_range(0..config.vocab_size) as u32;
            weights.entry(idx).or_insert(config.planted_weight);
        }
        while weights.len() < 2 * config.planted_phrases {
            let idx = rng.gen_range(0..config.vocab_size) as u32;
            weights.entry(idx).or_insert(-config.planted_weight);
        }
        institutions.push(SynthInstitution {
            institution_id: format!("inst{i:03}"),
            alpha0: 0.5,
            weights,
        });
    }

    // Topic pool: the union of planted tokens, so planted phrases clear the
    // document-frequency floor.
    let topic_pool: Vec<u32> = {
        let mut v: Vec<u32> = institutions
            .iter()
            .flat_map(|inst| inst.weights.keys().copied())
            .collect();
        v.sort_unstable();
        v.dedup();
        v
    };

    let mut rng = config.rng(Stream::Proposals);
    let epoch = NaiveDate::from_ymd_opt(2013, 1, 1).unwrap();
    let mut proposals = Vec::with_capacity(config.n_proposals);
    for p in 0..config.n_proposals {
        let meeting_date = epoch + chrono::Duration::days(rng.gen_range(0..1460));
        let toks: Vec<String> = (0..config.doc_len)
            .map(|_| {
                if rng.gen_bool(0.5) && !topic_pool.is_empty() {
                    let idx = topic_pool[rng.gen_range(0..topic_pool.len())];
                    tokens[idx as usize].clone()
                } else {
                    tokens[rng.gen_range(0..config.vocab_size)].clone()
                }
            })
            .collect();
        proposals.push(SynthProposal {
            proposal_id: format!("prop{p:05}"),
            meeting_date,
            tokens: toks,
            description: format!("Synthetic Proposal {p}"),
        });
    }

    let mut rng = config.rng(Stream::Campaigns);
    let campaign_epoch = NaiveDate::from_ymd_opt(2016, 1, 1).unwrap();
    let mut campaigns = Vec::with_capacity(config.n_campaigns);
    for c in 0..config.n_campaigns {
        let tilt = if config.n_institutions > 0 {
            Some(c % config.n_institutions)
        } else {
            None
        };
        let positives: Vec<u32> = tilt
            .map(|i| {
                institutions[i]
                    .weights
                    .iter()
                    .filter(|(_, w)| **w > 0.0)
                    .map(|(idx, _)| *idx)
                    .collect()
            })
            .unwrap_or_default();
        let toks: Vec<String> = (0..config.doc_len)
            .map(|_| {
                if !positives.is_empty() && rng.gen_bool(0.5) {
                    tokens[positives[rng.gen_range(0..positives.len())] as usize].clone()
                } else {
                    tokens[rng.gen_range(0..config.vocab_size)].clone()
                }
            })
            .collect();
        let start = campaign_epoch + chrono::Duration::days(rng.gen_range(0..330));
        let end = start + chrono::Duration::days(rng.gen_range(10..120));
        let activist = 1000 + (c / 3) as u64;
        let target = 2000 + c as u64;
        let accession =
            crate::edgar::Accession::new(&format!("{:010}-16-{:06}", activist, c + 1)).unwrap();
        let message_text = toks.join(" ");
        campaigns.push(SynthCampaign {
            campaign: Campaign {
                campaign_id: format!("camp{c:04}"),
                activist_cik: activist,
                target_cik: target,
                filings: vec![CampaignFiling {
                    accession,
                    date_filed: start,
                    message: Some(message_text.clone()),
                }],
                start_date: start,
                end_date: end,
                message_text,
            },
            tokens: toks,
            tilt,
        });
    }

    SynthCorpus {
        tokens,
        institutions,
        proposals,
        campaigns,
    }
}

/// Per-fund binary votes whose institution-level mean tracks
/// clamp(alpha0 + w* . x + noise).
pub fn gen_votes(corpus: &SynthCorpus, config: &SynthConfig) -> Vec<VoteRecord> {
    let mut rng = config.rng(Stream::Votes);
    let noise = Normal::new(0.0, config.noise_sd.max(f64::MIN_POSITIVE)).expect("valid sd");
    let mut out = Vec::with_capacity(corpus.institutions.len() * corpus.proposals.len());
    for inst_idx in 0..corpus.institutions.len() {
        let institution_id = corpus.institutions[inst_idx].institution_id.clone();
        for proposal in &corpus.proposals {
            let base = corpus.true_score(inst_idx, &proposal.tokens);
            let eps = if config.noise_sd > 0.0 {
                noise.sample(&mut rng)
            } else {
                0.0
            };
            let p_against = (base + eps).clamp(0.0, 1.0);
            let bern = Bernoulli::new(p_against).expect("probability in range");
            for fund in 0..config.n_funds {
                let against = bern.sample(&mut rng);
                out.push(VoteRecord {
                    institution_id: institution_id.clone(),
                    fund_id: format!("{institution_id}-f{fund:03}"),
                    proposal_id: proposal.proposal_id.clone(),
                    meeting_date: proposal.meeting_date,
                    mgmt_rec: VoteCode::For,
                    cast: if against { VoteCode::Against } else { VoteCode::For },
                    description: proposal.description.clone(),
                });
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_under_seed() {
        let config = SynthConfig {
            n_proposals: 20,
            n_campaigns: 5,
            ..SynthConfig::default()
        };
        let a = gen_corpus(&config);
        let b = gen_corpus(&config);
        assert_eq!(a.proposals[3].tokens, b.proposals[3].tokens);
        assert_eq!(
            a.institutions[2].weights, b.institutions[2].weights,
            "byte-identical regeneration"
        );
        let va = gen_votes(&a, &config);
        let vb = gen_votes(&b, &config);
        assert_eq!(va.len(), vb.len());
        assert_eq!(va[100].cast, vb[100].cast);
    }

    #[test]
    fn clamped_extremes_are_unanimous() {
        let config = SynthConfig {
            n_institutions: 1,
            n_proposals: 1,
            noise_sd: 0.0,
            n_funds: 25,
            ..SynthConfig::default()
        };
        let mut corpus = gen_corpus(&config);
        // Force the single proposal to hammer one positive planted token, so
        // the true score exceeds 1 and clamps.
        let (idx, _) = corpus.institutions[0]
            .weights
            .iter()
            .find(|(_, w)| **w > 0.0)
            .map(|(i, w)| (*i, *w))
            .unwrap();
        let tok = corpus.tokens[idx as usize].clone();
        corpus.proposals[0].tokens = vec![tok; 30];
        let votes = gen_votes(&corpus, &config);
        assert_eq!(votes.len(), 25);
        assert!(votes.iter().all(|v| v.cast == VoteCode::Against));
    }

    #[test]
    fn fund_mean_tracks_intended_label() {
        let config = SynthConfig {
            n_institutions: 1,
            n_proposals: 1,
            noise_sd: 0.0,
            n_funds: 1000,
            ..SynthConfig::default()
        };
        let corpus = gen_corpus(&config);
        let intended = corpus.true_score(0, &corpus.proposals[0].tokens).clamp(0.0, 1.0);
        let votes = gen_votes(&corpus, &config);
        let mean = votes
            .iter()
            .filter(|v| v.cast == VoteCode::Against)
            .count() as f64
            / votes.len() as f64;
        // Binomial tolerance: 4 standard deviations at n = 1000.
        let tol = 4.0 * (intended * (1.0 - intended) / 1000.0).sqrt() + 1e-9;
        assert!(
            (mean - intended).abs() <= tol,
            "mean {mean} vs intended {intended} (tol {tol})"
        );
    }

    #[test]
    fn tilted_campaign_scores_higher_for_tilted_institution() {
        let config = SynthConfig::default();
        let corpus = gen_corpus(&config);
        let campaign = &corpus.campaigns[0];
        let tilted = campaign.tilt.unwrap();
        let own = corpus.true_score(tilted, &campaign.tokens);
        let other = corpus.true_score((tilted + 1) % config.n_institutions, &campaign.tokens);
        assert!(own > other, "tilted {own} vs other {other}");
    }
}

//! Turn raw filings into proposal texts, activist messages, proxy-guideline
//! sections, and date-bunched campaigns.

mod campaign;
mod clean;
mod guidelines;
mod message;
mod proposal;

pub use campaign::{
    bunch_campaigns, split_campaign_at_event, Campaign, CampaignFiling, DEFAULT_BUNCH_GAP_DAYS,
};
pub use clean::{clean_html, clean_html_with, fold_to_ascii};
pub use guidelines::{extract_guidelines, GuidelineDoc};
pub use message::{extract_message, CueTable, MessageExtract};
pub use proposal::{
    score_proposal_line, segment_proposals, IssRow, ProposalText, SegmentOutcome, ScoreWeights,
};

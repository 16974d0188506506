//! Campaign-level alignment panels: per-institution Align scores, holdings,
//! aggregate alignment with the ownership dummy, activist-institution
//! interaction counts, post-fight support, and the non-ML type baseline.

mod holdings;
mod panel;
mod supact;
mod types;

pub use holdings::{aggregate_holdings, FundPosition, HoldingRecord};
pub use panel::{
    ag_align, compute_align_panel, num_interaction, AggregateAlignment, PanelRow,
    DEFAULT_OWN_DUM_CUTOFF,
};
pub use supact::{sup_act, Meeting, MeetingProposal};
pub use types::{classify_proposal_type, type_based_align, TypeTable};

use chrono::{Days, NaiveDate};

use crate::filing::Campaign;
use crate::model::VoteRecord;

/// A shareholder meeting with its shareholder-sponsored proposals.
#[derive(Debug, Clone)]
pub struct Meeting {
    pub meeting_date: NaiveDate,
    pub proposals: Vec<MeetingProposal>,
}

#[derive(Debug, Clone)]
pub struct MeetingProposal {
    pub proposal_id: String,
    pub description: String,
}

/// Realized activist support for one institution at the post-fight meeting.
///
/// Meetings are filtered first: those with no shareholder proposals, those
/// more than 30 days before the campaign end, and those more than 365 days
/// after it are excluded. The earliest remaining meeting after the campaign
/// start is used. Director rows flagged "Management Nominee" are dropped,
/// and support is the mean over (fund, proposal) votes of the
/// not-precisely-following-management indicator. Returns `None` when no
/// meeting or no votes qualify.
pub fn sup_act(campaign: &Campaign, meetings: &[Meeting], votes: &[VoteRecord]) -> Option<f64> {
    let earliest = campaign
        .end_date
        .checked_sub_days(Days::new(30))
        .unwrap_or(campaign.end_date);
    let latest = campaign
        .end_date
        .checked_add_days(Days::new(365))
        .unwrap_or(campaign.end_date);
    let mut qualifying: Vec<&Meeting> = meetings
        .iter()
        .filter(|m| !m.proposals.is_empty())
        .filter(|m| m.meeting_date >= earliest && m.meeting_date <= latest)
        .filter(|m| m.meeting_date > campaign.start_date)
        .collect();
    qualifying.sort_by_key(|m| m.meeting_date);
    let meeting = qualifying.first()?;

    let activist_proposals: Vec<&MeetingProposal> = meeting
        .proposals
        .iter()
        .filter(|p| !p.description.to_lowercase().contains("management nominee"))
        .collect();
    if activist_proposals.is_empty() {
        return None;
    }

    let mut supported = 0usize;
    let mut total = 0usize;
    for proposal in &activist_proposals {
        for vote in votes.iter().filter(|v| v.proposal_id == proposal.proposal_id) {
            total += 1;
            if vote.against_management() {
                supported += 1;
            }
        }
    }
    if total == 0 {
        None
    } else {
        Some(supported as f64 / total as f64)
    }
}

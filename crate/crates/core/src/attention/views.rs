use std::collections::{BTreeMap, BTreeSet};

use chrono::{Days, NaiveDate};
use serde::{Deserialize, Serialize};

use crate::edgar::Accession;
use crate::filing::Campaign;

use super::ipmap::IpAssignment;
use super::log_parse::{Ip3, LogEntry};

/// Days after the last filing that still count toward a campaign's window.
pub const VIEW_WINDOW_TAIL_DAYS: u64 = 30;

/// Views of one campaign's documents by one institution inside the
/// campaign window.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ViewCount {
    pub campaign_id: String,
    pub institution_id: String,
    pub views: u32,
    pub window_start: NaiveDate,
    pub window_end: NaiveDate,
}

/// Count filtered log entries that match an assigned institution, a
/// campaign document, and the campaign window (start to 30 days past the
/// end). An entry matching two campaigns' document sets counts in both.
/// Pairs with zero views are not emitted; panel assembly fills zeros.
pub fn count_views(
    entries: &[LogEntry],
    assignments: &[IpAssignment],
    campaigns: &[Campaign],
    fight_docs: &BTreeMap<String, BTreeSet<Accession>>,
) -> Vec<ViewCount> {
    let by_prefix: BTreeMap<Ip3, Vec<&IpAssignment>> = {
        let mut m: BTreeMap<Ip3, Vec<&IpAssignment>> = BTreeMap::new();
        for a in assignments {
            m.entry(a.ip3_prefix).or_default().push(a);
        }
        m
    };
    let windows: Vec<(&Campaign, NaiveDate, NaiveDate)> = campaigns
        .iter()
        .map(|c| {
            let end = c
                .end_date
                .checked_add_days(Days::new(VIEW_WINDOW_TAIL_DAYS))
                .unwrap_or(c.end_date);
            (c, c.start_date, end)
        })
        .collect();

    let mut counts: BTreeMap<(String, String), u32> = BTreeMap::new();
    for entry in entries {
        let Some(candidates) = by_prefix.get(&entry.ip3) else {
            continue;
        };
        let Some(assignment) = candidates.iter().find(|a| a.covers(entry.date)) else {
            continue;
        };
        let mut matched = 0u32;
        for (campaign, start, end) in &windows {
            if entry.date < *start || entry.date > *end {
                continue;
            }
            let Some(docs) = fight_docs.get(&campaign.campaign_id) else {
                continue;
            };
            if docs.contains(&entry.accession) {
                *counts
                    .entry((
                        campaign.campaign_id.clone(),
                        assignment.institution_id.clone(),
                    ))
                    .or_insert(0) += 1;
                matched += 1;
            }
        }
        if matched > 1 {
            log::info!(
                "entry {} at {} matched {matched} campaigns' documents",
                entry.accession,
                entry.date
            );
        }
    }

    let window_of: BTreeMap<&str, (NaiveDate, NaiveDate)> = windows
        .iter()
        .map(|(c, s, e)| (c.campaign_id.as_str(), (*s, *e)))
        .collect();
    counts
        .into_iter()
        .map(|((campaign_id, institution_id), views)| {
            let (window_start, window_end) = window_of[campaign_id.as_str()];
            ViewCount {
                campaign_id,
                institution_id,
                views,
                window_start,
                window_end,
            }
        })
        .collect()
}

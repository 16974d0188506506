use std::collections::BTreeMap;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use crate::edgar::{Accession, FilingRecord};
use crate::error::{Error, Result};

/// Consecutive filings of one activist-target pair merge into one campaign
/// when their dates are at most this many days apart.
pub const DEFAULT_BUNCH_GAP_DAYS: i64 = 180;

/// One filing inside a campaign, with its extracted message when present.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CampaignFiling {
    pub accession: Accession,
    pub date_filed: NaiveDate,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
}

/// A bunched proxy fight: an activist-target pair's filings whose
/// consecutive dates never gap by more than the bunching rule.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Campaign {
    pub campaign_id: String,
    pub activist_cik: u64,
    pub target_cik: u64,
    pub filings: Vec<CampaignFiling>,
    pub start_date: NaiveDate,
    pub end_date: NaiveDate,
    pub message_text: String,
}

impl Campaign {
    pub fn accessions(&self) -> impl Iterator<Item = &Accession> {
        self.filings.iter().map(|f| &f.accession)
    }

    fn from_filings(activist_cik: u64, target_cik: u64, filings: Vec<CampaignFiling>) -> Campaign {
        let start_date = filings.first().expect("non-empty campaign").date_filed;
        let end_date = filings.last().expect("non-empty campaign").date_filed;
        let message_text = filings
            .iter()
            .filter_map(|f| f.message.as_deref())
            .collect::<Vec<_>>()
            .join("\n\n");
        Campaign {
            campaign_id: format!("{activist_cik}-{target_cik}-{start_date}"),
            activist_cik,
            target_cik,
            filings,
            start_date,
            end_date,
            message_text,
        }
    }
}

/// Group filings by (filer, subject), sort by date, and split wherever the
/// gap between consecutive filings exceeds the rule. Pairs listed in
/// `merge_overrides` are never split regardless of gap. `messages` supplies
/// per-accession extracted message text.
pub fn bunch_campaigns(
    filings: &[FilingRecord],
    messages: &BTreeMap<Accession, String>,
    max_gap_days: i64,
    merge_overrides: &[(u64, u64)],
) -> Vec<Campaign> {
    let mut groups: BTreeMap<(u64, u64), Vec<&FilingRecord>> = BTreeMap::new();
    for filing in filings {
        groups
            .entry((filing.filer_cik, filing.subject_cik))
            .or_default()
            .push(filing);
    }
    let mut campaigns = Vec::new();
    for ((activist, target), mut group) in groups {
        group.sort_by(|a, b| {
            a.date_filed
                .cmp(&b.date_filed)
                .then_with(|| a.accession.cmp(&b.accession))
        });
        let never_split = merge_overrides.contains(&(activist, target));
        let mut run: Vec<CampaignFiling> = Vec::new();
        for filing in group {
            let split = match run.last() {
                Some(prev) if !never_split => {
                    (filing.date_filed - prev.date_filed).num_days() > max_gap_days
                }
                _ => false,
            };
            if split {
                campaigns.push(Campaign::from_filings(activist, target, std::mem::take(&mut run)));
            }
            run.push(CampaignFiling {
                accession: filing.accession.clone(),
                date_filed: filing.date_filed,
                message: messages.get(&filing.accession).cloned(),
            });
        }
        if !run.is_empty() {
            campaigns.push(Campaign::from_filings(activist, target, run));
        }
    }
    campaigns
}

/// Split a campaign at an event date strictly inside its window: filings
/// before the event form the first half, the rest the second, and each
/// half's message text is rebuilt from its own filings.
pub fn split_campaign_at_event(
    campaign: &Campaign,
    event_date: NaiveDate,
) -> Result<(Campaign, Campaign)> {
    if event_date <= campaign.start_date || event_date > campaign.end_date {
        return Err(Error::data(format!(
            "event {event_date} is not strictly inside [{}, {}]",
            campaign.start_date, campaign.end_date
        )));
    }
    let (pre, post): (Vec<CampaignFiling>, Vec<CampaignFiling>) = campaign
        .filings
        .iter()
        .cloned()
        .partition(|f| f.date_filed < event_date);
    if pre.is_empty() || post.is_empty() {
        return Err(Error::data(
            "event date does not separate the campaign's filings",
        ));
    }
    let mut first = Campaign::from_filings(campaign.activist_cik, campaign.target_cik, pre);
    let mut second = Campaign::from_filings(campaign.activist_cik, campaign.target_cik, post);
    first.campaign_id = format!("{}-pre", campaign.campaign_id);
    second.campaign_id = format!("{}-post", campaign.campaign_id);
    Ok((first, second))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn filing(n: u32, filer: u64, subject: u64, date: NaiveDate) -> FilingRecord {
        FilingRecord {
            accession: Accession::new(&format!("{filer:010}-13-{n:06}")).unwrap(),
            form_type: "DFAN14A".into(),
            filer_cik: filer,
            subject_cik: subject,
            filer_name: "ACTIVIST".into(),
            subject_name: "TARGET".into(),
            date_filed: date,
            body: String::new(),
            diagnostics: vec![],
        }
    }

    fn day(offset: i64) -> NaiveDate {
        NaiveDate::from_ymd_opt(2013, 1, 1).unwrap() + chrono::Duration::days(offset)
    }

    #[test]
    fn splits_on_gap_over_180() {
        let filings = vec![
            filing(1, 7, 9, day(0)),
            filing(2, 7, 9, day(100)),
            filing(3, 7, 9, day(290)),
        ];
        let campaigns = bunch_campaigns(&filings, &BTreeMap::new(), DEFAULT_BUNCH_GAP_DAYS, &[]);
        assert_eq!(campaigns.len(), 2, "gap 190 > 180 splits");
        assert_eq!(campaigns[0].filings.len(), 2);
        assert_eq!(campaigns[1].filings.len(), 1);
        assert_eq!(campaigns[0].start_date, day(0));
        assert_eq!(campaigns[0].end_date, day(100));
    }

    #[test]
    fn gap_of_exactly_180_merges() {
        let filings = vec![filing(1, 7, 9, day(0)), filing(2, 7, 9, day(180))];
        let campaigns = bunch_campaigns(&filings, &BTreeMap::new(), DEFAULT_BUNCH_GAP_DAYS, &[]);
        assert_eq!(campaigns.len(), 1);
    }

    #[test]
    fn single_filing_start_equals_end() {
        let filings = vec![filing(1, 7, 9, day(5))];
        let campaigns = bunch_campaigns(&filings, &BTreeMap::new(), DEFAULT_BUNCH_GAP_DAYS, &[]);
        assert_eq!(campaigns.len(), 1);
        assert_eq!(campaigns[0].start_date, campaigns[0].end_date);
    }

    #[test]
    fn override_merges_wide_gap() {
        let filings = vec![filing(1, 7, 9, day(0)), filing(2, 7, 9, day(400))];
        let campaigns =
            bunch_campaigns(&filings, &BTreeMap::new(), DEFAULT_BUNCH_GAP_DAYS, &[(7, 9)]);
        assert_eq!(campaigns.len(), 1, "manual override keeps one campaign");
    }

    #[test]
    fn partition_preserved_and_disjoint() {
        let filings: Vec<FilingRecord> = (0..8)
            .map(|i| filing(i, 7, 9, day(i as i64 * 100)))
            .collect();
        let campaigns = bunch_campaigns(&filings, &BTreeMap::new(), DEFAULT_BUNCH_GAP_DAYS, &[]);
        let mut seen: Vec<&Accession> = campaigns.iter().flat_map(|c| c.accessions()).collect();
        seen.sort();
        seen.dedup();
        assert_eq!(seen.len(), 8, "union of campaigns equals input, disjoint");
        for c in &campaigns {
            for pair in c.filings.windows(2) {
                assert!((pair[1].date_filed - pair[0].date_filed).num_days() <= 180);
            }
        }
    }

    #[test]
    fn messages_concatenate_in_date_order() {
        let filings = vec![filing(1, 7, 9, day(0)), filing(2, 7, 9, day(10))];
        let mut messages = BTreeMap::new();
        messages.insert(filings[0].accession.clone(), "first message".to_owned());
        messages.insert(filings[1].accession.clone(), "second message".to_owned());
        let campaigns = bunch_campaigns(&filings, &messages, DEFAULT_BUNCH_GAP_DAYS, &[]);
        assert_eq!(campaigns[0].message_text, "first message\n\nsecond message");
    }

    #[test]
    fn split_at_event() {
        let filings = vec![
            filing(1, 7, 9, day(0)),
            filing(2, 7, 9, day(30)),
            filing(3, 7, 9, day(60)),
            filing(4, 7, 9, day(90)),
        ];
        let mut messages = BTreeMap::new();
        for (i, f) in filings.iter().enumerate() {
            messages.insert(f.accession.clone(), format!("m{i}"));
        }
        let campaigns = bunch_campaigns(&filings, &messages, DEFAULT_BUNCH_GAP_DAYS, &[]);
        let (pre, post) = split_campaign_at_event(&campaigns[0], day(45)).unwrap();
        assert_eq!(pre.filings.len(), 2);
        assert_eq!(post.filings.len(), 2);
        assert_eq!(pre.message_text, "m0\n\nm1");
        assert_eq!(post.message_text, "m2\n\nm3");

        assert!(split_campaign_at_event(&campaigns[0], day(-5)).is_err());
        assert!(split_campaign_at_event(&campaigns[0], day(0)).is_err());
    }
}

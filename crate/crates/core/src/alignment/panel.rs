use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::filing::Campaign;
use crate::model::InstitutionModel;
use crate::text::{vectorize, Normalizer, Vocabulary};

/// Ownership-dummy cutoff: the sample-average mutual-fund ownership.
pub const DEFAULT_OWN_DUM_CUTOFF: f64 = 0.143;

/// One proxy-fight-by-institution observation for the regression engine.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PanelRow {
    pub campaign_id: String,
    pub institution_id: String,
    pub align: f64,
    /// Fraction of target market cap held; zero when uninvested.
    pub holding: f64,
    pub holding_6m: f64,
    pub view: u32,
    pub sup_act: Option<f64>,
    pub num_interaction: u32,
    pub acquired: u8,
    pub post: u8,
}

/// Campaign-level aggregate alignment and ownership dummy.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AggregateAlignment {
    pub campaign_id: String,
    pub ag_align: f64,
    pub own_dum: u8,
    pub total_mf_ownership: f64,
    pub win: Option<u8>,
}

/// Score one campaign against every institution model. Institutions are
/// ranked by the `models` map itself (a model exists only when the
/// institution had enough in-window votes); requested institutions without
/// a model are returned in the skip list. Uninvested institutions get a
/// holding of zero rather than being dropped.
pub fn compute_align_panel(
    campaign: &Campaign,
    models: &BTreeMap<String, InstitutionModel>,
    holdings: &BTreeMap<String, f64>,
    holdings_6m: &BTreeMap<String, f64>,
    vocab: &Vocabulary,
    normalizer: &Normalizer,
    requested: Option<&[String]>,
) -> Result<(Vec<PanelRow>, Vec<String>)> {
    let tokens = normalizer.tokens(&campaign.message_text);
    let x = vectorize(&campaign.campaign_id, &tokens, vocab);
    let mut rows = Vec::new();
    let mut skipped = Vec::new();
    let ids: Vec<&String> = match requested {
        Some(list) => list.iter().collect(),
        None => models.keys().collect(),
    };
    for institution_id in ids {
        let Some(model) = models.get(institution_id) else {
            log::warn!(
                "no model for institution {institution_id} in campaign {}; row omitted",
                campaign.campaign_id
            );
            skipped.push(institution_id.clone());
            continue;
        };
        let align = model.predict_align(&x, vocab)?;
        rows.push(PanelRow {
            campaign_id: campaign.campaign_id.clone(),
            institution_id: institution_id.clone(),
            align,
            holding: holdings.get(institution_id).copied().unwrap_or(0.0),
            holding_6m: holdings_6m.get(institution_id).copied().unwrap_or(0.0),
            view: 0,
            sup_act: None,
            num_interaction: 0,
            acquired: 0,
            post: 0,
        });
    }
    Ok((rows, skipped))
}

/// Holdings-weighted average of member aligns plus the ownership dummy.
/// Errors when no row has a positive holding; callers that prefer an
/// absent value can map the error.
pub fn ag_align(rows: &[PanelRow], cutoff: f64) -> Result<AggregateAlignment> {
    let campaign_id = rows
        .first()
        .map(|r| r.campaign_id.clone())
        .ok_or_else(|| Error::data("ag_align requires at least one row"))?;
    let total: f64 = rows.iter().map(|r| r.holding).sum();
    if !(total > 0.0) {
        return Err(Error::data(format!(
            "all holdings are zero for campaign {campaign_id}"
        )));
    }
    let weighted: f64 = rows.iter().map(|r| r.align * r.holding).sum::<f64>() / total;
    Ok(AggregateAlignment {
        campaign_id,
        ag_align: weighted,
        own_dum: u8::from(total > cutoff),
        total_mf_ownership: total,
        win: None,
    })
}

/// Count prior interactions: for each campaign of an activist, an
/// institution's counter equals the number of the activist's earlier
/// campaigns in which the institution held strictly more than `threshold`
/// of that target. Keys of the result are (campaign_id, institution_id).
pub fn num_interaction(
    campaigns: &[Campaign],
    holdings: &BTreeMap<(String, String), f64>,
    institutions: &[String],
    threshold: f64,
) -> BTreeMap<(String, String), u32> {
    let mut by_activist: BTreeMap<u64, Vec<&Campaign>> = BTreeMap::new();
    for c in campaigns {
        by_activist.entry(c.activist_cik).or_default().push(c);
    }
    let mut out = BTreeMap::new();
    for list in by_activist.values_mut() {
        list.sort_by(|a, b| {
            a.start_date
                .cmp(&b.start_date)
                .then_with(|| a.campaign_id.cmp(&b.campaign_id))
        });
        for institution in institutions {
            let mut count = 0u32;
            for campaign in list.iter() {
                out.insert(
                    (campaign.campaign_id.clone(), institution.clone()),
                    count,
                );
                let held = holdings
                    .get(&(campaign.campaign_id.clone(), institution.clone()))
                    .copied()
                    .unwrap_or(0.0);
                if held > threshold {
                    count += 1;
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use chrono::NaiveDate;

    fn row(inst: &str, align: f64, holding: f64) -> PanelRow {
        PanelRow {
            campaign_id: "c1".into(),
            institution_id: inst.into(),
            align,
            holding,
            holding_6m: 0.0,
            view: 0,
            sup_act: None,
            num_interaction: 0,
            acquired: 0,
            post: 0,
        }
    }

    fn campaign(id: &str, activist: u64, start: (i32, u32, u32)) -> Campaign {
        Campaign {
            campaign_id: id.into(),
            activist_cik: activist,
            target_cik: 99,
            filings: vec![],
            start_date: NaiveDate::from_ymd_opt(start.0, start.1, start.2).unwrap(),
            end_date: NaiveDate::from_ymd_opt(start.0, start.1, start.2).unwrap(),
            message_text: String::new(),
        }
    }

    #[test]
    fn weighted_mean_example() {
        let rows = vec![row("a", 0.9, 0.02), row("b", 0.3, 0.01)];
        let agg = ag_align(&rows, DEFAULT_OWN_DUM_CUTOFF).unwrap();
        assert!((agg.ag_align - 0.7).abs() < 1e-12);
        assert_eq!(agg.own_dum, 0);
    }

    #[test]
    fn single_holder_identity() {
        let rows = vec![row("a", 0.42, 0.05), row("b", 0.9, 0.0)];
        let agg = ag_align(&rows, DEFAULT_OWN_DUM_CUTOFF).unwrap();
        assert!((agg.ag_align - 0.42).abs() < 1e-12);
    }

    #[test]
    fn own_dum_cutoff_boundary() {
        let rows = vec![row("a", 0.5, 0.15)];
        assert_eq!(ag_align(&rows, 0.143).unwrap().own_dum, 1);
        let rows = vec![row("a", 0.5, 0.14)];
        assert_eq!(ag_align(&rows, 0.143).unwrap().own_dum, 0);
    }

    #[test]
    fn all_zero_holdings_error() {
        let rows = vec![row("a", 0.5, 0.0)];
        assert!(ag_align(&rows, 0.143).is_err());
    }

    #[test]
    fn ag_align_within_member_range_and_scale_invariant() {
        let rows = vec![row("a", 0.9, 0.04), row("b", 0.2, 0.01), row("c", 0.6, 0.03)];
        let agg = ag_align(&rows, 0.143).unwrap();
        assert!(agg.ag_align >= 0.2 && agg.ag_align <= 0.9);
        let scaled: Vec<PanelRow> = rows
            .iter()
            .map(|r| PanelRow {
                holding: r.holding * 3.5,
                ..r.clone()
            })
            .collect();
        let agg2 = ag_align(&scaled, 0.143).unwrap();
        assert!((agg.ag_align - agg2.ag_align).abs() < 1e-12);
    }

    #[test]
    fn interaction_counts() {
        let campaigns = vec![
            campaign("c1", 7, (2010, 1, 1)),
            campaign("c2", 7, (2012, 1, 1)),
            campaign("c3", 7, (2014, 1, 1)),
            campaign("other", 8, (2011, 1, 1)),
        ];
        let mut holdings = BTreeMap::new();
        holdings.insert(("c1".to_owned(), "a".to_owned()), 0.02);
        holdings.insert(("c2".to_owned(), "a".to_owned()), 0.01); // exactly 1%: no increment
        holdings.insert(("c2".to_owned(), "b".to_owned()), 0.05);
        let out = num_interaction(&campaigns, &holdings, &["a".into(), "b".into()], 0.01);
        assert_eq!(out[&("c1".to_owned(), "a".to_owned())], 0, "first campaign");
        assert_eq!(out[&("c2".to_owned(), "a".to_owned())], 1, "held 2% in c1");
        assert_eq!(
            out[&("c3".to_owned(), "a".to_owned())],
            1,
            "exactly 1% in c2 does not count (strict >)"
        );
        assert_eq!(out[&("c3".to_owned(), "b".to_owned())], 1);
        assert_eq!(out[&("other".to_owned(), "a".to_owned())], 0);
    }

    #[test]
    fn interaction_monotone_over_sequence() {
        let campaigns: Vec<Campaign> = (0..5)
            .map(|i| campaign(&format!("c{i}"), 7, (2010 + i, 1, 1)))
            .collect();
        let mut holdings = BTreeMap::new();
        for i in 0..5 {
            holdings.insert((format!("c{i}"), "a".to_owned()), 0.03);
        }
        let out = num_interaction(&campaigns, &holdings, &["a".into()], 0.01);
        let counts: Vec<u32> = (0..5)
            .map(|i| out[&(format!("c{i}"), "a".to_owned())])
            .collect();
        assert_eq!(counts, vec![0, 1, 2, 3, 4]);
    }
}

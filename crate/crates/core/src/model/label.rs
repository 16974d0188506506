use std::collections::BTreeMap;

use chrono::{Datelike, NaiveDate};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::text::DocVector;

/// Vote codes as they appear in fund voting disclosures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VoteCode {
    For,
    Against,
    Abstain,
    Withhold,
    DoNotVote,
    None,
}

impl VoteCode {
    pub fn parse(s: &str) -> Result<VoteCode> {
        let folded: String = s
            .trim()
            .chars()
            .filter(|c| c.is_ascii_alphanumeric())
            .flat_map(|c| c.to_lowercase())
            .collect();
        Ok(match folded.as_str() {
            "for" => VoteCode::For,
            "against" => VoteCode::Against,
            "abstain" => VoteCode::Abstain,
            "withhold" => VoteCode::Withhold,
            "donotvote" => VoteCode::DoNotVote,
            "none" | "" => VoteCode::None,
            other => return Err(Error::parse(format!("unknown vote code {other:?}"))),
        })
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            VoteCode::For => "for",
            VoteCode::Against => "against",
            VoteCode::Abstain => "abstain",
            VoteCode::Withhold => "withhold",
            VoteCode::DoNotVote => "do_not_vote",
            VoteCode::None => "none",
        }
    }
}

/// One fund-level vote on one proposal.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VoteRecord {
    pub institution_id: String,
    pub fund_id: String,
    pub proposal_id: String,
    pub meeting_date: NaiveDate,
    pub mgmt_rec: VoteCode,
    pub cast: VoteCode,
    pub description: String,
}

impl VoteRecord {
    /// A fund aligns with the activist side when its cast vote does not
    /// precisely follow the management recommendation; abstain, withhold,
    /// and do-not-vote all count as not following.
    pub fn against_management(&self) -> bool {
        self.cast != self.mgmt_rec
    }
}

/// One training example: a proposal's phrase-count vector and the fraction
/// of the institution's funds that voted against management on it.
#[derive(Debug, Clone)]
pub struct LabeledExample {
    pub proposal_id: String,
    pub x: DocVector,
    pub y: f64,
}

/// Institution-level label: the mean over funds of the against-management
/// indicator for one proposal.
pub fn make_label(records: &[VoteRecord]) -> Option<f64> {
    if records.is_empty() {
        return None;
    }
    let against = records.iter().filter(|r| r.against_management()).count();
    Some(against as f64 / records.len() as f64)
}

/// Calendar-year subtraction, clamping Feb 29 to Feb 28 when the target
/// year is not a leap year.
pub fn subtract_years(date: NaiveDate, years: i32) -> NaiveDate {
    let year = date.year() - years;
    NaiveDate::from_ymd_opt(year, date.month(), date.day())
        .unwrap_or_else(|| NaiveDate::from_ymd_opt(year, 2, 28).expect("feb 28 exists"))
}

/// Select the training window for one institution: proposals with meeting
/// dates in `[as_of - window_years, as_of]` that the institution voted on
/// and whose text vector is available. Returns `None` when fewer than
/// `min_n` qualify.
pub fn select_training_set(
    votes: &[VoteRecord],
    vectors: &BTreeMap<String, DocVector>,
    as_of: NaiveDate,
    window_years: i32,
    min_n: usize,
) -> Option<Vec<LabeledExample>> {
    let window_start = subtract_years(as_of, window_years);
    let mut by_proposal: BTreeMap<&str, Vec<&VoteRecord>> = BTreeMap::new();
    for v in votes {
        if v.meeting_date >= window_start && v.meeting_date <= as_of {
            by_proposal.entry(v.proposal_id.as_str()).or_default().push(v);
        }
    }
    let mut examples = Vec::new();
    for (proposal_id, records) in by_proposal {
        let Some(x) = vectors.get(proposal_id) else {
            continue;
        };
        let against = records.iter().filter(|r| r.against_management()).count();
        examples.push(LabeledExample {
            proposal_id: proposal_id.to_owned(),
            x: x.clone(),
            y: against as f64 / records.len() as f64,
        });
    }
    if examples.len() < min_n {
        None
    } else {
        Some(examples)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(fund: &str, mgmt: VoteCode, cast: VoteCode) -> VoteRecord {
        VoteRecord {
            institution_id: "inst".into(),
            fund_id: fund.into(),
            proposal_id: "p1".into(),
            meeting_date: NaiveDate::from_ymd_opt(2015, 6, 1).unwrap(),
            mgmt_rec: mgmt,
            cast,
            description: String::new(),
        }
    }

    #[test]
    fn label_counts_not_following() {
        let records = vec![
            rec("f1", VoteCode::For, VoteCode::Against),
            rec("f2", VoteCode::For, VoteCode::Abstain),
            rec("f3", VoteCode::For, VoteCode::For),
        ];
        assert_eq!(make_label(&records), Some(2.0 / 3.0));
    }

    #[test]
    fn all_following_is_zero() {
        let records = vec![
            rec("f1", VoteCode::For, VoteCode::For),
            rec("f2", VoteCode::Against, VoteCode::Against),
        ];
        assert_eq!(make_label(&records), Some(0.0));
    }

    #[test]
    fn withhold_counts_against() {
        let records = vec![rec("f1", VoteCode::For, VoteCode::Withhold)];
        assert_eq!(make_label(&records), Some(1.0));
    }

    #[test]
    fn window_boundaries() {
        let as_of = NaiveDate::from_ymd_opt(2017, 7, 17).unwrap();
        let mut vectors = BTreeMap::new();
        let mut votes = Vec::new();
        // 100 in-window proposals, one just outside.
        for i in 0..100 {
            let pid = format!("p{i:03}");
            vectors.insert(
                pid.clone(),
                DocVector {
                    doc_id: pid.clone(),
                    counts: vec![],
                },
            );
            let mut r = rec("f1", VoteCode::For, VoteCode::For);
            r.proposal_id = pid;
            r.meeting_date = NaiveDate::from_ymd_opt(2016, 1, 1).unwrap();
            votes.push(r);
        }
        let mut outside = rec("f1", VoteCode::For, VoteCode::For);
        outside.proposal_id = "pout".into();
        outside.meeting_date = subtract_years(as_of, 2).pred_opt().unwrap();
        vectors.insert(
            "pout".into(),
            DocVector {
                doc_id: "pout".into(),
                counts: vec![],
            },
        );
        votes.push(outside);

        let set = select_training_set(&votes, &vectors, as_of, 2, 100).unwrap();
        assert_eq!(set.len(), 100, "day-before-window proposal excluded");

        // 99 in-window -> below the floor.
        let set = select_training_set(&votes[..99], &vectors, as_of, 2, 100);
        assert!(set.is_none());
    }

    #[test]
    fn vote_code_parsing() {
        assert_eq!(VoteCode::parse("Do Not Vote").unwrap(), VoteCode::DoNotVote);
        assert_eq!(VoteCode::parse("WITHHOLD").unwrap(), VoteCode::Withhold);
        assert!(VoteCode::parse("maybe").is_err());
    }
}

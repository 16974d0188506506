use std::collections::BTreeMap;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Institution-level position in one target as a fraction of the target's
/// market capitalization.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HoldingRecord {
    pub institution_id: String,
    pub target_cik: u64,
    pub as_of: NaiveDate,
    pub frac_mcap: f64,
}

/// One fund's dollar position, already mapped to its parent institution.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FundPosition {
    pub fund_id: String,
    pub institution_id: String,
    pub value: f64,
}

/// Sum fund positions to the institution level and scale by market cap.
/// Negative fund-level positions (shorts) are dropped before summing.
/// Callers without a market cap may pass book equity instead.
pub fn aggregate_holdings(
    positions: &[FundPosition],
    target_cik: u64,
    as_of: NaiveDate,
    market_cap: f64,
) -> Result<Vec<HoldingRecord>> {
    if !(market_cap > 0.0) {
        return Err(Error::data(format!(
            "market cap must be positive, got {market_cap}"
        )));
    }
    let mut by_institution: BTreeMap<&str, f64> = BTreeMap::new();
    for p in positions {
        if p.value <= 0.0 {
            continue;
        }
        *by_institution.entry(p.institution_id.as_str()).or_insert(0.0) += p.value;
    }
    Ok(by_institution
        .into_iter()
        .map(|(institution_id, total)| HoldingRecord {
            institution_id: institution_id.to_owned(),
            target_cik,
            as_of,
            frac_mcap: total / market_cap,
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pos(inst: &str, value: f64) -> FundPosition {
        FundPosition {
            fund_id: format!("{inst}-fund"),
            institution_id: inst.to_owned(),
            value,
        }
    }

    fn date() -> NaiveDate {
        NaiveDate::from_ymd_opt(2015, 3, 31).unwrap()
    }

    #[test]
    fn negative_positions_dropped() {
        let recs =
            aggregate_holdings(&[pos("a", 30.0), pos("a", -10.0)], 1, date(), 1000.0).unwrap();
        assert_eq!(recs.len(), 1);
        assert!((recs[0].frac_mcap - 0.03).abs() < 1e-15);
    }

    #[test]
    fn no_positions_empty() {
        let recs = aggregate_holdings(&[], 1, date(), 1000.0).unwrap();
        assert!(recs.is_empty());
    }

    #[test]
    fn funds_add_within_institution() {
        let recs =
            aggregate_holdings(&[pos("a", 10.0), pos("a", 20.0)], 1, date(), 1000.0).unwrap();
        assert!((recs[0].frac_mcap - 0.03).abs() < 1e-15);
    }

    #[test]
    fn zero_market_cap_errors() {
        assert!(aggregate_holdings(&[pos("a", 10.0)], 1, date(), 0.0).is_err());
        assert!(aggregate_holdings(&[pos("a", 10.0)], 1, date(), -5.0).is_err());
    }
}

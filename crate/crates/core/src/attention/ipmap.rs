use std::collections::BTreeMap;
use std::net::Ipv4Addr;

use chrono::NaiveDate;
use regex::Regex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::log_parse::Ip3;

/// Calendar quarter, ordered chronologically.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Quarter {
    pub year: i32,
    pub q: u8,
}

impl Quarter {
    pub fn new(year: i32, q: u8) -> Result<Quarter> {
        if (1..=4).contains(&q) {
            Ok(Quarter { year, q })
        } else {
            Err(Error::data(format!("quarter must be 1..=4, got {q}")))
        }
    }

    pub fn parse(s: &str) -> Result<Quarter> {
        let s = s.trim().to_uppercase();
        let (year, q) = s
            .split_once('Q')
            .ok_or_else(|| Error::parse(format!("expected YYYYQn, got {s:?}")))?;
        Quarter::new(
            year.parse()
                .map_err(|_| Error::parse(format!("bad year in {s:?}")))?,
            q.parse()
                .map_err(|_| Error::parse(format!("bad quarter in {s:?}")))?,
        )
    }

    pub fn from_date(date: NaiveDate) -> Quarter {
        use chrono::Datelike;
        Quarter {
            year: date.year(),
            q: ((date.month0() / 3) + 1) as u8,
        }
    }

    pub fn start_date(&self) -> NaiveDate {
        NaiveDate::from_ymd_opt(self.year, (self.q as u32 - 1) * 3 + 1, 1).expect("valid quarter")
    }

    pub fn next(&self) -> Quarter {
        if self.q == 4 {
            Quarter { year: self.year + 1, q: 1 }
        } else {
            Quarter { year: self.year, q: self.q + 1 }
        }
    }

    pub fn prev(&self) -> Quarter {
        if self.q == 1 {
            Quarter { year: self.year - 1, q: 4 }
        } else {
            Quarter { year: self.year, q: self.q - 1 }
        }
    }
}

impl std::fmt::Display for Quarter {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}Q{}", self.year, self.q)
    }
}

/// One registered address from the organization lookup table.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OrgIp {
    pub org_name: String,
    pub ipv4: Ipv4Addr,
}

/// Assignment of one IP3 block to one institution over a validity window;
/// open ends are `None`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IpAssignment {
    pub ip3_prefix: Ip3,
    pub institution_id: String,
    pub valid_from: Option<NaiveDate>,
    pub valid_to: Option<NaiveDate>,
}

impl IpAssignment {
    pub fn covers(&self, date: NaiveDate) -> bool {
        self.valid_from.map_or(true, |from| date >= from)
            && self.valid_to.map_or(true, |to| date <= to)
    }
}

/// Map organization names to institutions via the pattern list, then assign
/// each IP3 block: a sole owner gets it, a plurality owner gets it, and an
/// exact tie drops the block.
pub fn assign_ip3(
    org_ips: &[OrgIp],
    institution_patterns: &[(String, String)],
) -> Result<Vec<IpAssignment>> {
    let compiled: Vec<(String, Regex)> = institution_patterns
        .iter()
        .map(|(id, pattern)| {
            regex::RegexBuilder::new(pattern)
                .case_insensitive(true)
                .build()
                .map(|re| (id.clone(), re))
                .map_err(|e| Error::parse(format!("bad pattern for {id}: {e}")))
        })
        .collect::<Result<_>>()?;

    // Count addresses per (prefix, institution); first matching pattern wins.
    let mut counts: BTreeMap<Ip3, BTreeMap<&str, usize>> = BTreeMap::new();
    for org in org_ips {
        let Some((institution, _)) = compiled.iter().find(|(_, re)| re.is_match(&org.org_name))
        else {
            continue;
        };
        let octets = org.ipv4.octets();
        let prefix = Ip3([octets[0], octets[1], octets[2]]);
        *counts
            .entry(prefix)
            .or_default()
            .entry(institution.as_str())
            .or_insert(0) += 1;
    }

    let mut out = Vec::new();
    for (prefix, owners) in counts {
        let max = owners.values().copied().max().unwrap_or(0);
        let top: Vec<&str> = owners
            .iter()
            .filter(|(_, &c)| c == max)
            .map(|(id, _)| *id)
            .collect();
        match top.as_slice() {
            [single] => out.push(IpAssignment {
                ip3_prefix: prefix,
                institution_id: (*single).to_owned(),
                valid_from: None,
                valid_to: None,
            }),
            _ => {
                log::info!("dropping {prefix}: {} institutions tie at {max} addresses", top.len());
            }
        }
    }
    Ok(out)
}

/// Backtest assignment validity against holdings access. Walking backward
/// from `anchor` (2016Q4 for the published logs), the first pair of
/// consecutive quarters in which the institution accessed at most
/// `min_fraction` of its holdings truncates the assignment to start at the
/// quarter after the later failing quarter. Quarters without data are
/// skipped.
pub fn backtest_validity(
    assignments: Vec<IpAssignment>,
    access_fraction: &BTreeMap<(String, Quarter), f64>,
    anchor: Quarter,
    earliest: Quarter,
    min_fraction: f64,
) -> Vec<IpAssignment> {
    let mut truncate_at: BTreeMap<String, Quarter> = BTreeMap::new();
    let institutions: std::collections::BTreeSet<String> = assignments
        .iter()
        .map(|a| a.institution_id.clone())
        .collect();
    for institution in institutions {
        let mut q = anchor;
        while q > earliest {
            let this = access_fraction.get(&(institution.clone(), q));
            let prev = access_fraction.get(&(institution.clone(), q.prev()));
            if let (Some(&a), Some(&b)) = (this, prev) {
                if a <= min_fraction && b <= min_fraction {
                    truncate_at.insert(institution, q.next());
                    break;
                }
            }
            q = q.prev();
        }
    }
    assignments
        .into_iter()
        .map(|mut a| {
            if let Some(from_quarter) = truncate_at.get(a.institution_id.as_str()) {
                let from = from_quarter.start_date();
                if a.valid_from.map_or(true, |existing| from > existing) {
                    a.valid_from = Some(from);
                }
            }
            a
        })
        .collect()
}

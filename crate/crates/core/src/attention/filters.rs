use std::collections::{BTreeMap, BTreeSet};

use super::log_parse::{Ip3, LogEntry};

pub const DEFAULT_ROBOT_THRESHOLD: usize = 1000;
pub const DEFAULT_DEDUP_WINDOW_SECS: i64 = 300;

/// Remove every entry of an (ip3, day) whose distinct filing requests
/// exceed the robot threshold. Other days of the same address survive.
pub fn filter_robots(entries: Vec<LogEntry>, threshold: usize) -> Vec<LogEntry> {
    let mut distinct: BTreeMap<(Ip3, chrono::NaiveDate), BTreeSet<&str>> = BTreeMap::new();
    for e in &entries {
        distinct
            .entry((e.ip3, e.date))
            .or_default()
            .insert(e.accession.as_str());
    }
    let robots: BTreeSet<(Ip3, chrono::NaiveDate)> = distinct
        .into_iter()
        .filter(|(_, accessions)| accessions.len() > threshold)
        .map(|(key, _)| key)
        .collect();
    entries
        .into_iter()
        .filter(|e| !robots.contains(&(e.ip3, e.date)))
        .collect()
}

/// Keep governance-research requests: drop index pages, icons, XML filings,
/// and responses under 500 bytes, then collapse same-(ip3, accession)
/// requests less than five minutes apart into one view.
pub fn filter_valid(entries: Vec<LogEntry>, dedup_window_secs: i64) -> Vec<LogEntry> {
    let mut kept: Vec<LogEntry> = entries
        .into_iter()
        .filter(|e| {
            let ext = e.extension.to_lowercase();
            !e.is_index
                && !ext.ends_with(".ico")
                && !ext.ends_with(".xml")
                && !ext.contains("index.htm")
                && e.size >= 500
        })
        .collect();
    kept.sort_by(|a, b| {
        (a.ip3, &a.accession, a.timestamp(), &a.ip_suffix)
            .cmp(&(b.ip3, &b.accession, b.timestamp(), &b.ip_suffix))
    });
    let mut out: Vec<LogEntry> = Vec::with_capacity(kept.len());
    for entry in kept {
        let duplicate = out.last().is_some_and(|prev: &LogEntry| {
            prev.ip3 == entry.ip3
                && prev.accession == entry.accession
                && (entry.timestamp() - prev.timestamp()).num_seconds() < dedup_window_secs
        });
        if !duplicate {
            out.push(entry);
        }
    }
    out
}

use std::collections::BTreeMap;
use std::path::Path;

use chrono::NaiveDate;

use crate::error::{Error, Result};
use crate::model::{subtract_years, VoteRecord};

const DEFAULT_TYPE_TABLE: &str = include_str!("../../data/proposal_types.tsv");

/// Minimum normalized overlap for a prefix match; guards against trivial
/// matches on very short descriptions.
const MIN_PREFIX_LEN: usize = 12;

/// Description-pattern table mapping proposal headings to 25 coarse types.
#[derive(Debug, Clone)]
pub struct TypeTable {
    /// (normalized pattern, type id), in file order.
    patterns: Vec<(String, u8)>,
    exact: BTreeMap<String, u8>,
}

impl Default for TypeTable {
    fn default() -> Self {
        TypeTable::parse(DEFAULT_TYPE_TABLE).expect("bundled type table parses")
    }
}

impl TypeTable {
    pub fn parse(content: &str) -> Result<TypeTable> {
        let mut patterns = Vec::new();
        let mut exact = BTreeMap::new();
        for (lineno, line) in content.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (pattern, id) = line.split_once('\t').ok_or_else(|| {
                Error::parse(format!("type table line {} lacks a tab", lineno + 1))
            })?;
            let id: u8 = id
                .trim()
                .parse()
                .map_err(|_| Error::parse(format!("bad type id on line {}", lineno + 1)))?;
            let norm = normalize_description(pattern);
            exact.entry(norm.clone()).or_insert(id);
            patterns.push((norm, id));
        }
        if patterns.is_empty() {
            return Err(Error::data("type table has no patterns"));
        }
        Ok(TypeTable { patterns, exact })
    }

    pub fn load(path: &Path) -> Result<TypeTable> {
        TypeTable::parse(&std::fs::read_to_string(path)?)
    }

    pub fn len(&self) -> usize {
        self.patterns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.patterns.is_empty()
    }
}

/// Lowercase, collapse runs of non-alphanumerics to single spaces.
fn normalize_description(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    let mut pending_space = false;
    for c in s.chars() {
        if c.is_alphanumeric() {
            if pending_space && !out.is_empty() {
                out.push(' ');
            }
            pending_space = false;
            out.extend(c.to_lowercase());
        } else {
            pending_space = true;
        }
    }
    out
}

/// Classify a proposal description: exact normalized match first, then the
/// longest prefix match in either direction (tolerating truncated source
/// descriptions), requiring at least [`MIN_PREFIX_LEN`] shared characters.
/// No fuzzy guessing: unmatched descriptions return `None`.
pub fn classify_proposal_type(description: &str, table: &TypeTable) -> Option<u8> {
    let norm = normalize_description(description);
    if norm.is_empty() {
        return None;
    }
    if let Some(&id) = table.exact.get(&norm) {
        return Some(id);
    }
    let mut best: Option<(usize, u8)> = None;
    for (pattern, id) in &table.patterns {
        let shared = if norm.starts_with(pattern.as_str()) {
            pattern.len()
        } else if pattern.starts_with(norm.as_str()) {
            norm.len()
        } else {
            continue;
        };
        if shared < MIN_PREFIX_LEN {
            continue;
        }
        let better = match best {
            None => true,
            Some((len, best_id)) => shared > len || (shared == len && *id < best_id),
        };
        if better {
            best = Some((shared, *id));
        }
    }
    best.map(|(_, id)| id)
}

/// Non-ML alignment baseline: for each classified fight proposal, take the
/// institution's mean against-management label over same-type proposals
/// with meeting dates in the two years up to the campaign start, then
/// average over fight proposals. `None` when no fight proposal has
/// same-type history.
pub fn type_based_align(
    fight_proposals: &[(String, String)],
    votes: &[VoteRecord],
    table: &TypeTable,
    campaign_start: NaiveDate,
    window_years: i32,
) -> Option<f64> {
    let window_start = subtract_years(campaign_start, window_years);
    // Classify every historical description once.
    let mut description_type: BTreeMap<&str, Option<u8>> = BTreeMap::new();
    for v in votes {
        description_type
            .entry(v.description.as_str())
            .or_insert_with(|| classify_proposal_type(&v.description, table));
    }
    // Institution-level labels per historical proposal, grouped by type.
    let mut per_type: BTreeMap<u8, BTreeMap<&str, (usize, usize)>> = BTreeMap::new();
    for v in votes {
        if v.meeting_date < window_start || v.meeting_date > campaign_start {
            continue;
        }
        let Some(ty) = description_type[v.description.as_str()] else {
            continue;
        };
        let entry = per_type
            .entry(ty)
            .or_default()
            .entry(v.proposal_id.as_str())
            .or_insert((0, 0));
        entry.1 += 1;
        if v.against_management() {
            entry.0 += 1;
        }
    }

    let mut sum = 0.0;
    let mut n = 0usize;
    for (_, description) in fight_proposals {
        let Some(ty) = classify_proposal_type(description, table) else {
            continue;
        };
        let Some(history) = per_type.get(&ty) else {
            continue;
        };
        if history.is_empty() {
            continue;
        }
        let mean_label: f64 = history
            .values()
            .map(|&(against, total)| against as f64 / total as f64)
            .sum::<f64>()
            / history.len() as f64;
        sum += mean_label;
        n += 1;
    }
    if n == 0 {
        None
    } else {
        Some(sum / n as f64)
    }
}

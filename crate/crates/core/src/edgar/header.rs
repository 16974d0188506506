use std::collections::{HashMap, HashSet};
use std::fmt;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::index::IndexEntry;

/// The contested-solicitation proxy form families.
pub const CONTESTED_FORMS: [&str; 3] = ["DFAN14A", "DEFC14A", "PREC14A"];

/// Canonical 20-character dashed accession id, e.g. `0000921895-07-000903`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Accession(String);

impl Accession {
    pub fn new(s: &str) -> Result<Accession> {
        let s = s.trim();
        let bytes = s.as_bytes();
        let well_formed = bytes.len() == 20
            && bytes[10] == b'-'
            && bytes[13] == b'-'
            && bytes
                .iter()
                .enumerate()
                .all(|(i, b)| if i == 10 || i == 13 { *b == b'-' } else { b.is_ascii_digit() });
        if well_formed {
            Ok(Accession(s.to_owned()))
        } else {
            Err(Error::parse(format!("malformed accession id {s:?}")))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Accession {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl TryFrom<String> for Accession {
    type Error = Error;
    fn try_from(s: String) -> Result<Accession> {
        Accession::new(&s)
    }
}

impl From<Accession> for String {
    fn from(a: Accession) -> String {
        a.0
    }
}

/// One SEC filing with its header metadata and raw text.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FilingRecord {
    pub accession: Accession,
    pub form_type: String,
    pub filer_cik: u64,
    /// Zero when the header carries no subject-company section.
    pub subject_cik: u64,
    pub filer_name: String,
    pub subject_name: String,
    pub date_filed: NaiveDate,
    pub body: String,
    /// Header irregularities observed while parsing.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub diagnostics: Vec<String>,
}

/// Parse the SGML header block of a full-submission text file. Extracts the
/// accession, form type, filing date, and the FILED BY / SUBJECT COMPANY
/// sections. For the contested-solicitation forms both sections must be
/// present; elsewhere a missing subject is recorded as zero and flagged.
pub fn parse_sgml_header(body: &str) -> Result<FilingRecord> {
    let header_end = body.find("</SEC-HEADER>").unwrap_or(body.len());
    let header = &body[..header_end];
    if !header.contains("ACCESSION NUMBER:") {
        return Err(Error::parse("no SGML header block found"));
    }

    #[derive(PartialEq, Clone, Copy)]
    enum Section {
        Top,
        Subject,
        FiledBy,
    }

    let mut section = Section::Top;
    let mut accession: Option<Accession> = None;
    let mut form_type = String::new();
    let mut date_filed: Option<NaiveDate> = None;
    let mut filer: (u64, String) = (0, String::new());
    let mut subject: (u64, String) = (0, String::new());
    let mut seen_subject_blocks = 0u32;
    let mut seen_filer_blocks = 0u32;
    let mut diagnostics = Vec::new();

    for raw in header.lines() {
        let line = raw.trim();
        if line.starts_with("SUBJECT COMPANY") {
            section = Section::Subject;
            seen_subject_blocks += 1;
            if seen_subject_blocks == 2 {
                diagnostics.push("duplicate SUBJECT COMPANY block; first wins".to_owned());
                log::warn!("duplicate SUBJECT COMPANY block; first wins");
            }
            continue;
        }
        if line.starts_with("FILED BY") || line.starts_with("FILER") {
            section = Section::FiledBy;
            seen_filer_blocks += 1;
            if seen_filer_blocks == 2 {
                diagnostics.push("duplicate FILED BY block; first wins".to_owned());
            }
            continue;
        }
        let Some((key, value)) = line.split_once(':') else {
            continue;
        };
        let key = key.trim();
        let value = value.trim();
        match (section, key) {
            (Section::Top, "ACCESSION NUMBER") => {
                accession = Some(Accession::new(value)?);
            }
            (Section::Top, "CONFORMED SUBMISSION TYPE") => {
                form_type = value.to_owned();
            }
            (Section::Top, "FILED AS OF DATE") => {
                date_filed = NaiveDate::parse_from_str(value, "%Y%m%d").ok();
                if date_filed.is_none() {
                    diagnostics.push(format!("unparseable FILED AS OF DATE {value:?}"));
                }
            }
            (Section::Subject, "COMPANY CONFORMED NAME") if subject.1.is_empty() => {
                subject.1 = value.to_owned();
            }
            (Section::Subject, "CENTRAL INDEX KEY") if subject.0 == 0 => {
                subject.0 = value.parse().unwrap_or(0);
            }
            (Section::FiledBy, "COMPANY CONFORMED NAME") if filer.1.is_empty() => {
                filer.1 = value.to_owned();
            }
            (Section::FiledBy, "CENTRAL INDEX KEY") if filer.0 == 0 => {
                filer.0 = value.parse().unwrap_or(0);
            }
            _ => {}
        }
    }

    let accession = accession.ok_or_else(|| Error::parse("header lacks an accession number"))?;
    let date_filed =
        date_filed.ok_or_else(|| Error::parse("header lacks a parseable FILED AS OF DATE"))?;
    if subject.0 == 0 {
        diagnostics.push("no subject company in header".to_owned());
    }
    if CONTESTED_FORMS.contains(&form_type.as_str()) && (filer.0 == 0 || subject.0 == 0) {
        return Err(Error::parse(format!(
            "contested form {form_type} requires both FILED BY and SUBJECT COMPANY sections"
        )));
    }

    Ok(FilingRecord {
        accession,
        form_type,
        filer_cik: filer.0,
        subject_cik: subject.0,
        filer_name: filer.1,
        subject_name: subject.1,
        date_filed,
        body: body.to_owned(),
        diagnostics,
    })
}

/// Lossy-decode arbitrary bytes, then parse. Never panics; returns a typed
/// error for anything that is not a filing.
pub fn parse_sgml_header_bytes(bytes: &[u8]) -> Result<FilingRecord> {
    parse_sgml_header(&String::from_utf8_lossy(bytes))
}

/// Keep only filings whose filer appears in the 13F-filer CIK set.
pub fn filter_13f_filers(filings: Vec<FilingRecord>, thirteenf_ciks: &HashSet<u64>) -> Vec<FilingRecord> {
    filings
        .into_iter()
        .filter(|f| thirteenf_ciks.contains(&f.filer_cik))
        .collect()
}

/// Collect CIKs that have filed a 13F holdings report (13F-HR, 13F-NT, or
/// 13F-E, including amendments).
pub fn thirteenf_ciks_from_index<'a>(
    entries: impl IntoIterator<Item = &'a IndexEntry>,
) -> HashSet<u64> {
    entries
        .into_iter()
        .filter(|e| {
            let base = e.form_type.split('/').next().unwrap_or("").trim();
            matches!(base, "13F-HR" | "13F-NT" | "13F-E")
        })
        .map(|e| e.cik)
        .collect()
}

/// Drop filings that share a normalized body hash with an earlier one;
/// subject companies often mirror the activist's document verbatim.
pub fn dedupe_by_body(filings: Vec<FilingRecord>) -> Vec<FilingRecord> {
    let mut seen: HashMap<u64, Accession> = HashMap::new();
    let mut out = Vec::with_capacity(filings.len());
    let mut sorted = filings;
    sorted.sort_by(|a, b| {
        a.date_filed
            .cmp(&b.date_filed)
            .then_with(|| a.accession.cmp(&b.accession))
    });
    for filing in sorted {
        let hash = normalized_body_hash(&filing.body);
        match seen.get(&hash) {
            Some(first) => {
                log::info!(
                    "dropping {} as duplicate of {first} (same normalized body)",
                    filing.accession
                );
            }
            None => {
                seen.insert(hash, filing.accession.clone());
                out.push(filing);
            }
        }
    }
    out
}

fn normalized_body_hash(body: &str) -> u64 {
    let mut h: u64 = 0xcbf29ce484222325;
    let mut prev_space = false;
    // Skip the header so mirror filings with different headers compare equal.
    let start = body.find("</SEC-HEADER>").map(|i| i + 13).unwrap_or(0);
    for c in body[start..].chars() {
        let c = c.to_ascii_lowercase();
        if c.is_whitespace() {
            prev_space = true;
            continue;
        }
        if prev_space {
            h ^= b' ' as u64;
            h = h.wrapping_mul(0x100000001b3);
            prev_space = false;
        }
        let mut buf = [0u8; 4];
        for b in c.encode_utf8(&mut buf).bytes() {
            h ^= b as u64;
            h = h.wrapping_mul(0x100000001b3);
        }
    }
    h
}

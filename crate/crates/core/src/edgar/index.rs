use std::fmt::Write as _;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

/// One row of an EDGAR quarterly master index.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexEntry {
    pub cik: u64,
    pub company_name: String,
    pub form_type: String,
    pub date_filed: NaiveDate,
    pub path: String,
}

/// Parse result with counters for malformed rows.
#[derive(Debug, Clone, Default)]
pub struct IndexParse {
    pub entries: Vec<IndexEntry>,
    pub skipped: usize,
    pub warnings: Vec<String>,
}

/// Parse pipe-delimited master-index content. Data rows have five fields:
/// `CIK|Company Name|Form Type|Date Filed|Filename`. The header block and
/// separator lines are ignored; rows that look like data but carry a bad
/// CIK or date are skipped and counted rather than failing the parse.
pub fn parse_master_index(index_text: &str) -> IndexParse {
    let mut out = IndexParse::default();
    if index_text.trim().is_empty() {
        out.warnings.push("empty master index input".to_owned());
        return out;
    }
    for line in index_text.lines() {
        let line = line.trim_end();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split('|').collect();
        if fields.len() != 5 {
            continue; // header prose, dashes, or other noise
        }
        if fields[0].trim().eq_ignore_ascii_case("cik") {
            continue; // column-name row
        }
        let cik = fields[0].trim().parse::<u64>().ok().filter(|c| *c > 0);
        let date = NaiveDate::parse_from_str(fields[3].trim(), "%Y-%m-%d").ok();
        let form_type = fields[2].trim();
        match (cik, date, form_type.is_empty()) {
            (Some(cik), Some(date_filed), false) => out.entries.push(IndexEntry {
                cik,
                company_name: fields[1].trim().to_owned(),
                form_type: form_type.to_owned(),
                date_filed,
                path: fields[4].trim().to_owned(),
            }),
            _ => {
                out.skipped += 1;
                log::warn!("skipping malformed index row: {line:?}");
            }
        }
    }
    out
}

/// Serialize entries back to master-index rows (no header block); inverse
/// of [`parse_master_index`] on well-formed entries.
pub fn serialize_master_index(entries: &[IndexEntry]) -> String {
    let mut out = String::new();
    for e in entries {
        let _ = writeln!(
            out,
            "{}|{}|{}|{}|{}",
            e.cik, e.company_name, e.form_type, e.date_filed, e.path
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = "\
Description:           Master Index of EDGAR Dissemination Feed
Last Data Received:    March 31, 2013
Anonymous FTP:         ftp://ftp.sec.gov/edgar/
Cloud HTTP:            https://www.sec.gov/Archives/

CIK|Company Name|Form Type|Date Filed|Filename
--------------------------------------------------------------------------------
921669|ICAHN CARL C|DFAN14A|2013-02-14|edgar/data/921669/0000921669-13-000001.txt
1319687|FLAGG STREET CAPITAL LLC|PREC14A|2007-04-23|edgar/data/1319687/0000921895-07-000903.txt
";

    #[test]
    fn parses_data_rows() {
        let parsed = parse_master_index(SAMPLE);
        assert_eq!(parsed.entries.len(), 2);
        assert_eq!(parsed.skipped, 0);
        let first = &parsed.entries[0];
        assert_eq!(first.cik, 921669);
        assert_eq!(first.form_type, "DFAN14A");
        assert_eq!(
            first.date_filed,
            NaiveDate::from_ymd_opt(2013, 2, 14).unwrap()
        );
    }

    #[test]
    fn header_only_is_empty() {
        let parsed = parse_master_index("CIK|Company Name|Form Type|Date Filed|Filename\n");
        assert!(parsed.entries.is_empty());
        assert_eq!(parsed.skipped, 0);
    }

    #[test]
    fn empty_input_warns() {
        let parsed = parse_master_index("");
        assert!(parsed.entries.is_empty());
        assert!(!parsed.warnings.is_empty());
    }

    #[test]
    fn malformed_rows_counted() {
        let text = "\
921669|ICAHN CARL C|DFAN14A|2013-02-14|edgar/data/a.txt
0|BAD CIK|DFAN14A|2013-02-14|edgar/data/b.txt
921670|OK CO|DEF 14A|2013-03-01|edgar/data/c.txt
921671|BAD DATE|DEF 14A|2013-13-45|edgar/data/d.txt
921672|OK CO 2|PREC14A|2013-03-02|edgar/data/e.txt
";
        let parsed = parse_master_index(text);
        assert_eq!(parsed.entries.len(), 3);
        assert_eq!(parsed.skipped, 2);
    }

    #[test]
    fn round_trip_identity() {
        let parsed = parse_master_index(SAMPLE);
        let reparsed = parse_master_index(&serialize_master_index(&parsed.entries));
        assert_eq!(parsed.entries, reparsed.entries);
    }
}

use std::fmt;
use std::io::{BufReader, Read};
use std::path::Path;

use chrono::{NaiveDate, NaiveTime};
use serde::{Deserialize, Serialize};

use crate::edgar::Accession;
use crate::error::{Error, Result};

/// First three octets of an anonymized IPv4 address.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Ip3(pub [u8; 3]);

impl Ip3 {
    /// Parse from a full dotted address whose last octet may be an
    /// anonymization token ("199.253.64.mns") or a number.
    pub fn parse_prefix(ip: &str) -> Option<(Ip3, String)> {
        let mut parts = ip.trim().split('.');
        let a = parts.next()?.parse::<u8>().ok()?;
        let b = parts.next()?.parse::<u8>().ok()?;
        let c = parts.next()?.parse::<u8>().ok()?;
        let suffix = parts.next().unwrap_or("").to_owned();
        if parts.next().is_some() {
            return None;
        }
        Some((Ip3([a, b, c]), suffix))
    }
}

impl fmt::Display for Ip3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}.{}", self.0[0], self.0[1], self.0[2])
    }
}

/// One typed server-log row.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LogEntry {
    pub ip3: Ip3,
    pub ip_suffix: String,
    pub date: NaiveDate,
    pub time: NaiveTime,
    pub cik: u64,
    pub accession: Accession,
    pub extension: String,
    pub size: u64,
    pub is_index: bool,
}

impl LogEntry {
    pub fn timestamp(&self) -> chrono::NaiveDateTime {
        self.date.and_time(self.time)
    }
}

#[derive(Debug, Default)]
pub struct LogParse {
    pub entries: Vec<LogEntry>,
    pub skipped: usize,
}

/// Leading columns of the published DERA log schema; files may carry more.
const EXPECTED_COLUMNS: [&str; 10] = [
    "ip", "date", "time", "zone", "cik", "accession", "extention", "code", "size", "idx",
];

/// Parse a DERA server-log CSV. The header must carry the published column
/// layout (schema drift is a hard error); malformed data rows are skipped
/// and counted.
pub fn parse_log<R: Read>(reader: R) -> Result<LogParse> {
    let mut rdr = csv::ReaderBuilder::new().flexible(true).from_reader(reader);
    let headers = rdr
        .headers()
        .map_err(|e| Error::parse(format!("log header: {e}")))?
        .clone();
    let names: Vec<String> = headers.iter().map(|h| h.trim().to_lowercase()).collect();
    if names.len() < EXPECTED_COLUMNS.len()
        || names[..EXPECTED_COLUMNS.len()] != EXPECTED_COLUMNS
    {
        return Err(Error::parse(format!(
            "log schema mismatch: expected columns starting {:?}, got {:?}",
            EXPECTED_COLUMNS, names
        )));
    }
    let mut out = LogParse::default();
    for record in rdr.records() {
        let record = record.map_err(|e| Error::parse(format!("log row: {e}")))?;
        match parse_row(&record) {
            Some(entry) => out.entries.push(entry),
            None => {
                out.skipped += 1;
            }
        }
    }
    Ok(out)
}

fn parse_row(record: &csv::StringRecord) -> Option<LogEntry> {
    let field = |i: usize| record.get(i).map(str::trim);
    let (ip3, ip_suffix) = Ip3::parse_prefix(field(0)?)?;
    let date = NaiveDate::parse_from_str(field(1)?, "%Y-%m-%d").ok()?;
    let time = NaiveTime::parse_from_str(field(2)?, "%H:%M:%S").ok()?;
    let cik = parse_lenient_u64(field(4)?)?;
    let accession = Accession::new(field(5)?).ok()?;
    let extension = field(6)?.to_owned();
    let size = parse_lenient_u64(field(8)?).unwrap_or(0);
    let idx = parse_lenient_u64(field(9)?).unwrap_or(0);
    Some(LogEntry {
        ip3,
        ip_suffix,
        date,
        time,
        cik,
        accession,
        extension,
        size,
        is_index: idx != 0,
    })
}

/// DERA exports integers in float form ("1111111.0"); accept both.
fn parse_lenient_u64(s: &str) -> Option<u64> {
    if let Ok(v) = s.parse::<u64>() {
        return Some(v);
    }
    let stripped = s.strip_suffix(".0").unwrap_or(s);
    stripped.parse::<u64>().ok()
}

/// Open a log file, decompressing transparently when gzip magic bytes are
/// present.
pub fn open_log_reader(path: &Path) -> Result<Box<dyn Read>> {
    let mut file = std::fs::File::open(path)?;
    let mut magic = [0u8; 2];
    use std::io::Seek;
    let n = file.read(&mut magic)?;
    file.seek(std::io::SeekFrom::Start(0))?;
    if n == 2 && magic == [0x1f, 0x8b] {
        Ok(Box::new(flate2::read::GzDecoder::new(BufReader::new(file))))
    } else {
        Ok(Box::new(BufReader::new(file)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const HEADER: &str = "ip,date,time,zone,cik,accession,extention,code,size,idx,norefer,noagent,find,crawler,browser";

    fn row(ip: &str, acc: &str) -> String {
        format!("{ip},2013-02-14,09:15:00,0.0,921669.0,{acc},{acc}.txt,200.0,4096.0,0.0,0,0,10.0,0,")
    }

    #[test]
    fn parses_anonymized_prefix() {
        let csv = format!("{HEADER}\n{}\n", row("199.253.64.mns", "0000921669-13-000001"));
        let parsed = parse_log(csv.as_bytes()).unwrap();
        assert_eq!(parsed.entries.len(), 1);
        let e = &parsed.entries[0];
        assert_eq!(e.ip3, Ip3([199, 253, 64]));
        assert_eq!(e.ip_suffix, "mns");
        assert_eq!(e.cik, 921669);
        assert_eq!(e.size, 4096);
        assert!(!e.is_index);
    }

    #[test]
    fn malformed_octet_skipped() {
        let csv = format!(
            "{HEADER}\n{}\n{}\n",
            row("299.999.64.abc", "0000921669-13-000001"),
            row("10.20.30.x", "0000921669-13-000002"),
        );
        let parsed = parse_log(csv.as_bytes()).unwrap();
        assert_eq!(parsed.entries.len(), 1);
        assert_eq!(parsed.skipped, 1);
    }

    #[test]
    fn three_rows_parse() {
        let csv = format!(
            "{HEADER}\n{}\n{}\n{}\n",
            row("1.2.3.a", "0000921669-13-000001"),
            row("1.2.3.b", "0000921669-13-000002"),
            row("1.2.4.c", "0000921669-13-000003"),
        );
        assert_eq!(parse_log(csv.as_bytes()).unwrap().entries.len(), 3);
    }

    #[test]
    fn schema_drift_is_hard_error() {
        let csv = "ip,when,time,zone,cik\n1.2.3.a,2013-02-14,09:15:00,0.0,1\n";
        assert!(parse_log(csv.as_bytes()).is_err());
    }
}

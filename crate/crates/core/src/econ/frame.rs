use std::collections::BTreeMap;
use std::io::Read;
use std::path::Path;

use crate::error::{Error, Result};

/// Column-oriented table for regression inputs. Columns whose values all
/// parse as numbers load as numeric; everything else is a factor column.
#[derive(Debug, Clone, Default)]
pub struct Frame {
    n: usize,
    numeric: BTreeMap<String, Vec<f64>>,
    factors: BTreeMap<String, Vec<String>>,
}

impl Frame {
    pub fn new() -> Self {
        Frame::default()
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn push_numeric(&mut self, name: &str, values: Vec<f64>) -> Result<()> {
        self.check_len(name, values.len())?;
        self.numeric.insert(name.to_owned(), values);
        Ok(())
    }

    pub fn push_factor(&mut self, name: &str, values: Vec<String>) -> Result<()> {
        self.check_len(name, values.len())?;
        self.factors.insert(name.to_owned(), values);
        Ok(())
    }

    fn check_len(&mut self, name: &str, len: usize) -> Result<()> {
        if self.numeric.is_empty() && self.factors.is_empty() {
            self.n = len;
        } else if len != self.n {
            return Err(Error::data(format!(
                "column {name} has {len} rows, frame has {}",
                self.n
            )));
        }
        Ok(())
    }

    pub fn has_column(&self, name: &str) -> bool {
        self.numeric.contains_key(name) || self.factors.contains_key(name)
    }

    pub fn numeric(&self, name: &str) -> Result<&[f64]> {
        self.numeric
            .get(name)
            .map(Vec::as_slice)
            .ok_or_else(|| Error::data(format!("missing numeric column {name:?}")))
    }

    /// Encode a column as dense factor codes `0..n_levels`. Level codes are
    /// assigned in sorted level order, so encoding is deterministic. Numeric
    /// columns may also serve as factors (values are formatted first).
    pub fn factor_codes(&self, name: &str) -> Result<(Vec<u32>, usize)> {
        let values: Vec<String> = if let Some(v) = self.factors.get(name) {
            v.clone()
        } else if let Some(v) = self.numeric.get(name) {
            v.iter().map(|x| format!("{x}")).collect()
        } else {
            return Err(Error::data(format!("missing factor column {name:?}")));
        };
        let mut levels: Vec<&String> = values.iter().collect();
        levels.sort();
        levels.dedup();
        let index: BTreeMap<&String, u32> = levels
            .iter()
            .enumerate()
            .map(|(i, s)| (*s, i as u32))
            .collect();
        let codes = values.iter().map(|v| index[v]).collect();
        Ok((codes, levels.len()))
    }

    /// Codes for the interaction of two factor columns (e.g. institution
    /// crossed with year).
    pub fn interacted_codes(&self, a: &str, b: &str) -> Result<(Vec<u32>, usize)> {
        let (ca, _) = self.factor_codes(a)?;
        let (cb, nb) = self.factor_codes(b)?;
        let joint: Vec<u64> = ca
            .iter()
            .zip(&cb)
            .map(|(&x, &y)| x as u64 * nb as u64 + y as u64)
            .collect();
        let mut levels: Vec<u64> = joint.clone();
        levels.sort_unstable();
        levels.dedup();
        let index: BTreeMap<u64, u32> = levels
            .iter()
            .enumerate()
            .map(|(i, v)| (*v, i as u32))
            .collect();
        Ok((joint.iter().map(|v| index[v]).collect(), levels.len()))
    }

    /// Read a CSV with a header row; columns where every value parses as a
    /// float become numeric, the rest become factors. Empty cells in a
    /// numeric column load as NaN.
    pub fn from_csv_reader<R: Read>(reader: R) -> Result<Frame> {
        let mut rdr = csv::ReaderBuilder::new().from_reader(reader);
        let headers: Vec<String> = rdr
            .headers()
            .map_err(|e| Error::parse(format!("csv header: {e}")))?
            .iter()
            .map(str::to_owned)
            .collect();
        let mut columns: Vec<Vec<String>> = vec![Vec::new(); headers.len()];
        for record in rdr.records() {
            let record = record.map_err(|e| Error::parse(format!("csv row: {e}")))?;
            if record.len() != headers.len() {
                return Err(Error::parse(format!(
                    "csv row has {} fields, header has {}",
                    record.len(),
                    headers.len()
                )));
            }
            for (col, field) in columns.iter_mut().zip(record.iter()) {
                col.push(field.to_owned());
            }
        }
        let mut frame = Frame::new();
        for (name, raw) in headers.iter().zip(columns) {
            let parsed: Option<Vec<f64>> = raw
                .iter()
                .map(|s| {
                    let t = s.trim();
                    if t.is_empty() {
                        Some(f64::NAN)
                    } else {
                        t.parse::<f64>().ok()
                    }
                })
                .collect();
            match parsed {
                Some(nums) if !raw.is_empty() => frame.push_numeric(name, nums)?,
                _ => frame.push_factor(name, raw)?,
            }
        }
        Ok(frame)
    }

    pub fn from_csv_path(path: &Path) -> Result<Frame> {
        Frame::from_csv_reader(std::fs::File::open(path)?)
    }
}

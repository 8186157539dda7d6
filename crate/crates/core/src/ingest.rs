//! Input files: citation frequency tables and country totals.
//!
//! Citation tables are CSV with the header `citations,count` followed by rows
//! of two nonnegative integers. Country files use the header
//! `country,documents,citations`; names may be quoted and contain commas.
//! Lines starting with `#` are comments in both formats.

use std::io::Read;

use crate::distributions::EmpiricalDiscrete;
use crate::{Error, Result};

const CITATION_HEADER: [&str; 2] = ["citations", "count"];
const COUNTRY_HEADER: [&str; 3] = ["country", "documents", "citations"];

fn reader<R: Read>(input: R) -> csv::Reader<R> {
    csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .has_headers(false)
        .flexible(true)
        .from_reader(input)
}

fn line_of(record: &csv::StringRecord) -> u64 {
    record.position().map_or(0, |p| p.line())
}

/// Splits the stream into the header line number and the data records.
fn read_records<R: Read>(input: R, header: &[&str]) -> Result<Vec<csv::StringRecord>> {
    let mut records = reader(input).into_records();
    let first = match records.next() {
        Some(r) => r?,
        None => {
            return Err(Error::parse(1, format!("missing header `{}`", header.join(","))));
        }
    };
    let found: Vec<String> = first.iter().map(|f| f.trim_start_matches('\u{feff}').to_ascii_lowercase()).collect();
    if found != header {
        return Err(Error::parse(
            line_of(&first),
            format!("expected header `{}`, found `{}`", header.join(","), found.join(",")),
        ));
    }
    let body: Vec<csv::StringRecord> = records
        .filter(|r| !matches!(r, Ok(rec) if rec.len() == 1 && rec[0].is_empty()))
        .collect::<std::result::Result<_, _>>()?;
    if body.is_empty() {
        return Err(Error::parse(line_of(&first) + 1, "no data rows"));
    }
    Ok(body)
}

fn field_u64(record: &csv::StringRecord, idx: usize, name: &str) -> Result<u64> {
    let raw = &record[idx];
    raw.parse::<u64>().map_err(|_| {
        Error::parse(line_of(record), format!("{name} must be a nonnegative integer, got `{raw}`"))
    })
}

/// Parses a citation frequency table into the empirical citation law.
pub fn parse_citation_counts<R: Read>(input: R) -> Result<EmpiricalDiscrete> {
    let body = read_records(input, &CITATION_HEADER)?;
    let mut rows = Vec::with_capacity(body.len());
    let mut seen = std::collections::HashMap::new();
    for rec in &body {
        let line = line_of(rec);
        if rec.len() != 2 {
            return Err(Error::parse(line, format!("expected 2 fields, found {}", rec.len())));
        }
        let value = field_u64(rec, 0, "citations")?;
        let count = field_u64(rec, 1, "count")?;
        if count == 0 {
            return Err(Error::parse(line, "count must be positive"));
        }
        if let Some(prev) = seen.insert(value, line) {
            return Err(Error::parse(line, format!("duplicate citation value {value} (first on line {prev})")));
        }
        rows.push((value, count));
    }
    EmpiricalDiscrete::from_counts(&rows)
}

/// Column selector for [`read_numeric_column`]: a header name or a 0-based index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ColumnRef {
    Name(String),
    Index(usize),
}

impl std::str::FromStr for ColumnRef {
    type Err = std::convert::Infallible;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Ok(match s.parse::<usize>() {
            Ok(i) => ColumnRef::Index(i),
            Err(_) => ColumnRef::Name(s.to_string()),
        })
    }
}

/// Reads one numeric column from a CSV stream.
///
/// Selecting by name requires a header row. Selecting by index treats the
/// first row as a header only when that field is not a number, so bare
/// one-value-per-line files work too.
pub fn read_numeric_column<R: Read>(input: R, column: &ColumnRef) -> Result<Vec<f64>> {
    let mut records = reader(input).into_records().peekable();
    let first = match records.peek() {
        Some(Ok(r)) => r.clone(),
        Some(Err(_)) => return Err(records.next().unwrap().unwrap_err().into()),
        None => return Err(Error::Empty("value file")),
    };
    let idx = match column {
        ColumnRef::Name(name) => {
            let idx = first.iter().position(|h| h == name).ok_or_else(|| {
                Error::parse(line_of(&first), format!("no column named `{name}` in header"))
            })?;
            records.next();
            idx
        }
        ColumnRef::Index(i) => {
            if first.get(*i).is_some_and(|f| f.parse::<f64>().is_err()) {
                records.next();
            }
            *i
        }
    };
    let mut values = Vec::new();
    for rec in records {
        let rec = rec?;
        if rec.len() == 1 && rec[0].is_empty() {
            continue;
        }
        let raw = rec.get(idx).ok_or_else(|| {
            Error::parse(line_of(&rec), format!("row has no column {idx}"))
        })?;
        let v: f64 = raw
            .parse()
            .map_err(|_| Error::parse(line_of(&rec), format!("not a number: `{raw}`")))?;
        if !v.is_finite() {
            return Err(Error::parse(line_of(&rec), format!("not a finite number: `{raw}`")));
        }
        values.push(v);
    }
    if values.is_empty() {
        return Err(Error::Empty("value file"));
    }
    Ok(values)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CountryRecord {
    pub name: String,
    pub documents: u64,
    pub citations: u64,
}

impl CountryRecord {
    pub fn new(name: impl Into<String>, documents: u64, citations: u64) -> Result<Self> {
        if documents == 0 {
            return Err(Error::Invalid("documents must be at least 1".into()));
        }
        Ok(Self {
            name: name.into(),
            documents,
            citations,
        })
    }

    /// Citations per document.
    pub fn ratio(&self) -> f64 {
        self.citations as f64 / self.documents as f64
    }
}

pub fn parse_country_totals<R: Read>(input: R) -> Result<Vec<CountryRecord>> {
    let body = read_records(input, &COUNTRY_HEADER)?;
    body.iter()
        .map(|rec| {
            let line = line_of(rec);
            if rec.len() != 3 {
                return Err(Error::parse(line, format!("expected 3 fields, found {}", rec.len())));
            }
            if rec[0].is_empty() {
                return Err(Error::parse(line, "empty country name"));
            }
            let documents = field_u64(rec, 1, "documents")?;
            let citations = field_u64(rec, 2, "citations")?;
            CountryRecord::new(&rec[0], documents, citations)
                .map_err(|e| Error::parse(line, e.to_string()))
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankedCountry {
    pub rank: usize,
    pub record: CountryRecord,
}

/// Orders countries by citations per document, descending; equal ratios are
/// ordered by name.
pub fn rank_countries(records: &[CountryRecord]) -> Result<Vec<RankedCountry>> {
    if records.is_empty() {
        return Err(Error::Empty("country list"));
    }
    let mut sorted = records.to_vec();
    // Compare exact fractions c1/d1 vs c2/d2 via cross-multiplication.
    sorted.sort_by(|a, b| {
        let lhs = b.citations as u128 * a.documents as u128;
        let rhs = a.citations as u128 * b.documents as u128;
        lhs.cmp(&rhs).then_with(|| a.name.cmp(&b.name))
    });
    Ok(sorted
        .into_iter()
        .enumerate()
        .map(|(i, record)| RankedCountry { rank: i + 1, record })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn citation_table_with_comments_and_crlf() {
        let text = "# comment\r\ncitations,count\r\n0,712503\r\n# mid comment\r\n1,70836\r\n";
        let law = parse_citation_counts(text.as_bytes()).unwrap();
        assert_abs_diff_eq!(law.prob(1), 0.0904, epsilon = 1e-4);
        assert_eq!(law.total(), 783339);
    }

    #[test]
    fn citation_single_row() {
        let law = parse_citation_counts("citations,count\n5,10\n".as_bytes()).unwrap();
        assert_eq!(law.values(), &[5]);
        assert_eq!(law.mean(), 5.0);
    }

    #[test]
    fn citation_errors_carry_line_numbers() {
        let cases = [
            ("5,10\n", 1),
            ("citations,count\n", 2),
            ("citations,count\n1,0\n", 2),
            ("citations,count\n1,2\nx,3\n", 3),
            ("citations,count\n1,2\n2,3\n1,4\n", 4),
            ("citations,count\n1,2,3\n", 2),
            ("citations,count\n-1,2\n", 2),
        ];
        for (text, line) in cases {
            match parse_citation_counts(text.as_bytes()) {
                Err(Error::Parse { line: l, .. }) => assert_eq!(l, line, "{text:?}"),
                other => panic!("{text:?}: {other:?}"),
            }
        }
    }

    #[test]
    fn country_parsing() {
        let text = "country,documents,citations\nSwitzerland,100,2246\n\"Korea, Republic of\",10,5\nX,1,0\n";
        let recs = parse_country_totals(text.as_bytes()).unwrap();
        assert_abs_diff_eq!(recs[0].ratio(), 22.46, epsilon = 1e-12);
        assert_eq!(recs[1].name, "Korea, Republic of");
        assert_eq!(recs[2].ratio(), 0.0);
        assert!(parse_country_totals("country,documents,citations\nX,0,5\n".as_bytes()).is_err());
        assert!(parse_country_totals("country,documents,citations\nX,5\n".as_bytes()).is_err());
    }

    #[test]
    fn numeric_columns() {
        let by_name = "a,roa\n1,2.5\n3,4.5\n";
        let v = read_numeric_column(by_name.as_bytes(), &"roa".parse().unwrap()).unwrap();
        assert_eq!(v, vec![2.5, 4.5]);
        let v = read_numeric_column(by_name.as_bytes(), &ColumnRef::Index(0)).unwrap();
        assert_eq!(v, vec![1.0, 3.0]);
        let bare = "# values\n1.5\n2\n\n3e1\n";
        let v = read_numeric_column(bare.as_bytes(), &ColumnRef::Index(0)).unwrap();
        assert_eq!(v, vec![1.5, 2.0, 30.0]);
        assert!(read_numeric_column("x\n".as_bytes(), &ColumnRef::Index(0)).is_err());
        assert!(read_numeric_column("x\n1\nfoo\n".as_bytes(), &ColumnRef::Index(0)).is_err());
        assert!(read_numeric_column("x\n1\n".as_bytes(), &"y".parse().unwrap()).is_err());
    }

    #[test]
    fn ranking_rules() {
        let one = [CountryRecord::new("Solo", 3, 4).unwrap()];
        assert_eq!(rank_countries(&one).unwrap()[0].rank, 1);
        let tie = [
            CountryRecord::new("Zeta", 10, 50).unwrap(),
            CountryRecord::new("Alpha", 2, 10).unwrap(),
        ];
        let ranked = rank_countries(&tie).unwrap();
        assert_eq!(ranked[0].record.name, "Alpha");
        assert_eq!(ranked[1].rank, 2);
        assert!(rank_countries(&[]).is_err());
    }
}

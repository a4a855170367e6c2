use std::collections::BTreeSet;
use std::ops::RangeInclusive;

use num_bigint::BigUint;

/// One line of a dataset file: `id <tab> provenance <tab> presentation`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Record {
    /// One-based line number in the source file.
    pub line: usize,
    pub id: String,
    pub provenance: String,
    pub presentation: String,
}

#[derive(thiserror::Error, Debug, Clone, PartialEq, Eq)]
pub enum DatasetError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: duplicate id {id:?}")]
    DuplicateId { line: usize, id: String },
}

/// Parses a dataset. Blank lines and lines starting with `#` are skipped.
/// Fields are tab-separated; without tabs a record may also be written
/// `id [provenance] presentation`, optionally with the presentation in
/// double quotes.
///
/// Malformed lines are returned as errors alongside the good records, so
/// one bad line does not hide the rest of the file.
pub fn parse_dataset(text: &str) -> (Vec<Record>, Vec<DatasetError>) {
    let mut records = Vec::new();
    let mut errors = Vec::new();
    let mut seen = BTreeSet::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        match parse_record(trimmed, line) {
            Ok(r) => {
                if seen.insert(r.id.clone()) {
                    records.push(r);
                } else {
                    errors.push(DatasetError::DuplicateId { line, id: r.id });
                }
            }
            Err(e) => errors.push(e),
        }
    }
    (records, errors)
}

fn parse_record(text: &str, line: usize) -> Result<Record, DatasetError> {
    let syntax = |msg: &str| DatasetError::Syntax {
        line,
        msg: msg.to_string(),
    };
    let (id, provenance, presentation) = if text.contains('\t') {
        let fields: Vec<&str> = text.split('\t').collect();
        if fields.len() != 3 {
            return Err(syntax("expected three tab-separated fields"));
        }
        (fields[0], fields[1], fields[2])
    } else {
        let (id, rest) = text
            .split_once(char::is_whitespace)
            .ok_or_else(|| syntax("missing presentation"))?;
        let rest = rest.trim_start();
        if !rest.starts_with('[') {
            return Err(syntax("expected a bracketed provenance label"));
        }
        let close = rest
            .find(']')
            .ok_or_else(|| syntax("unterminated provenance label"))?;
        (id, &rest[..=close], rest[close + 1..].trim())
    };
    let presentation = presentation.trim();
    let presentation = presentation
        .strip_prefix('"')
        .and_then(|s| s.strip_suffix('"'))
        .unwrap_or(presentation);
    if id.is_empty() {
        return Err(syntax("empty id"));
    }
    Ok(Record {
        line,
        id: id.trim().to_string(),
        provenance: provenance.trim().to_string(),
        presentation: presentation.to_string(),
    })
}

/// Properties every record of a dataset is expected to have.
///
/// File format: `key <tab> value` lines, `#` comments. Keys are `order`,
/// `d`, `multiplier` (`trivial` or `nontrivial`), and `balanced` /
/// `unbalanced` with an id list such as `1-48` or `1,3,5-7`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Expectations {
    pub order: Option<BigUint>,
    pub d: Option<usize>,
    pub multiplier_trivial: Option<bool>,
    pub balanced: Vec<RangeInclusive<u64>>,
    pub unbalanced: Vec<RangeInclusive<u64>>,
}

impl Expectations {
    pub fn parse(text: &str) -> Result<Self, DatasetError> {
        let mut exp = Expectations::default();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let syntax = |msg: String| DatasetError::Syntax { line, msg };
            let (key, value) = trimmed
                .split_once(char::is_whitespace)
                .ok_or_else(|| syntax("expected `key value`".into()))?;
            let value = value.trim();
            match key {
                "order" => {
                    exp.order = Some(
                        value
                            .parse()
                            .map_err(|_| syntax(format!("bad order {value:?}")))?,
                    )
                }
                "d" => {
                    exp.d = Some(
                        value
                            .parse()
                            .map_err(|_| syntax(format!("bad d {value:?}")))?,
                    )
                }
                "multiplier" => {
                    exp.multiplier_trivial = Some(match value {
                        "trivial" => true,
                        "nontrivial" => false,
                        _ => return Err(syntax(format!("bad multiplier {value:?}"))),
                    })
                }
                "balanced" => exp.balanced = parse_id_ranges(value).map_err(syntax)?,
                "unbalanced" => exp.unbalanced = parse_id_ranges(value).map_err(syntax)?,
                _ => return Err(syntax(format!("unknown key {key:?}"))),
            }
        }
        Ok(exp)
    }

    /// Expected balance of the record with this id, if the id is numeric
    /// and listed.
    pub fn balanced(&self, id: &str) -> Option<bool> {
        let n: u64 = id.parse().ok()?;
        if self.balanced.iter().any(|r| r.contains(&n)) {
            Some(true)
        } else if self.unbalanced.iter().any(|r| r.contains(&n)) {
            Some(false)
        } else {
            None
        }
    }
}

fn parse_id_ranges(text: &str) -> Result<Vec<RangeInclusive<u64>>, String> {
    text.split(',')
        .map(|part| {
            let part = part.trim();
            let bad = || format!("bad id range {part:?}");
            match part.split_once('-') {
                Some((a, b)) => {
                    let (a, b) = (
                        a.trim().parse().map_err(|_| bad())?,
                        b.trim().parse().map_err(|_| bad())?,
                    );
                    if a > b {
                        return Err(bad());
                    }
                    Ok(a..=b)
                }
                None => {
                    let a = part.parse().map_err(|_| bad())?;
                    Ok(a..=a)
                }
            }
        })
        .collect()
}

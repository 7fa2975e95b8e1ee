//! Link records from knot-table CSV files and from one-diagram-per-line
//! text input.

use std::io::Read;
use std::path::Path;

use thiserror::Error;

use crate::diagram::{braid_closure, parse_braid, parse_pd, BraidWord, Diagram};
use crate::khovanov::{parse_kh_polynomial, BigradedGroups};
use crate::laurent::LaurentPoly;

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("cannot read {path}: {reason}")]
    FileUnreadable { path: String, reason: String },
    #[error("column {0:?} not found in header")]
    ColumnMissing(String),
    #[error("bad column map entry {0:?}")]
    BadColumnMap(String),
}

/// One link: a diagram, ingested invariants, or both. Cell-level parse
/// errors are kept on the record rather than aborting the file.
#[derive(Clone, Debug, Default)]
pub struct LinkRecord {
    pub name: String,
    pub pd: Option<Diagram>,
    pub braid: Option<BraidWord>,
    pub jones: Option<LaurentPoly>,
    pub conway: Option<LaurentPoly>,
    pub kh: Option<BigradedGroups>,
    pub components: Option<u64>,
    /// Table metadata claiming the link is positive.
    pub positive: Option<bool>,
    pub errors: Vec<String>,
}

impl LinkRecord {
    pub fn from_diagram(name: impl Into<String>, d: Diagram) -> Self {
        LinkRecord { name: name.into(), pd: Some(d), ..Default::default() }
    }

    /// The diagram to compute from: the PD code if present, else the braid
    /// closure.
    pub fn diagram(&self) -> Option<Diagram> {
        self.pd.clone().or_else(|| self.braid.as_ref().map(braid_closure))
    }

    pub fn has_data(&self) -> bool {
        self.pd.is_some()
            || self.braid.is_some()
            || self.jones.is_some()
            || self.conway.is_some()
            || self.kh.is_some()
    }
}

pub const FIELDS: [&str; 8] = ["name", "pd", "braid", "jones", "conway", "kh", "components", "positive"];

/// Header name for each record field. Unset fields are looked up under
/// their usual names; explicitly set ones must exist.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ColumnMap {
    explicit: Vec<(String, String)>,
}

impl ColumnMap {
    /// Parses `field=Header,field=Header`.
    pub fn parse(spec: &str) -> Result<Self, IngestError> {
        let mut explicit = Vec::new();
        for part in spec.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (k, v) = part.split_once('=').ok_or_else(|| IngestError::BadColumnMap(part.to_string()))?;
            let k = k.trim().to_ascii_lowercase();
            if !FIELDS.contains(&k.as_str()) {
                return Err(IngestError::BadColumnMap(part.to_string()));
            }
            explicit.push((k, v.trim().to_string()));
        }
        Ok(ColumnMap { explicit })
    }

    fn aliases(field: &str) -> &'static [&'static str] {
        match field {
            "name" => &["name", "knot", "link"],
            "pd" => &["pd", "pd_notation", "pd notation"],
            "braid" => &["braid", "braid_notation", "braid notation"],
            "jones" => &["jones", "jones_polynomial", "jones polynomial"],
            "conway" => &["conway", "conway_polynomial", "conway polynomial"],
            "kh" => &["kh", "khovanov", "khovanov_polynomial", "khovanov polynomial"],
            "components" => &["components", "number_of_components", "n"],
            "positive" => &["positive"],
            _ => &[],
        }
    }

    fn resolve(&self, headers: &csv::StringRecord) -> Result<[Option<usize>; 8], IngestError> {
        let find = |name: &str| headers.iter().position(|h| h.trim().eq_ignore_ascii_case(name));
        let mut out = [None; 8];
        for (slot, field) in out.iter_mut().zip(FIELDS) {
            *slot = match self.explicit.iter().find(|(k, _)| k == field) {
                Some((_, header)) => Some(find(header).ok_or_else(|| IngestError::ColumnMissing(header.clone()))?),
                None => Self::aliases(field).iter().find_map(|a| find(a)),
            };
        }
        Ok(out)
    }
}

pub fn ingest_csv(path: &Path, columns: &ColumnMap) -> Result<Vec<LinkRecord>, IngestError> {
    let file = std::fs::File::open(path)
        .map_err(|e| IngestError::FileUnreadable { path: path.display().to_string(), reason: e.to_string() })?;
    ingest_reader(file, columns).map_err(|e| match e {
        IngestError::FileUnreadable { reason, .. } => IngestError::FileUnreadable { path: path.display().to_string(), reason },
        other => other,
    })
}

pub fn ingest_reader(reader: impl Read, columns: &ColumnMap) -> Result<Vec<LinkRecord>, IngestError> {
    let unreadable = |e: csv::Error| IngestError::FileUnreadable { path: "<input>".into(), reason: e.to_string() };
    let mut rdr = csv::ReaderBuilder::new().flexible(true).trim(csv::Trim::All).from_reader(reader);
    let headers = rdr.headers().map_err(unreadable)?.clone();
    if headers.is_empty() {
        return Ok(Vec::new());
    }
    let cols = columns.resolve(&headers)?;
    let mut out = Vec::new();
    for (row, result) in rdr.records().enumerate() {
        let line = row + 2;
        let cells = result.map_err(unreadable)?;
        let cell = |k: usize| cols[k].and_then(|c| cells.get(c)).map(str::trim).filter(|s| !s.is_empty());
        let mut rec = LinkRecord { name: cell(0).map_or_else(|| format!("row {line}"), str::to_string), ..Default::default() };
        let note = |field: &str, msg: String| rec_error(line, field, msg);
        let mut errors = Vec::new();
        if let Some(s) = cell(1) {
            match parse_pd(s) {
                Ok(d) => rec.pd = Some(d),
                Err(e) => errors.push(note("pd", e.to_string())),
            }
        }
        if let Some(s) = cell(2) {
            match parse_braid_cell(s) {
                Ok(b) => rec.braid = Some(b),
                Err(e) => errors.push(note("braid", e)),
            }
        }
        if let Some(s) = cell(3) {
            match LaurentPoly::parse(s, 't') {
                Ok(p) => rec.jones = Some(p),
                Err(e) => errors.push(note("jones", e.to_string())),
            }
        }
        if let Some(s) = cell(4) {
            match LaurentPoly::parse(s, 'z') {
                Ok(p) => rec.conway = Some(p),
                Err(e) => errors.push(note("conway", e.to_string())),
            }
        }
        if let Some(s) = cell(5) {
            match parse_kh_polynomial(s) {
                Ok(k) => rec.kh = Some(k),
                Err(e) => errors.push(note("kh", e.to_string())),
            }
        }
        if let Some(s) = cell(6) {
            match s.parse::<u64>() {
                Ok(n) if n >= 1 => rec.components = Some(n),
                _ => errors.push(note("components", format!("not a positive integer: {s:?}"))),
            }
        }
        if let Some(s) = cell(7) {
            match s.to_ascii_lowercase().as_str() {
                "y" | "yes" | "true" | "1" => rec.positive = Some(true),
                "n" | "no" | "false" | "0" => rec.positive = Some(false),
                _ => errors.push(note("positive", format!("not a yes/no value: {s:?}"))),
            }
        }
        rec.errors = errors;
        if !rec.has_data() && rec.errors.is_empty() {
            rec.errors.push(rec_error(line, "row", "no diagram or invariant cells".into()));
        }
        out.push(rec);
    }
    Ok(out)
}

fn rec_error(line: usize, field: &str, msg: String) -> String {
    format!("line {line}, {field}: {msg}")
}

/// `strands=n; ...` or a bare list such as `{1,1,-2}`, in which case the
/// strand count is one more than the largest generator.
pub fn parse_braid_cell(s: &str) -> Result<BraidWord, String> {
    if s.trim_start().starts_with("strands") {
        return parse_braid(s).map_err(|e| e.to_string());
    }
    let inner = s.trim().trim_start_matches(['{', '[', '(']).trim_end_matches(['}', ']', ')']);
    let letters = inner
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<i32>().map_err(|_| format!("bad braid letter {t:?}")))
        .collect::<Result<Vec<_>, _>>()?;
    let strands = letters.iter().map(|l| l.unsigned_abs() as usize).max().unwrap_or(0) + 1;
    BraidWord::new(letters, strands).map_err(|e| e.to_string())
}

/// Parses text input: one `PD[...]` or `strands=...` per line, optionally
/// prefixed by `name:`. Blank lines and `#` comments are skipped.
pub fn parse_text_input(text: &str) -> Vec<LinkRecord> {
    let mut out = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        out.push(parse_diagram_line(line, &format!("line {}", n + 1)));
    }
    out
}

pub fn parse_diagram_line(line: &str, default_name: &str) -> LinkRecord {
    let (name, body) = match line.split_once(':') {
        Some((name, rest)) if !name.contains('[') && !name.contains("strands") => (name.trim().to_string(), rest.trim()),
        _ => (default_name.to_string(), line),
    };
    let mut rec = LinkRecord { name, ..Default::default() };
    if body.starts_with("strands") {
        match parse_braid(body) {
            Ok(b) => rec.braid = Some(b),
            Err(e) => rec.errors.push(e.to_string()),
        }
    } else {
        match parse_pd(body) {
            Ok(d) => rec.pd = Some(d),
            Err(e) => rec.errors.push(e.to_string()),
        }
    }
    rec
}

//! Report streams: one JSON object per line, or tab-separated rows under a
//! fixed header. Rationals are always fraction strings.

use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;

use crate::arith::{fmt_rational, parse_rational, GaussianRational, QBase};
use crate::error::{Error, Result};
use crate::families::ParamPoint;
use crate::verify::VerificationReport;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Format {
    #[default]
    Json,
    Tsv,
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Json => "json",
            Format::Tsv => "tsv",
        })
    }
}

impl FromStr for Format {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "tsv" => Ok(Format::Tsv),
            _ => Err(Error::Parse(format!("unknown format {s:?}"))),
        }
    }
}

/// Column order of the TSV form. `values` joins the parameter vector with
/// `;`; empty cells are absent fields.
pub const TSV_COLUMNS: [&str; 18] = [
    "check_id",
    "family",
    "verdict",
    "values",
    "s",
    "base_inverted",
    "mp_circle",
    "generic",
    "D",
    "N",
    "n",
    "ratio",
    "witness",
    "expected_degree",
    "observed_degree",
    "seed",
    "attempts",
    "elapsed_ms",
];

pub fn tsv_header() -> String {
    TSV_COLUMNS.join("\t")
}

/// One report as a single line (no trailing newline).
pub fn serialize_report(r: &VerificationReport, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string(r).expect("reports always serialize"),
        Format::Tsv => to_tsv(r),
    }
}

/// Inverse of [`serialize_report`].
pub fn parse_report(line: &str, format: Format) -> Result<VerificationReport> {
    match format {
        Format::Json => serde_json::from_str(line).map_err(|e| Error::Parse(e.to_string())),
        Format::Tsv => from_tsv(line),
    }
}

/// Backslash escapes for the witness cell; `\e` marks a present but empty
/// witness so it stays distinct from an absent one.
fn escape(s: &str) -> String {
    if s.is_empty() {
        return "\\e".into();
    }
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '\\' => out.push_str("\\\\"),
            '\t' => out.push_str("\\t"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            c => out.push(c),
        }
    }
    out
}

fn unescape(s: &str) -> Result<String> {
    let mut out = String::with_capacity(s.len());
    let mut chars = s.chars();
    while let Some(c) = chars.next() {
        if c != '\\' {
            out.push(c);
            continue;
        }
        match chars.next() {
            Some('\\') => out.push('\\'),
            Some('t') => out.push('\t'),
            Some('n') => out.push('\n'),
            Some('r') => out.push('\r'),
            Some('e') => {}
            other => return Err(Error::Parse(format!("bad escape \\{other:?}"))),
        }
    }
    Ok(out)
}

fn opt<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map(T::to_string).unwrap_or_default()
}

fn to_tsv(r: &VerificationReport) -> String {
    let p = &r.params;
    let values: Vec<String> = p.values.iter().map(|v| v.to_string()).collect();
    let cells = [
        r.check_id.to_string(),
        r.family.to_string(),
        r.verdict.to_string(),
        values.join(";"),
        p.qbase.as_ref().map(|q| fmt_rational(q.s())).unwrap_or_default(),
        p.base_inverted.to_string(),
        p.mp_circle.as_ref().map(fmt_rational).unwrap_or_default(),
        p.generic.to_string(),
        opt(&r.dset),
        opt(&r.n_top),
        opt(&r.n_or_v),
        opt(&r.ratio),
        r.witness.as_deref().map(escape).unwrap_or_default(),
        opt(&r.expected_degree),
        opt(&r.observed_degree),
        r.seed.to_string(),
        r.attempts.to_string(),
        opt(&r.elapsed_ms),
    ];
    cells.join("\t")
}

fn field<T: FromStr>(cell: &str, name: &str) -> Result<T>
where
    T::Err: fmt::Display,
{
    cell.parse()
        .map_err(|e| Error::Parse(format!("column {name}: {e}")))
}

fn opt_field<T: FromStr>(cell: &str, name: &str) -> Result<Option<T>>
where
    T::Err: fmt::Display,
{
    if cell.is_empty() {
        Ok(None)
    } else {
        field(cell, name).map(Some)
    }
}

fn from_tsv(line: &str) -> Result<VerificationReport> {
    let cells: Vec<&str> = line.split('\t').collect();
    if cells.len() != TSV_COLUMNS.len() {
        return Err(Error::Parse(format!(
            "expected {} columns, got {}",
            TSV_COLUMNS.len(),
            cells.len()
        )));
    }
    let family = field(cells[1], "family")?;
    let values = if cells[3].is_empty() {
        Vec::new()
    } else {
        cells[3]
            .split(';')
            .map(|v| field::<GaussianRational>(v, "values"))
            .collect::<Result<_>>()?
    };
    let qbase = match cells[4] {
        "" => None,
        s => Some(QBase::new(parse_rational(s)?)?),
    };
    let mp_circle: Option<BigRational> = match cells[6] {
        "" => None,
        s => Some(parse_rational(s)?),
    };
    Ok(VerificationReport {
        check_id: field(cells[0], "check_id")?,
        family,
        verdict: field(cells[2], "verdict")?,
        params: ParamPoint {
            family,
            values,
            qbase,
            base_inverted: field(cells[5], "base_inverted")?,
            mp_circle,
            generic: field(cells[7], "generic")?,
        },
        dset: opt_field(cells[8], "D")?,
        n_top: opt_field(cells[9], "N")?,
        n_or_v: opt_field(cells[10], "n")?,
        ratio: opt_field(cells[11], "ratio")?,
        witness: if cells[12].is_empty() {
            None
        } else {
            Some(unescape(cells[12])?)
        },
        expected_degree: opt_field(cells[13], "expected_degree")?,
        observed_degree: opt_field(cells[14], "observed_degree")?,
        seed: field(cells[15], "seed")?,
        attempts: field(cells[16], "attempts")?,
        elapsed_ms: opt_field(cells[17], "elapsed_ms")?,
    })
}

//! CSV and JSON renderings of integer rows, q-polynomial tables and reports.
//!
//! CSV output is UTF-8 with LF line endings and a header row. Integers are
//! decimal; q-polynomials are their ascending coefficients joined by `;`.

use std::fmt::Write as _;
use std::str::FromStr;

use num_bigint::BigInt;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numbers::{
    a_polynomials, b_polynomials, c_polynomials, eulerian_row_closed, lah_row_closed, stirling2_row_closed, CMethod,
    StirlingVariant,
};
use crate::poly::QPolynomial;
use crate::shape::MultisetShape;
use crate::verify::{IdentityReport, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(format!("unknown format {other:?} (expected csv or json)")),
        }
    }
}

/// Integer row families served by the `table` command.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RowKind {
    Eulerian,
    Stirling2,
    Lah,
}

impl RowKind {
    pub fn name(self) -> &'static str {
        match self {
            RowKind::Eulerian => "eulerian",
            RowKind::Stirling2 => "stirling2",
            RowKind::Lah => "lah",
        }
    }
}

impl FromStr for RowKind {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "eulerian" => Ok(RowKind::Eulerian),
            "stirling2" => Ok(RowKind::Stirling2),
            "lah" => Ok(RowKind::Lah),
            other => Err(format!(
                "unknown row kind {other:?} (expected eulerian, stirling2 or lah)"
            )),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FamilyKind {
    A,
    B,
    C,
}

impl FamilyKind {
    pub fn name(self) -> &'static str {
        match self {
            FamilyKind::A => "A",
            FamilyKind::B => "B",
            FamilyKind::C => "C",
        }
    }
}

impl FromStr for FamilyKind {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "A" | "a" => Ok(FamilyKind::A),
            "B" | "b" => Ok(FamilyKind::B),
            "C" | "c" => Ok(FamilyKind::C),
            other => Err(format!("unknown q-family {other:?} (expected A, B or C)")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RowEntry {
    pub index: usize,
    #[serde(serialize_with = "as_decimal")]
    pub value: BigInt,
}

/// An integer row ready for rendering.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IntegerTable {
    pub shape: MultisetShape,
    pub kind: &'static str,
    pub rows: Vec<RowEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PolyEntry {
    pub index: usize,
    pub coefficients: QPolynomial,
    #[serde(serialize_with = "as_decimal")]
    pub at_one: BigInt,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PolyTable {
    pub shape: MultisetShape,
    pub kind: &'static str,
    pub rows: Vec<PolyEntry>,
}

fn as_decimal<S: serde::Serializer>(v: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

/// Eulerian rows are indexed from 0 (descent count), the ordered Stirling
/// rows from 1 (block count).
pub fn integer_table(shape: &MultisetShape, kind: RowKind) -> Result<IntegerTable> {
    let (values, base) = match kind {
        RowKind::Eulerian => (eulerian_row_closed(shape)?.values, 0),
        RowKind::Stirling2 => (stirling2_row_closed(shape, StirlingVariant::Corrected)?.values, 1),
        RowKind::Lah => (lah_row_closed(shape)?.values, 1),
    };
    let rows = values
        .into_iter()
        .enumerate()
        .map(|(i, value)| RowEntry { index: i + base, value })
        .collect();
    Ok(IntegerTable {
        shape: shape.clone(),
        kind: kind.name(),
        rows,
    })
}

pub fn poly_table(shape: &MultisetShape, kind: FamilyKind) -> Result<PolyTable> {
    let family = match kind {
        FamilyKind::A => a_polynomials(shape)?,
        FamilyKind::B => b_polynomials(shape)?,
        FamilyKind::C => c_polynomials(shape, CMethod::Enumeration)?,
    };
    let rows = family
        .values
        .into_iter()
        .enumerate()
        .map(|(i, p)| PolyEntry {
            index: i + 1,
            at_one: p.eval_at_one(),
            coefficients: p,
        })
        .collect();
    Ok(PolyTable {
        shape: shape.clone(),
        kind: kind.name(),
        rows,
    })
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn coeff_list(p: &QPolynomial) -> String {
    p.coeffs().iter().map(ToString::to_string).collect::<Vec<_>>().join(";")
}

fn value_field(v: &Value) -> String {
    match v {
        Value::Integer(i) => i.to_string(),
        Value::Poly(p) => coeff_list(p),
    }
}

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("serialization of plain data cannot fail")
}

impl IntegerTable {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => to_json(self) + "\n",
            Format::Csv => {
                let shape = csv_field(&self.shape.to_string());
                let mut out = String::from("shape,index,value\n");
                for r in &self.rows {
                    let _ = writeln!(out, "{shape},{},{}", r.index, r.value);
                }
                out
            }
        }
    }
}

impl PolyTable {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => to_json(self) + "\n",
            Format::Csv => {
                let shape = csv_field(&self.shape.to_string());
                let mut out = String::from("shape,index,coefficients,at_one\n");
                for r in &self.rows {
                    let _ = writeln!(out, "{shape},{},{},{}", r.index, coeff_list(&r.coefficients), r.at_one);
                }
                out
            }
        }
    }
}

pub const REPORT_CSV_HEADER: &str = "identity,shape,expected,status,n,lhs,rhs,equal";

/// CSV lines (no header) for one report, one per checked `n`.
pub fn report_csv_rows(report: &IdentityReport) -> String {
    let shape = csv_field(&report.shape.to_string());
    let status = serde_json::to_value(report.status)
        .ok()
        .and_then(|v| v.as_str().map(str::to_string))
        .unwrap_or_default();
    let mut out = String::new();
    for r in &report.results {
        let _ = writeln!(
            out,
            "{},{shape},{},{status},{},{},{},{}",
            report.identity,
            report.expected,
            r.n,
            value_field(&r.lhs),
            value_field(&r.rhs),
            r.equal
        );
    }
    out
}

/// Parses a shape for a renderer, rejecting the empty shape up front.
pub fn parse_counting_shape(s: &str) -> Result<(MultisetShape, bool)> {
    let (shape, dropped) = MultisetShape::parse_lossy(s)?;
    if shape.is_empty() {
        return Err(Error::EmptyShape);
    }
    Ok((shape, dropped))
}

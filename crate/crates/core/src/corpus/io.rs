//! JSON and CSV persistence for spectra and step functions.
//!
//! Floats are written with 17 significant digits, so a save/load cycle is
//! bit-exact.

use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::{Error, InputCode, Result};
use crate::rearrange::{ContinuousTail, Oscillation, SingularValues, Spectrum, SpectrumTail, StepFunction};

/// A stored spectrum or step function plus free-form metadata.
#[derive(Debug, Clone, PartialEq)]
pub struct Document {
    pub values: SingularValues<f64>,
    pub metadata: Map<String, Value>,
}

impl Document {
    pub fn new(values: SingularValues<f64>) -> Self {
        Document {
            values,
            metadata: Map::new(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

impl Format {
    /// CSV for `.csv` paths, JSON otherwise.
    pub fn from_path(path: &str) -> Self {
        if path.to_ascii_lowercase().ends_with(".csv") {
            Format::Csv
        } else {
            Format::Json
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TailRecord {
    coefficient: f64,
    exponent: f64,
    start_index: u64,
    /// Present only for the log-oscillating tail.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    offset: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    amplitude: Option<f64>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpectrumFile {
    name: String,
    mu: Vec<f64>,
    tail: Option<TailRecord>,
    #[serde(default)]
    metadata: Map<String, Value>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ContinuousTailRecord {
    coefficient: f64,
    shift: f64,
    exponent: f64,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StepFile {
    log_breakpoints: Vec<f64>,
    /// Plain values; replaced by `log_values` when a value would not survive
    /// `exp`/`ln` unchanged.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    values: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    log_values: Option<Vec<f64>>,
    beyond_last: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    tail: Option<ContinuousTailRecord>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    truncated: bool,
    #[serde(default, skip_serializing_if = "Map::is_empty")]
    metadata: Map<String, Value>,
}

fn schema(msg: impl Into<String>) -> Error {
    Error::input(InputCode::Schema, None, msg)
}

fn from_value(v: Value) -> Result<Document> {
    let obj = v.as_object().ok_or_else(|| schema("top level must be a JSON object"))?;
    if obj.contains_key("mu") {
        let f: SpectrumFile = serde_json::from_value(v).map_err(|e| schema(e.to_string()))?;
        spectrum_from_file(f)
    } else if obj.contains_key("log_breakpoints") {
        let f: StepFile = serde_json::from_value(v).map_err(|e| schema(e.to_string()))?;
        step_from_file(f)
    } else {
        Err(schema("expected a spectrum (\"mu\") or a step function (\"log_breakpoints\")"))
    }
}

fn spectrum_from_file(f: SpectrumFile) -> Result<Document> {
    let tail = match f.tail {
        None => None,
        Some(t) => {
            if t.start_index != f.mu.len() as u64 + 1 {
                return Err(Error::input(
                    InputCode::Schema,
                    None,
                    format!("tail start_index {} must follow the head (expected {})", t.start_index, f.mu.len() + 1),
                ));
            }
            Some(match (t.offset, t.amplitude) {
                (None, None) => SpectrumTail::power(t.coefficient, t.exponent),
                (Some(offset), Some(amplitude)) => SpectrumTail::LogOscillating(Oscillation {
                    coefficient: t.coefficient,
                    offset,
                    amplitude,
                    exponent: t.exponent,
                }),
                _ => return Err(schema("an oscillating tail needs both offset and amplitude")),
            })
        }
    };
    Ok(Document {
        values: Spectrum::new(f.name, f.mu, tail)?.into(),
        metadata: f.metadata,
    })
}

fn step_from_file(f: StepFile) -> Result<Document> {
    let mut step = match (f.values, f.log_values) {
        (Some(v), None) => StepFunction::new(f.log_breakpoints, v, f.beyond_last)?,
        (None, Some(lv)) => StepFunction::from_log_values(f.log_breakpoints, lv, f.beyond_last)?,
        _ => return Err(schema("give exactly one of values and log_values")),
    };
    if let Some(t) = f.tail {
        step = step.with_tail(ContinuousTail {
            coefficient: t.coefficient,
            shift: t.shift,
            exponent: t.exponent,
        })?;
    }
    if f.truncated {
        step = step.mark_truncated();
    }
    Ok(Document {
        values: SingularValues::function(step)?,
        metadata: f.metadata,
    })
}

fn to_value(doc: &Document) -> Result<Value> {
    let v = match &doc.values {
        SingularValues::Sequence(s) => {
            let tail = s.tail().map(|t| match *t {
                SpectrumTail::Power {
                    coefficient,
                    exponent,
                } => TailRecord {
                    coefficient,
                    exponent,
                    start_index: s.tail_start(),
                    offset: None,
                    amplitude: None,
                },
                SpectrumTail::LogOscillating(o) => TailRecord {
                    coefficient: o.coefficient,
                    exponent: o.exponent,
                    start_index: s.tail_start(),
                    offset: Some(o.offset),
                    amplitude: Some(o.amplitude),
                },
            });
            serde_json::to_value(SpectrumFile {
                name: s.name().to_string(),
                mu: s.head().to_vec(),
                tail,
                metadata: doc.metadata.clone(),
            })?
        }
        SingularValues::Function(f) => {
            let lv = f.log_values();
            let plain = f.values();
            let exact = plain.iter().zip(lv).all(|(v, l)| v.ln().to_bits() == l.to_bits());
            let (values, log_values) = if exact { (Some(plain), None) } else { (None, Some(lv.to_vec())) };
            serde_json::to_value(StepFile {
                log_breakpoints: f.log_breakpoints().to_vec(),
                values,
                log_values,
                beyond_last: f.beyond_last(),
                tail: f.tail().map(|t| ContinuousTailRecord {
                    coefficient: t.coefficient,
                    shift: t.shift,
                    exponent: t.exponent,
                }),
                truncated: f.is_truncated(),
                metadata: doc.metadata.clone(),
            })?
        }
    };
    Ok(v)
}

/// `serde_json` formatter writing floats as `{:.16e}` (17 significant digits).
/// Non-finite floats are not representable in JSON and come out as `null`.
pub struct FixedDigits<'a> {
    pretty: serde_json::ser::PrettyFormatter<'a>,
}

impl Default for FixedDigits<'_> {
    fn default() -> Self {
        FixedDigits {
            pretty: serde_json::ser::PrettyFormatter::with_indent(b"  "),
        }
    }
}

impl serde_json::ser::Formatter for FixedDigits<'_> {
    fn write_f64<W: ?Sized + Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        if value.is_finite() {
            write!(w, "{value:.16e}")
        } else {
            w.write_all(b"null")
        }
    }
    fn begin_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.pretty.begin_array(w)
    }
    fn end_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.pretty.end_array(w)
    }
    fn begin_array_value<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.pretty.begin_array_value(w, first)
    }
    fn end_array_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.pretty.end_array_value(w)
    }
    fn begin_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.pretty.begin_object(w)
    }
    fn end_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.pretty.end_object(w)
    }
    fn begin_object_key<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.pretty.begin_object_key(w, first)
    }
    fn begin_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.pretty.begin_object_value(w)
    }
    fn end_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.pretty.end_object_value(w)
    }
}

/// Pretty JSON with fixed-width floats and a trailing newline.
pub fn write_json<W: Write>(mut w: W, value: &Value) -> Result<()> {
    let mut ser = serde_json::Serializer::with_formatter(&mut w, FixedDigits::default());
    value.serialize(&mut ser)?;
    w.write_all(b"\n")?;
    Ok(())
}

pub fn read_document<R: Read>(r: R, format: Format) -> Result<Document> {
    match format {
        Format::Json => {
            let v: Value = serde_json::from_reader(r).map_err(|e| schema(e.to_string()))?;
            from_value(v)
        }
        Format::Csv => read_csv(BufReader::new(r)),
    }
}

fn read_csv<R: BufRead>(r: R) -> Result<Document> {
    let mut mu = Vec::new();
    let mut header = false;
    for (lineno, line) in r.lines().enumerate() {
        let line = line?;
        let field = line.trim();
        if field.is_empty() {
            continue;
        }
        if !header {
            if field != "mu" {
                return Err(schema(format!("line {}: expected header \"mu\"", lineno + 1)));
            }
            header = true;
            continue;
        }
        let v: f64 = field.parse().map_err(|_| {
            Error::input(InputCode::Schema, Some(mu.len() + 1), format!("line {}: not a number: {field:?}", lineno + 1))
        })?;
        mu.push(v);
    }
    if !header {
        return Err(schema("empty CSV file"));
    }
    Ok(Document::new(Spectrum::finite("csv", mu)?.into()))
}

pub fn write_document<W: Write>(mut w: W, doc: &Document, format: Format) -> Result<()> {
    match format {
        Format::Json => write_json(w, &to_value(doc)?),
        Format::Csv => {
            let s = match &doc.values {
                SingularValues::Sequence(s) if s.tail().is_none() => s,
                _ => return Err(schema("CSV holds a finite head only; use JSON for tails and step functions")),
            };
            writeln!(w, "mu")?;
            for v in s.head() {
                writeln!(w, "{v:.16e}")?;
            }
            Ok(())
        }
    }
}

/// Loads from a path, or from stdin for `-`.
pub fn load(path: &str) -> Result<Document> {
    let format = Format::from_path(path);
    if path == "-" {
        return read_document(io::stdin().lock(), format);
    }
    read_document(File::open(Path::new(path))?, format)
}

/// Saves to a path, or to stdout for `-`.
pub fn save(path: &str, doc: &Document) -> Result<()> {
    let format = Format::from_path(path);
    if path == "-" {
        return write_document(io::stdout().lock(), doc, format);
    }
    let mut w = BufWriter::new(File::create(Path::new(path))?);
    write_document(&mut w, doc, format)?;
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{gen_spectrum, Kind};

    fn round_trip(doc: &Document) -> Document {
        let mut buf = Vec::new();
        write_document(&mut buf, doc, Format::Json).unwrap();
        read_document(&buf[..], Format::Json).unwrap()
    }

    #[test]
    fn bit_identical_round_trips() {
        for kind in [
            Kind::Power { p: 2.0, head: 1000 },
            Kind::Oscillating,
            Kind::SmallIdeal,
            Kind::CounterexampleZ { n_max: 40 },
        ] {
            let doc = Document::new(gen_spectrum(&kind).unwrap());
            assert_eq!(round_trip(&doc), doc, "{kind:?}");
        }
    }

    #[test]
    fn rejects_with_codes_and_indices() {
        let bad = r#"{"name":"b","mu":[1,0.9,0.8,0.7,0.75],"tail":null,"metadata":{}}"#;
        let e = read_document(bad.as_bytes(), Format::Json).unwrap_err();
        assert_eq!((e.code(), e.index()), (Some(InputCode::NonMonotone), Some(5)));

        let mut mu = vec![1.0; 9];
        mu.push(0.2);
        let doc = serde_json::json!({
            "name": "t", "mu": mu,
            "tail": {"coefficient": 1.0, "exponent": 0.5, "start_index": 11},
            "metadata": {}
        });
        let e = read_document(doc.to_string().as_bytes(), Format::Json).unwrap_err();
        assert_eq!((e.code(), e.index()), (Some(InputCode::TailContinuity), Some(10)));

        let e = read_document(&b"{\"foo\": 1}"[..], Format::Json).unwrap_err();
        assert_eq!(e.code(), Some(InputCode::Schema));
        let e = read_document(&b"mu\n1\n2\n"[..], Format::Csv).unwrap_err();
        assert_eq!((e.code(), e.index()), (Some(InputCode::NonMonotone), Some(2)));
    }

    #[test]
    fn csv_round_trip() {
        let doc = Document::new(Spectrum::finite("csv", vec![0.7, 0.1 + 0.2, 1e-300]).unwrap().into());
        let mut buf = Vec::new();
        write_document(&mut buf, &doc, Format::Csv).unwrap();
        assert_eq!(read_document(&buf[..], Format::Csv).unwrap(), doc);
    }

    #[test]
    fn floats_have_seventeen_digits() {
        let mut buf = Vec::new();
        write_json(&mut buf, &serde_json::json!([0.1, -2.5e-300])).unwrap();
        let s = String::from_utf8(buf).unwrap();
        assert!(s.contains("1.0000000000000001e-1") && s.contains("-2.5000000000000000e-300"), "{s}");
    }
}

//! File formats and atomic output.
//!
//! Sequences travel as CSV (one vector per line, components comma-separated,
//! no header) or JSON (`{"dimension", "field", "vectors"}` with complex
//! entries as `[re, im]` pairs). Scale families and ground-truth records are
//! JSON. Every written file goes through a temporary file plus rename, and
//! all floating-point output carries 17 significant digits so that reading
//! a file back reproduces the exact doubles.

use std::io::Write as _;
use std::path::Path;

use serde::Serialize;
use serde_json::ser::Formatter;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::scalar::{Field, Scalar};
use crate::sequences::{GeometricScale, ScaleFamily, TabulatedScale, TabulatedSequence};
use crate::space::Sequence as _;
use crate::space::{Vector, Weighting};

/// On-disk representation for sequences.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FileFormat {
    Csv,
    Json,
}

impl FileFormat {
    /// Infer from the file extension; anything that is not `.csv` is JSON.
    pub fn infer(path: &Path) -> FileFormat {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("csv") => FileFormat::Csv,
            _ => FileFormat::Json,
        }
    }
}

impl std::str::FromStr for FileFormat {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "csv" => Ok(FileFormat::Csv),
            "json" => Ok(FileFormat::Json),
            other => Err(format!("unknown format {other:?}, expected \"csv\" or \"json\"")),
        }
    }
}

// ---------------------------------------------------------------------------
// 17-significant-digit JSON output
// ---------------------------------------------------------------------------

/// Pretty JSON formatter that renders every float with 17 significant
/// digits, the shortest form that is still lossless for doubles.
struct SigDigitFormatter {
    indent: usize,
    has_value: bool,
}

impl SigDigitFormatter {
    fn new() -> Self {
        SigDigitFormatter {
            indent: 0,
            has_value: false,
        }
    }

    fn newline<W: std::io::Write + ?Sized>(&self, writer: &mut W) -> std::io::Result<()> {
        writer.write_all(b"\n")?;
        for _ in 0..self.indent {
            writer.write_all(b"  ")?;
        }
        Ok(())
    }
}

impl Formatter for SigDigitFormatter {
    fn write_f64<W: std::io::Write + ?Sized>(
        &mut self,
        writer: &mut W,
        value: f64,
    ) -> std::io::Result<()> {
        write!(writer, "{value:.16e}")
    }

    fn begin_array<W: std::io::Write + ?Sized>(&mut self, writer: &mut W) -> std::io::Result<()> {
        self.indent += 1;
        self.has_value = false;
        writer.write_all(b"[")
    }

    fn end_array<W: std::io::Write + ?Sized>(&mut self, writer: &mut W) -> std::io::Result<()> {
        self.indent -= 1;
        if self.has_value {
            self.newline(writer)?;
        }
        writer.write_all(b"]")
    }

    fn begin_array_value<W: std::io::Write + ?Sized>(
        &mut self,
        writer: &mut W,
        first: bool,
    ) -> std::io::Result<()> {
        if !first {
            writer.write_all(b",")?;
        }
        self.newline(writer)
    }

    fn end_array_value<W: std::io::Write + ?Sized>(
        &mut self,
        _writer: &mut W,
    ) -> std::io::Result<()> {
        self.has_value = true;
        Ok(())
    }

    fn begin_object<W: std::io::Write + ?Sized>(&mut self, writer: &mut W) -> std::io::Result<()> {
        self.indent += 1;
        self.has_value = false;
        writer.write_all(b"{")
    }

    fn end_object<W: std::io::Write + ?Sized>(&mut self, writer: &mut W) -> std::io::Result<()> {
        self.indent -= 1;
        if self.has_value {
            self.newline(writer)?;
        }
        writer.write_all(b"}")
    }

    fn begin_object_key<W: std::io::Write + ?Sized>(
        &mut self,
        writer: &mut W,
        first: bool,
    ) -> std::io::Result<()> {
        if !first {
            writer.write_all(b",")?;
        }
        self.newline(writer)
    }

    fn begin_object_value<W: std::io::Write + ?Sized>(
        &mut self,
        writer: &mut W,
    ) -> std::io::Result<()> {
        writer.write_all(b": ")
    }

    fn end_object_value<W: std::io::Write + ?Sized>(
        &mut self,
        _writer: &mut W,
    ) -> std::io::Result<()> {
        self.has_value = true;
        Ok(())
    }
}

/// Serialize a JSON value with 17-significant-digit floats.
pub fn json_to_string(value: &Value) -> String {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, SigDigitFormatter::new());
    value
        .serialize(&mut ser)
        .expect("in-memory json serialization cannot fail");
    out.push(b'\n');
    String::from_utf8(out).expect("json output is utf-8")
}

/// Write bytes through a temporary file in the same directory, then rename.
pub fn atomic_write(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| Error::io(path, e))?;
    tmp.write_all(bytes).map_err(|e| Error::io(path, e))?;
    tmp.persist(path).map_err(|e| Error::io(path, e.error))?;
    Ok(())
}

/// Write a JSON value atomically with full-precision floats.
pub fn write_json(path: &Path, value: &Value) -> Result<()> {
    atomic_write(path, json_to_string(value).as_bytes())
}

fn read_to_string(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

fn parse_json_file(path: &Path) -> Result<Value> {
    let text = read_to_string(path)?;
    serde_json::from_str(&text).map_err(|e| Error::Parse {
        path: path.to_path_buf(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

/// Parse any JSON file into a value, with positioned errors.
pub fn parse_json_value(path: &Path) -> Result<Value> {
    parse_json_file(path)
}

fn semantic_error(path: &Path, message: impl Into<String>) -> Error {
    Error::Parse {
        path: path.to_path_buf(),
        line: 0,
        column: 0,
        message: message.into(),
    }
}

// ---------------------------------------------------------------------------
// Sequences
// ---------------------------------------------------------------------------

/// Detect the scalar field of a sequence file without committing to a type.
pub fn detect_field(path: &Path, format: FileFormat) -> Result<Field> {
    match format {
        FileFormat::Json => {
            let value = parse_json_file(path)?;
            field_from_json(path, &value)
        }
        FileFormat::Csv => {
            let text = read_to_string(path)?;
            for line in text.lines() {
                let line = line.trim();
                if line.is_empty() {
                    continue;
                }
                for token in line.split(',') {
                    if f64::parse(token).is_none() {
                        if num_complex::Complex64::parse(token).is_some() {
                            return Ok(Field::Complex);
                        }
                        return Ok(Field::Real); // let the typed loader report the error
                    }
                }
            }
            Ok(Field::Real)
        }
    }
}

/// Read the `field` key of any of the JSON file formats.
pub fn field_from_json(path: &Path, value: &Value) -> Result<Field> {
    let text = value
        .get("field")
        .and_then(Value::as_str)
        .ok_or_else(|| semantic_error(path, "missing or non-string \"field\" key"))?;
    text.parse()
        .map_err(|e: String| semantic_error(path, e))
}

fn check_field<S: Scalar>(path: &Path, declared: Field) -> Result<()> {
    if declared == Field::Complex && S::FIELD == Field::Real {
        return Err(semantic_error(
            path,
            "file declares the complex field; rerun with --field complex",
        ));
    }
    Ok(())
}

fn vector_from_json<S: Scalar>(path: &Path, row: &Value, index: usize) -> Result<Vector<S>> {
    let entries = row
        .as_array()
        .ok_or_else(|| semantic_error(path, format!("vectors[{index}] is not an array")))?;
    let mut components = Vec::with_capacity(entries.len());
    for (j, entry) in entries.iter().enumerate() {
        let value = S::from_json(entry).ok_or_else(|| {
            semantic_error(path, format!("vectors[{index}][{j}] is not a valid component"))
        })?;
        components.push(value);
    }
    Ok(Vector::new(components))
}

/// Load a sequence file in the given format.
pub fn load_sequence<S: Scalar>(path: &Path, format: FileFormat) -> Result<TabulatedSequence<S>> {
    match format {
        FileFormat::Json => {
            let value = parse_json_file(path)?;
            check_field::<S>(path, field_from_json(path, &value)?)?;
            let dimension = value
                .get("dimension")
                .and_then(Value::as_u64)
                .ok_or_else(|| semantic_error(path, "missing integer \"dimension\" key"))?
                as usize;
            let rows = value
                .get("vectors")
                .and_then(Value::as_array)
                .ok_or_else(|| semantic_error(path, "missing \"vectors\" array"))?;
            let mut vectors = Vec::with_capacity(rows.len());
            for (i, row) in rows.iter().enumerate() {
                vectors.push(vector_from_json::<S>(path, row, i)?);
            }
            TabulatedSequence::with_dim(dimension, vectors)
        }
        FileFormat::Csv => {
            let text = read_to_string(path)?;
            let mut vectors: Vec<Vector<S>> = Vec::new();
            for (line_no, line) in text.lines().enumerate() {
                if line.trim().is_empty() {
                    continue;
                }
                let mut components = Vec::new();
                for (col_no, token) in line.split(',').enumerate() {
                    let value = S::parse(token).ok_or(Error::Parse {
                        path: path.to_path_buf(),
                        line: line_no + 1,
                        column: col_no + 1,
                        message: format!("cannot parse component {:?}", token.trim()),
                    })?;
                    components.push(value);
                }
                vectors.push(Vector::new(components));
            }
            TabulatedSequence::new(vectors)
        }
    }
}

/// Save a sequence in the given format.
pub fn save_sequence<S: Scalar>(
    seq: &TabulatedSequence<S>,
    path: &Path,
    format: FileFormat,
) -> Result<()> {
    match format {
        FileFormat::Json => {
            let vectors: Vec<Value> = seq
                .rows()
                .iter()
                .map(|v| Value::Array(v.iter().map(|c| c.to_json()).collect()))
                .collect();
            write_json(
                path,
                &serde_json::json!({
                    "field": S::FIELD,
                    "dimension": seq.dim(),
                    "vectors": vectors,
                }),
            )
        }
        FileFormat::Csv => {
            let mut out = String::new();
            for row in seq.rows() {
                let line: Vec<String> = row.iter().map(|c| c.format_full()).collect();
                out.push_str(&line.join(","));
                out.push('\n');
            }
            atomic_write(path, out.as_bytes())
        }
    }
}

// ---------------------------------------------------------------------------
// Scale families
// ---------------------------------------------------------------------------

fn scalars_from_json<S: Scalar>(path: &Path, value: &Value, key: &str) -> Result<Vec<S>> {
    let list = value
        .get(key)
        .and_then(Value::as_array)
        .ok_or_else(|| semantic_error(path, format!("missing \"{key}\" array")))?;
    list.iter()
        .enumerate()
        .map(|(i, entry)| {
            S::from_json(entry)
                .ok_or_else(|| semantic_error(path, format!("{key}[{i}] is not a valid scalar")))
        })
        .collect()
}

/// Load a scale-family file (`kind`, `b`, `w`, optional `c`, or `kind`
/// `"tabulated"` with `tables`).
pub fn load_scale<S: Scalar>(path: &Path) -> Result<Box<dyn ScaleFamily<S>>> {
    let value = parse_json_file(path)?;
    check_field::<S>(path, field_from_json(path, &value)?)?;
    let kind = value
        .get("kind")
        .and_then(Value::as_str)
        .ok_or_else(|| semantic_error(path, "missing \"kind\" key"))?;
    match kind {
        "analytic-geometric" | "analytic-perturbed" => {
            let nodes: Vec<S> = scalars_from_json(path, &value, "b")?;
            let rows = value
                .get("w")
                .and_then(Value::as_array)
                .ok_or_else(|| semantic_error(path, "missing \"w\" array"))?;
            let weights = rows
                .iter()
                .enumerate()
                .map(|(i, row)| vector_from_json::<S>(path, row, i))
                .collect::<Result<Vec<_>>>()?;
            if kind == "analytic-perturbed" || value.get("c").is_some() {
                let amplitudes: Vec<S> = scalars_from_json(path, &value, "c")?;
                Ok(Box::new(GeometricScale::perturbed(weights, nodes, amplitudes)?))
            } else {
                Ok(Box::new(GeometricScale::geometric(weights, nodes)?))
            }
        }
        "tabulated" => {
            let tables = value
                .get("tables")
                .and_then(Value::as_array)
                .ok_or_else(|| semantic_error(path, "missing \"tables\" array"))?;
            let members = tables
                .iter()
                .map(|table| {
                    let rows = table
                        .as_array()
                        .ok_or_else(|| semantic_error(path, "table entry is not an array"))?;
                    let vectors = rows
                        .iter()
                        .enumerate()
                        .map(|(i, row)| vector_from_json::<S>(path, row, i))
                        .collect::<Result<Vec<_>>>()?;
                    TabulatedSequence::new(vectors)
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(Box::new(TabulatedScale::new(members)?))
        }
        other => Err(semantic_error(path, format!("unknown scale kind {other:?}"))),
    }
}

/// Save an analytic scale family.
pub fn save_scale<S: Scalar>(scale: &GeometricScale<S>, path: &Path) -> Result<()> {
    let weights: Vec<Value> = scale
        .weights()
        .iter()
        .map(|v| Value::Array(v.iter().map(|c| c.to_json()).collect()))
        .collect();
    let nodes: Vec<Value> = scale.nodes().iter().map(|b| b.to_json()).collect();
    let mut object = serde_json::json!({
        "field": S::FIELD,
        "dimension": scale.weights()[0].dim(),
        "kind": ScaleFamily::<S>::kind(scale).as_str(),
        "b": nodes,
        "w": weights,
    });
    if let Some(amplitudes) = scale.amplitudes() {
        object["c"] = Value::Array(amplitudes.iter().map(|c| c.to_json()).collect());
    }
    write_json(path, &object)
}

// ---------------------------------------------------------------------------
// Ground truth
// ---------------------------------------------------------------------------

/// Sidecar record carrying the known limit (and, for synthetic data, the
/// expansion coefficients) used by verification.
#[derive(Debug, Clone)]
pub struct GroundTruth<S> {
    pub limit: Vector<S>,
    pub alpha: Option<Vec<S>>,
}

pub fn save_truth<S: Scalar>(truth: &GroundTruth<S>, path: &Path) -> Result<()> {
    let mut object = serde_json::json!({
        "field": S::FIELD,
        "dimension": truth.limit.dim(),
        "limit": Value::Array(truth.limit.iter().map(|c| c.to_json()).collect()),
    });
    if let Some(alpha) = &truth.alpha {
        object["alpha"] = Value::Array(alpha.iter().map(|c| c.to_json()).collect());
    }
    write_json(path, &object)
}

pub fn load_truth<S: Scalar>(path: &Path) -> Result<GroundTruth<S>> {
    let value = parse_json_file(path)?;
    check_field::<S>(path, field_from_json(path, &value)?)?;
    let limit = value
        .get("limit")
        .ok_or_else(|| semantic_error(path, "missing \"limit\" vector"))
        .and_then(|row| vector_from_json::<S>(path, row, 0))?;
    let alpha = match value.get("alpha") {
        Some(_) => Some(scalars_from_json(path, &value, "alpha")?),
        None => None,
    };
    Ok(GroundTruth { limit, alpha })
}

/// Load a weighting vector from a one-vector sequence file.
pub fn load_weighting<S: Scalar>(path: &Path, format: FileFormat) -> Result<Weighting<S>> {
    let seq = load_sequence::<S>(path, format)?;
    if seq.len() != 1 {
        return Err(semantic_error(
            path,
            format!("weighting file must hold exactly one vector, found {}", seq.len()),
        ));
    }
    Weighting::new(seq.rows()[0].clone())
}

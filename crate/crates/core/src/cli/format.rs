//! JSON problem files. Quaternion data are stored as four real grids
//! `a, b, c, d` holding the `1, i, j, k` components.

use std::collections::BTreeMap;
use std::io;
use std::path::Path;

use serde::ser::Serialize;
use serde::{Deserialize, Serialize as DeriveSerialize};

use crate::error::{Error, Result};
use crate::matrix::{HermitianMatrix, QuaternionMatrix, QuaternionVector};
use crate::quaternion::Quaternion;

pub const SCHEMA_VERSION: u32 = 1;

/// Componentwise Hermitian tolerance for tagged matrices.
pub const HERMITIAN_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, DeriveSerialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixEntry {
    #[serde(default = "yes", skip_serializing_if = "is_true")]
    pub hermitian: bool,
    #[serde(default, skip_serializing_if = "is_false")]
    pub psd: bool,
    pub a: Vec<Vec<f64>>,
    pub b: Vec<Vec<f64>>,
    pub c: Vec<Vec<f64>>,
    pub d: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, DeriveSerialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VectorEntry {
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub c: Vec<f64>,
    pub d: Vec<f64>,
}

fn yes() -> bool {
    true
}

fn is_true(v: &bool) -> bool {
    *v
}

fn is_false(v: &bool) -> bool {
    !*v
}

#[derive(Debug, Clone, PartialEq, DeriveSerialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub schema: u32,
    pub n: usize,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub matrices: BTreeMap<String, MatrixEntry>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub vectors: BTreeMap<String, VectorEntry>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub scalars: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub reals: BTreeMap<String, Vec<f64>>,
}

fn parse_err(context: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Parse { context: context.into(), message: message.into() }
}

impl MatrixEntry {
    pub fn from_matrix(m: &QuaternionMatrix) -> Self {
        let [a, b, c, d] = m.components();
        Self { hermitian: true, psd: false, a, b, c, d }
    }

    pub fn to_matrix(&self) -> Result<QuaternionMatrix> {
        QuaternionMatrix::from_components(&self.a, &self.b, &self.c, &self.d)
    }

    /// Checks shape against `n` and, when tagged, the componentwise
    /// Hermitian test: `a` symmetric, `b, c, d` skew-symmetric.
    fn validate(&self, name: &str, n: usize) -> Result<()> {
        for (label, grid) in [("a", &self.a), ("b", &self.b), ("c", &self.c), ("d", &self.d)] {
            let ctx = format!("matrices.{name}.{label}");
            if grid.len() != n {
                return Err(parse_err(ctx, format!("expected {n} rows, found {}", grid.len())));
            }
            for (i, row) in grid.iter().enumerate() {
                if row.len() != n {
                    return Err(parse_err(format!("{ctx}[{i}]"), format!("expected {n} columns, found {}", row.len())));
                }
            }
        }
        if !self.hermitian {
            return Ok(());
        }
        let grids = [("a", &self.a, 1.0), ("b", &self.b, -1.0), ("c", &self.c, -1.0), ("d", &self.d, -1.0)];
        for (label, grid, sign) in grids {
            for i in 0..n {
                for j in i..n {
                    let gap = (grid[i][j] - sign * grid[j][i]).abs();
                    if !(gap <= HERMITIAN_TOL) {
                        let kind = if sign > 0.0 { "symmetric" } else { "skew-symmetric" };
                        return Err(parse_err(
                            format!("matrices.{name}.{label}[{i}][{j}]"),
                            format!("component must be {kind} for a Hermitian matrix (mismatch {gap:e})"),
                        ));
                    }
                }
            }
        }
        Ok(())
    }
}

impl VectorEntry {
    pub fn from_vector(v: &QuaternionVector) -> Self {
        let col = |f: fn(&Quaternion) -> f64| v.iter().map(f).collect();
        Self { a: col(|q| q.a), b: col(|q| q.b), c: col(|q| q.c), d: col(|q| q.d) }
    }

    pub fn to_vector(&self) -> QuaternionVector {
        (0..self.a.len()).map(|i| Quaternion::new(self.a[i], self.b[i], self.c[i], self.d[i])).collect()
    }

    fn validate(&self, ctx: &str, n: usize) -> Result<()> {
        for (label, comp) in [("a", &self.a), ("b", &self.b), ("c", &self.c), ("d", &self.d)] {
            if comp.len() != n {
                return Err(parse_err(format!("{ctx}.{label}"), format!("expected length {n}, found {}", comp.len())));
            }
        }
        Ok(())
    }
}

impl ProblemFile {
    pub fn new(n: usize) -> Self {
        Self {
            schema: SCHEMA_VERSION,
            n,
            matrices: BTreeMap::new(),
            vectors: BTreeMap::new(),
            scalars: BTreeMap::new(),
            reals: BTreeMap::new(),
        }
    }

    pub fn with_matrix(mut self, name: &str, m: &QuaternionMatrix) -> Self {
        self.matrices.insert(name.into(), MatrixEntry::from_matrix(m));
        self
    }

    pub fn with_psd_matrix(mut self, name: &str, m: &QuaternionMatrix) -> Self {
        self.matrices.insert(name.into(), MatrixEntry { psd: true, ..MatrixEntry::from_matrix(m) });
        self
    }

    pub fn with_vector(mut self, name: &str, v: &QuaternionVector) -> Self {
        self.vectors.insert(name.into(), VectorEntry::from_vector(v));
        self
    }

    pub fn with_scalar(mut self, name: &str, v: f64) -> Self {
        self.scalars.insert(name.into(), v);
        self
    }

    pub fn with_reals(mut self, name: &str, v: &[f64]) -> Self {
        self.reals.insert(name.into(), v.to_vec());
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.schema != SCHEMA_VERSION {
            return Err(parse_err("schema", format!("unsupported version {}, expected {SCHEMA_VERSION}", self.schema)));
        }
        for (name, m) in &self.matrices {
            m.validate(name, self.n)?;
        }
        for (name, v) in &self.vectors {
            v.validate(&format!("vectors.{name}"), self.n)?;
        }
        Ok(())
    }

    pub fn matrix(&self, name: &str) -> Result<QuaternionMatrix> {
        self.matrices
            .get(name)
            .ok_or_else(|| parse_err(format!("matrices.{name}"), "missing"))?
            .to_matrix()
    }

    /// A Hermitian-tagged matrix.
    pub fn hermitian(&self, name: &str) -> Result<HermitianMatrix> {
        let entry = self.matrices.get(name).ok_or_else(|| parse_err(format!("matrices.{name}"), "missing"))?;
        if !entry.hermitian {
            return Err(parse_err(format!("matrices.{name}.hermitian"), "matrix must be tagged Hermitian"));
        }
        HermitianMatrix::with_tolerance(entry.to_matrix()?, HERMITIAN_TOL)
    }

    pub fn has_matrix(&self, name: &str) -> bool {
        self.matrices.contains_key(name)
    }

    pub fn vector(&self, name: &str) -> Option<QuaternionVector> {
        self.vectors.get(name).map(VectorEntry::to_vector)
    }

    pub fn scalar(&self, name: &str) -> Option<f64> {
        self.scalars.get(name).copied()
    }

    pub fn reals(&self, name: &str) -> Option<&[f64]> {
        self.reals.get(name).map(Vec::as_slice)
    }
}

/// Parses and validates a problem from JSON text.
pub fn parse_problem_str(text: &str) -> Result<ProblemFile> {
    let p: ProblemFile = serde_json::from_str(text)
        .map_err(|e| parse_err(format!("line {} column {}", e.line(), e.column()), e.to_string()))?;
    p.validate()?;
    Ok(p)
}

pub fn parse_problem(path: &Path) -> Result<ProblemFile> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_problem_str(&text)
}

/// Pretty JSON with every float written to 17 significant digits.
struct Digits17(serde_json::ser::PrettyFormatter<'static>);

impl serde_json::ser::Formatter for Digits17 {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, value as f64)
    }

    fn begin_array<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.begin_array(writer)
    }

    fn end_array<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.end_array(writer)
    }

    fn begin_array_value<W: ?Sized + io::Write>(&mut self, writer: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(writer, first)
    }

    fn end_array_value<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.end_array_value(writer)
    }

    fn begin_object<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.begin_object(writer)
    }

    fn end_object<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.end_object(writer)
    }

    fn begin_object_key<W: ?Sized + io::Write>(&mut self, writer: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(writer, first)
    }

    fn begin_object_value<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.begin_object_value(writer)
    }

    fn end_object_value<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.end_object_value(writer)
    }
}

/// Serializes `value` as pretty JSON with 17 significant digits per float.
pub fn to_json<T: Serialize + ?Sized>(value: &T) -> String {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, Digits17(serde_json::ser::PrettyFormatter::new()));
    value.serialize(&mut ser).expect("serializing to memory cannot fail");
    out.push(b'\n');
    String::from_utf8(out).expect("serde_json emits UTF-8")
}

//! Matrix files and JSON output.
//!
//! A matrix file is a JSON object
//! `{"n": 2, "kind": "posdef", "convention": "block", "data": [...]}` with
//! `data` the `2n × 2n` matrix in row-major order. `kind` and `convention`
//! are optional; `convention` defaults to `"block"`.

use std::fmt::Write as _;
use std::path::Path;

use nalgebra::DMatrix;
use serde::Deserialize;
use sympspec::symplectic;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Posdef,
    Symplectic,
}

impl Kind {
    fn as_str(self) -> &'static str {
        match self {
            Kind::Posdef => "posdef",
            Kind::Symplectic => "symplectic",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Convention {
    #[default]
    Block,
    Interleaved,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixFile {
    pub n: usize,
    #[serde(default)]
    pub kind: Option<Kind>,
    #[serde(default)]
    pub convention: Option<Convention>,
    pub data: Vec<f64>,
}

impl MatrixFile {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let f: MatrixFile = serde_json::from_str(text).map_err(|e| CliError::Parse(e.to_string()))?;
        if f.n == 0 {
            return Err(CliError::Parse("n must be at least 1".into()));
        }
        let side = 2 * f.n;
        if f.data.len() != side * side {
            return Err(CliError::Parse(format!(
                "n = {} needs {} entries, found {}",
                f.n,
                side * side,
                f.data.len()
            )));
        }
        Ok(f)
    }

    pub fn read(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
        Self::parse(&text).map_err(|e| match e {
            CliError::Parse(msg) => CliError::Parse(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    /// The matrix in block convention, after checking the declared kind.
    pub fn block_matrix(&self, expected: Kind) -> Result<DMatrix<f64>, CliError> {
        if let Some(k) = self.kind {
            if k != expected {
                return Err(CliError::Validation(format!(
                    "file declares kind '{}', expected '{}'",
                    k.as_str(),
                    expected.as_str()
                )));
            }
        }
        let side = 2 * self.n;
        let m = DMatrix::from_row_slice(side, side, &self.data);
        match self.convention.unwrap_or_default() {
            Convention::Block => Ok(m),
            Convention::Interleaved => Ok(symplectic::interleaved_to_block(&m)?),
        }
    }

    pub fn from_matrix(m: &DMatrix<f64>, kind: Kind) -> Self {
        MatrixFile {
            n: m.nrows() / 2,
            kind: Some(kind),
            convention: Some(Convention::Block),
            data: m.transpose().iter().cloned().collect(),
        }
    }

    pub fn to_json(&self) -> String {
        let conv = match self.convention.unwrap_or_default() {
            Convention::Block => "block",
            Convention::Interleaved => "interleaved",
        };
        let mut obj = JsonObject::new();
        obj.raw("n", &self.n.to_string());
        if let Some(k) = self.kind {
            obj.string("kind", k.as_str());
        }
        obj.string("convention", conv);
        obj.numbers("data", &self.data);
        obj.finish()
    }

    pub fn write(&self, path: &Path) -> Result<(), CliError> {
        std::fs::write(path, self.to_json() + "\n")
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
    }
}

/// 17 significant digits, enough to round-trip every double.
pub fn number(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        "null".into()
    }
}

pub fn number_array(xs: &[f64]) -> String {
    let parts: Vec<String> = xs.iter().map(|&x| number(x)).collect();
    format!("[{}]", parts.join(","))
}

/// Nested row arrays.
pub fn matrix_json(m: &DMatrix<f64>) -> String {
    let rows: Vec<String> = m
        .row_iter()
        .map(|r| number_array(&r.iter().cloned().collect::<Vec<_>>()))
        .collect();
    format!("[{}]", rows.join(","))
}

pub fn string(s: &str) -> String {
    serde_json::to_string(s).expect("strings always serialize")
}

/// Builds a flat JSON object with fields in insertion order.
#[derive(Default)]
pub struct JsonObject {
    body: String,
}

impl JsonObject {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn raw(&mut self, key: &str, value: &str) -> &mut Self {
        if !self.body.is_empty() {
            self.body.push(',');
        }
        let _ = write!(self.body, "{}:{}", string(key), value);
        self
    }

    pub fn string(&mut self, key: &str, value: &str) -> &mut Self {
        self.raw(key, &string(value))
    }

    pub fn number(&mut self, key: &str, value: f64) -> &mut Self {
        self.raw(key, &number(value))
    }

    pub fn numbers(&mut self, key: &str, values: &[f64]) -> &mut Self {
        self.raw(key, &number_array(values))
    }

    pub fn matrix(&mut self, key: &str, m: &DMatrix<f64>) -> &mut Self {
        self.raw(key, &matrix_json(m))
    }

    pub fn boolean(&mut self, key: &str, value: bool) -> &mut Self {
        self.raw(key, if value { "true" } else { "false" })
    }

    pub fn integer(&mut self, key: &str, value: usize) -> &mut Self {
        self.raw(key, &value.to_string())
    }

    pub fn finish(&self) -> String {
        format!("{{{}}}", self.body)
    }
}

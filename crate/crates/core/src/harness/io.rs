//! Matrix files: `{"rows": [[[re, im], …], …]}`, or `{"matrices": [...]}` for several.
//!
//! Entries are written as JSON numbers in shortest round-trip form, so a
//! written file re-reads to the identical doubles. Quoted numbers are
//! accepted on input.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Deserializer, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, C64};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Entry(pub f64);

impl Serialize for Entry {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_f64(self.0)
    }
}

impl<'de> Deserialize<'de> for Entry {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Number(f64),
            Text(String),
        }
        match Repr::deserialize(d)? {
            Repr::Number(x) => Ok(Entry(x)),
            Repr::Text(s) => s
                .trim()
                .parse()
                .map(Entry)
                .map_err(|_| serde::de::Error::custom(format!("`{s}` is not a number"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub rows: Vec<Vec<[Entry; 2]>>,
}

impl From<&ComplexMatrix> for MatrixJson {
    fn from(m: &ComplexMatrix) -> Self {
        MatrixJson {
            rows: m
                .row_vecs()
                .into_iter()
                .map(|r| r.into_iter().map(|z| [Entry(z.re), Entry(z.im)]).collect())
                .collect(),
        }
    }
}

impl MatrixJson {
    pub fn to_matrix(&self) -> Result<ComplexMatrix> {
        let rows: Vec<Vec<C64>> = self
            .rows
            .iter()
            .map(|r| r.iter().map(|[re, im]| C64::new(re.0, im.0)).collect())
            .collect();
        ComplexMatrix::from_rows(&rows)
    }
}

/// Parsed contents of an input file.
#[derive(Clone, Debug, PartialEq)]
pub struct MatrixFile {
    pub matrices: Vec<ComplexMatrix>,
    /// Optional `"alpha"` field stored alongside the matrices.
    pub alpha: Option<f64>,
}

#[derive(Deserialize)]
struct Document {
    #[serde(default)]
    rows: Option<Vec<Vec<[Entry; 2]>>>,
    #[serde(default)]
    matrices: Option<Vec<MatrixJson>>,
    #[serde(default)]
    alpha: Option<f64>,
}

fn parse_error(e: serde_json::Error) -> Error {
    Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    }
}

pub fn parse_matrices(text: &str) -> Result<MatrixFile> {
    let doc: Document = serde_json::from_str(text).map_err(parse_error)?;
    let json = match (doc.rows, doc.matrices) {
        (Some(rows), None) => vec![MatrixJson { rows }],
        (None, Some(list)) => list,
        (Some(_), Some(_)) => {
            return Err(Error::Parse {
                line: 1,
                column: 1,
                message: "both `rows` and `matrices` present".into(),
            })
        }
        (None, None) => {
            return Err(Error::Parse {
                line: 1,
                column: 1,
                message: "expected a `rows` or `matrices` field".into(),
            })
        }
    };
    let matrices = json.iter().map(MatrixJson::to_matrix).collect::<Result<_>>()?;
    Ok(MatrixFile {
        matrices,
        alpha: doc.alpha,
    })
}

pub fn read_matrices(path: &Path) -> Result<MatrixFile> {
    parse_matrices(&fs::read_to_string(path)?)
}

pub fn matrix_to_json(m: &ComplexMatrix) -> String {
    serde_json::to_string(&MatrixJson::from(m)).expect("finite entries serialize")
}

/// Writes `{"matrices": [...]}` (plus `alpha` when given).
pub fn write_matrices(path: &Path, matrices: &[ComplexMatrix], alpha: Option<f64>) -> Result<()> {
    #[derive(Serialize)]
    struct Out {
        matrices: Vec<MatrixJson>,
        #[serde(skip_serializing_if = "Option::is_none")]
        alpha: Option<f64>,
    }
    let out = Out {
        matrices: matrices.iter().map(MatrixJson::from).collect(),
        alpha,
    };
    let text = serde_json::to_string_pretty(&out).expect("finite entries serialize");
    fs::write(path, text + "\n")?;
    Ok(())
}

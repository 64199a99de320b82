//! On-disk space format. The primary format is a JSON document naming the
//! points and giving the matrix as exact value strings ("a/b", "a", "inf");
//! a minimal line-oriented format (`dist p q 1/2`) is accepted as input for
//! hand-written fixtures. Loading always validates the triangle inequality
//! and reports the violating triple.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::extval::ExtVal;
use crate::grel::GRel;
use crate::space::{DistanceSpace, SpaceError};

/// The JSON document: `{"name": …, "points": […], "matrix": [[…], …]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpaceFile {
    pub name: String,
    pub points: Vec<String>,
    pub matrix: Vec<Vec<String>>,
}

/// Errors from parsing or validating a space file.
#[derive(Debug, Error)]
pub enum FileError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("matrix entry ({row}, {col}) {text:?} is not a value: use \"a/b\", \"a\", or \"inf\"")]
    Entry {
        row: usize,
        col: usize,
        text: String,
    },
    #[error("line {line}: {message}")]
    Line { line: usize, message: String },
    #[error(transparent)]
    Space(#[from] SpaceError),
}

impl SpaceFile {
    /// Captures a space under the given name, printing every entry exactly.
    pub fn from_space(name: &str, s: &DistanceSpace) -> SpaceFile {
        SpaceFile {
            name: name.to_string(),
            points: s.labels().to_vec(),
            matrix: (0..s.n())
                .map(|x| (0..s.n()).map(|y| s.dist(x, y).to_string()).collect())
                .collect(),
        }
    }

    /// Builds the distance space the file describes, validating the shape,
    /// the labels, every entry, and the triangle inequality.
    pub fn to_space(&self) -> Result<DistanceSpace, FileError> {
        let n = self.points.len();
        if self.matrix.len() != n || self.matrix.iter().any(|r| r.len() != n) {
            return Err(SpaceError::ShapeMismatch {
                rows: self.matrix.len(),
                cols: self.matrix.first().map_or(0, Vec::len),
                points: n,
            }
            .into());
        }
        let mut rows = Vec::with_capacity(n);
        for (x, row) in self.matrix.iter().enumerate() {
            let mut out = Vec::with_capacity(n);
            for (y, cell) in row.iter().enumerate() {
                out.push(cell.parse::<ExtVal>().map_err(|_| FileError::Entry {
                    row: x,
                    col: y,
                    text: cell.clone(),
                })?);
            }
            rows.push(out);
        }
        Ok(DistanceSpace::new(self.points.clone(), GRel::square(rows))?)
    }

    /// The canonical JSON text (pretty-printed, trailing newline).
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("space files serialize");
        s.push('\n');
        s
    }

    /// Parses the JSON document format.
    pub fn parse_json(text: &str) -> Result<SpaceFile, FileError> {
        Ok(serde_json::from_str(text)?)
    }

    /// Parses the line-oriented fixture format. Lines are one of:
    ///
    /// - `name <word>` — names the space (default `fixture`),
    /// - `point <label>` — declares a point (points also appear when first
    ///   mentioned by a `dist` line),
    /// - `dist <p> <q> <value>` — sets d(p, q),
    /// - blank or `#`-comment lines.
    ///
    /// Unset entries default to `0` on the diagonal and `inf` elsewhere.
    /// Assigning the same pair twice is an error.
    pub fn parse_lines(text: &str) -> Result<SpaceFile, FileError> {
        let bad = |line: usize, message: String| FileError::Line { line, message };
        let mut name = String::from("fixture");
        let mut points: Vec<String> = Vec::new();
        let mut index: HashMap<String, usize> = HashMap::new();
        let mut entries: Vec<(usize, usize, usize, String)> = Vec::new();
        let mut intern = |label: &str, points: &mut Vec<String>| -> usize {
            *index.entry(label.to_string()).or_insert_with(|| {
                points.push(label.to_string());
                points.len() - 1
            })
        };
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = trimmed.split_whitespace().collect();
            match fields[0] {
                "name" => {
                    let [_, n] = fields[..] else {
                        return Err(bad(line, "expected: name <word>".into()));
                    };
                    name = n.to_string();
                }
                "point" => {
                    let [_, label] = fields[..] else {
                        return Err(bad(line, "expected: point <label>".into()));
                    };
                    intern(label, &mut points);
                }
                "dist" => {
                    let [_, p, q, value] = fields[..] else {
                        return Err(bad(line, "expected: dist <p> <q> <value>".into()));
                    };
                    if value.parse::<ExtVal>().is_err() {
                        return Err(bad(
                            line,
                            format!("{value:?} is not a value: use \"a/b\", \"a\", or \"inf\""),
                        ));
                    }
                    let x = intern(p, &mut points);
                    let y = intern(q, &mut points);
                    entries.push((line, x, y, value.to_string()));
                }
                other => {
                    return Err(bad(
                        line,
                        format!("unknown directive {other:?}: use name, point, or dist"),
                    ));
                }
            }
        }
        let n = points.len();
        let mut matrix: Vec<Vec<Option<String>>> = vec![vec![None; n]; n];
        for (line, x, y, value) in entries {
            if matrix[x][y].is_some() {
                return Err(bad(
                    line,
                    format!("d({}, {}) was already set", points[x], points[y]),
                ));
            }
            matrix[x][y] = Some(value);
        }
        let matrix = matrix
            .into_iter()
            .enumerate()
            .map(|(x, row)| {
                row.into_iter()
                    .enumerate()
                    .map(|(y, cell)| {
                        cell.unwrap_or_else(|| if x == y { "0" } else { "inf" }.to_string())
                    })
                    .collect()
            })
            .collect();
        Ok(SpaceFile {
            name,
            points,
            matrix,
        })
    }

    /// Parses either format: JSON when the text starts with `{`, the line
    /// format otherwise.
    pub fn parse(text: &str) -> Result<SpaceFile, FileError> {
        if text.trim_start().starts_with('{') {
            SpaceFile::parse_json(text)
        } else {
            SpaceFile::parse_lines(text)
        }
    }
}

/// Parses a file and builds its validated space in one step.
pub fn load(text: &str) -> Result<(SpaceFile, DistanceSpace), FileError> {
    let file = SpaceFile::parse(text)?;
    let space = file.to_space()?;
    Ok((file, space))
}

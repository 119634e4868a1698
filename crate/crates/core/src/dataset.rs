//! Choice dataset files.
//!
//! Two encodings are accepted. JSON (format version 1):
//!
//! ```json
//! {"version": 1, "alternatives": ["x", "y", "z"],
//!  "choices": [{"menu": ["x", "y"], "choice": "y"}]}
//! ```
//!
//! and a line format, one menu per line, with `#` comments and an optional
//! `alternatives:` header (otherwise labels are taken in order of first use):
//!
//! ```text
//! alternatives: x, y, z
//! x,y,z -> x
//! x,y -> y
//! ```
//!
//! Singleton menus may be omitted; they are filled in with a warning.
//! Row numbers in validation errors are 1-based entries of `choices` for
//! JSON and line numbers for the line format.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::error::Error;
use crate::model::{validate_choice, Alt, ChoiceFunction, GroundSet, Menu, Warning};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum DatasetError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("invalid JSON dataset: {0}")]
    Json(#[from] serde_json::Error),
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("unsupported dataset version {0}")]
    Version(u32),
    #[error(transparent)]
    Invalid(#[from] Error),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChoiceRow {
    pub menu: Vec<String>,
    pub choice: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DatasetFile {
    #[serde(default = "default_version")]
    pub version: u32,
    pub alternatives: Vec<String>,
    pub choices: Vec<ChoiceRow>,
}

fn default_version() -> u32 {
    FORMAT_VERSION
}

/// A validated dataset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dataset {
    pub ground: GroundSet,
    pub choice: ChoiceFunction,
    pub warnings: Vec<String>,
}

pub fn load_dataset(path: impl AsRef<Path>) -> Result<Dataset, DatasetError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| DatasetError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_dataset(&text)
}

/// Parses either encoding, picking JSON when the text starts with `{`.
pub fn parse_dataset(text: &str) -> Result<Dataset, DatasetError> {
    if text.trim_start().starts_with('{') {
        parse_json(text)
    } else {
        parse_lines(text)
    }
}

pub fn parse_json(text: &str) -> Result<Dataset, DatasetError> {
    let file: DatasetFile = serde_json::from_str(text)?;
    if file.version != FORMAT_VERSION {
        return Err(DatasetError::Version(file.version));
    }
    let ground = GroundSet::new(file.alternatives)?;
    let raw = file
        .choices
        .iter()
        .map(|row| Ok((ground.menu(&row.menu)?, ground.index_of(&row.choice)?)))
        .collect::<Result<Vec<_>, Error>>()?;
    finish(ground, &raw, |row| row)
}

pub fn parse_lines(text: &str) -> Result<Dataset, DatasetError> {
    let mut header: Option<Vec<String>> = None;
    let mut rows: Vec<(usize, Vec<String>, String)> = Vec::new();
    for (k, raw_line) in text.lines().enumerate() {
        let line_no = k + 1;
        let line = raw_line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("alternatives:") {
            if header.is_some() || !rows.is_empty() {
                return Err(DatasetError::Syntax {
                    line: line_no,
                    message: "`alternatives:` must come first and only once".into(),
                });
            }
            header = Some(split_labels(rest));
            continue;
        }
        let (menu, pick) = line.split_once("->").ok_or_else(|| DatasetError::Syntax {
            line: line_no,
            message: format!("expected `a,b,c -> a`, found `{line}`"),
        })?;
        let menu = split_labels(menu);
        let pick = pick.trim().to_string();
        if menu.is_empty() || pick.is_empty() {
            return Err(DatasetError::Syntax {
                line: line_no,
                message: "empty menu or choice".into(),
            });
        }
        rows.push((line_no, menu, pick));
    }

    let labels = header.unwrap_or_else(|| {
        let mut seen: Vec<String> = Vec::new();
        for (_, menu, _) in &rows {
            for label in menu {
                if !seen.contains(label) {
                    seen.push(label.clone());
                }
            }
        }
        seen
    });
    let ground = GroundSet::new(labels)?;
    let mut raw = Vec::with_capacity(rows.len());
    for (line, menu, pick) in &rows {
        let parsed = ground
            .menu(menu)
            .and_then(|m| Ok((m, ground.index_of(pick)?)))
            .map_err(|e| DatasetError::Syntax {
                line: *line,
                message: e.to_string(),
            })?;
        raw.push(parsed);
    }
    let lines: Vec<usize> = rows.iter().map(|(line, _, _)| *line).collect();
    finish(ground, &raw, |row| lines[row - 1])
}

fn split_labels(s: &str) -> Vec<String> {
    s.split(',')
        .map(|l| l.trim().to_string())
        .filter(|l| !l.is_empty())
        .collect()
}

fn finish(
    ground: GroundSet,
    raw: &[(Menu, Alt)],
    locate: impl Fn(usize) -> usize,
) -> Result<Dataset, DatasetError> {
    let (choice, warnings) = validate_choice(raw, &ground).map_err(|e| match e {
        Error::DuplicateMenu {
            menu,
            first_row,
            second_row,
        } => Error::DuplicateMenu {
            menu,
            first_row: locate(first_row),
            second_row: locate(second_row),
        },
        Error::PickNotInMenu { row, menu, pick } => Error::PickNotInMenu {
            row: locate(row),
            menu,
            pick,
        },
        other => other,
    })?;
    let warnings = warnings
        .into_iter()
        .map(|w| match w {
            Warning::SingletonCompleted(a) => {
                format!("singleton menu {{{}}} missing; filled with its only member", ground.label(a))
            }
        })
        .collect();
    Ok(Dataset {
        ground,
        choice,
        warnings,
    })
}

/// The full dataset, every menu included, in canonical menu order.
pub fn to_file(ground: &GroundSet, choice: &ChoiceFunction) -> DatasetFile {
    DatasetFile {
        version: FORMAT_VERSION,
        alternatives: ground.labels().to_vec(),
        choices: choice
            .rows()
            .into_iter()
            .map(|(menu, pick)| ChoiceRow {
                menu: ground.menu_labels(menu),
                choice: ground.label(pick).to_string(),
            })
            .collect(),
    }
}

pub fn to_json(ground: &GroundSet, choice: &ChoiceFunction) -> String {
    serde_json::to_string_pretty(&to_file(ground, choice)).expect("dataset serializes")
}

pub fn to_lines(ground: &GroundSet, choice: &ChoiceFunction) -> String {
    let mut out = format!("alternatives: {}\n", ground.labels().join(","));
    for (menu, pick) in choice.rows() {
        let _ = writeln!(out, "{} -> {}", ground.menu_labels(menu).join(","), ground.label(pick));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    const EXAMPLE4_JSON: &str = r#"{
        "alternatives": ["x", "y", "z"],
        "choices": [
            {"menu": ["x", "y", "z"], "choice": "x"},
            {"menu": ["x", "y"], "choice": "y"},
            {"menu": ["y", "z"], "choice": "z"},
            {"menu": ["x", "z"], "choice": "x"}
        ]
    }"#;

    #[test]
    fn json_without_singletons_warns() {
        let d = parse_dataset(EXAMPLE4_JSON).unwrap();
        assert_eq!(d.choice, fixtures::example4().1);
        assert_eq!(d.warnings.len(), 3);
    }

    #[test]
    fn line_format() {
        let text = "# example\nx,y,z -> x\nx,y -> y\ny,z -> z\nx,z -> x\n";
        let d = parse_dataset(text).unwrap();
        assert_eq!(d.ground.labels(), ["x", "y", "z"]);
        assert_eq!(d.choice, fixtures::example4().1);
    }

    #[test]
    fn line_format_header_fixes_label_order() {
        let text = "alternatives: z, y, x\nx,y,z -> x\nx,y -> y\ny,z -> z\nx,z -> x\n";
        let d = parse_dataset(text).unwrap();
        assert_eq!(d.ground.labels(), ["z", "y", "x"]);
    }

    #[test]
    fn duplicate_rows_report_line_numbers() {
        let text = "x,y,z -> x\n\nx,y -> y\ny,z -> z\ny,x -> x\nx,z -> x\n";
        match parse_dataset(text) {
            Err(DatasetError::Invalid(Error::DuplicateMenu {
                first_row, second_row, ..
            })) => assert_eq!((first_row, second_row), (3, 5)),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn syntax_errors() {
        assert!(matches!(parse_dataset("x,y"), Err(DatasetError::Syntax { line: 1, .. })));
        assert!(matches!(
            parse_dataset("alternatives: x,y\nx,y -> x\nx,q -> q\n"),
            Err(DatasetError::Syntax { line: 3, .. })
        ));
        assert!(matches!(
            parse_dataset(r#"{"version": 2, "alternatives": ["a"], "choices": []}"#),
            Err(DatasetError::Version(2))
        ));
    }

    #[test]
    fn missing_menu_is_invalid() {
        let text = "x,y,z -> x\nx,y -> y\ny,z -> z\n";
        assert!(matches!(
            parse_dataset(text),
            Err(DatasetError::Invalid(Error::MissingMenu { .. }))
        ));
    }

    #[test]
    fn writers_round_trip() {
        let (g, c) = fixtures::example5();
        let d = parse_dataset(&to_json(&g, &c)).unwrap();
        assert_eq!((d.ground, d.choice), (g.clone(), c.clone()));
        let d = parse_dataset(&to_lines(&g, &c)).unwrap();
        assert_eq!((d.ground, d.choice), (g, c));
    }
}

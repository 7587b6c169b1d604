//! Study CSV: one row per subject, a response column, and biomarker columns
//! that are filled only for biomarker-tested subjects.

use std::path::Path;

use eods::odeb::FullResponseSummary;

use crate::error::{CliError, Result};

#[derive(Debug, Clone)]
pub struct StudyTable {
    pub response_name: String,
    pub ids: Vec<String>,
    /// 1-based line number of each row in the file (the header is line 1).
    pub lines: Vec<u64>,
    pub responses: Vec<f64>,
    /// Biomarker columns in header order; `None` marks an untested subject.
    pub biomarkers: Vec<(String, Vec<Option<f64>>)>,
}

fn parse_cell(raw: &str) -> std::result::Result<Option<f64>, String> {
    let s = raw.trim();
    if s.is_empty() || s == "NA" {
        return Ok(None);
    }
    match s.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(Some(v)),
        _ => Err(format!("`{s}` is not a finite number")),
    }
}

impl StudyTable {
    /// Reads a study file. Without an explicit biomarker list every column
    /// other than the response and id columns is a biomarker.
    pub fn load(path: &Path, response: &str, id_column: &str, biomarkers: Option<&[String]>) -> Result<Self> {
        let csv_err = |source| CliError::Csv {
            path: path.to_path_buf(),
            source,
        };
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(true)
            .from_path(path)
            .map_err(csv_err)?;
        let headers: Vec<String> = reader
            .headers()
            .map_err(csv_err)?
            .iter()
            .map(|h| h.trim().to_string())
            .collect();
        let find = |name: &str| headers.iter().position(|h| h == name);
        let response_col = find(response)
            .ok_or_else(|| CliError::Schema(format!("response column `{response}` not found in header")))?;
        let id_col = find(id_column);
        let marker_cols: Vec<usize> = match biomarkers {
            Some(names) => names
                .iter()
                .map(|n| find(n).ok_or_else(|| CliError::Schema(format!("biomarker column `{n}` not found in header"))))
                .collect::<Result<_>>()?,
            None => (0..headers.len())
                .filter(|&c| c != response_col && Some(c) != id_col)
                .collect(),
        };
        if marker_cols.is_empty() {
            return Err(CliError::Schema("no biomarker columns".into()));
        }

        let mut table = StudyTable {
            response_name: response.to_string(),
            ids: Vec::new(),
            lines: Vec::new(),
            responses: Vec::new(),
            biomarkers: marker_cols.iter().map(|&c| (headers[c].clone(), Vec::new())).collect(),
        };
        for (row, record) in reader.records().enumerate() {
            let record = record.map_err(csv_err)?;
            let line = record.position().map_or(row as u64 + 2, |p| p.line());
            let cell = |c: usize| record.get(c).unwrap_or("");
            let y = parse_cell(cell(response_col))
                .map_err(|e| CliError::Schema(format!("row {} (line {line}), column `{response}`: {e}", row + 1)))?
                .ok_or_else(|| {
                    CliError::Schema(format!("row {} (line {line}): response `{response}` is missing", row + 1))
                })?;
            table.responses.push(y);
            table.lines.push(line);
            table.ids.push(id_col.map_or_else(|| (row + 1).to_string(), |c| cell(c).trim().to_string()));
            for (slot, &c) in table.biomarkers.iter_mut().zip(&marker_cols) {
                let v = parse_cell(cell(c)).map_err(|e| {
                    CliError::Schema(format!("row {} (line {line}), column `{}`: {e}", row + 1, headers[c]))
                })?;
                slot.1.push(v);
            }
        }
        if table.responses.is_empty() {
            return Err(CliError::Schema(format!("{} has no data rows", path.display())));
        }
        Ok(table)
    }

    pub fn n_full(&self) -> usize {
        self.responses.len()
    }

    pub fn column(&self, name: &str) -> Result<&[Option<f64>]> {
        self.biomarkers
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, v)| v.as_slice())
            .ok_or_else(|| CliError::Schema(format!("biomarker column `{name}` not loaded")))
    }

    pub fn full_summary(&self) -> Result<FullResponseSummary> {
        FullResponseSummary::from_responses(&self.responses)
            .map_err(|e| CliError::core(format!("response `{}`", self.response_name), e))
    }

    /// Row indices where the biomarker was measured.
    pub fn tested_rows(&self, name: &str) -> Result<Vec<usize>> {
        Ok(self
            .column(name)?
            .iter()
            .enumerate()
            .filter_map(|(i, v)| v.map(|_| i))
            .collect())
    }

    /// Rows with any biomarker measured.
    pub fn any_tested_rows(&self) -> Vec<usize> {
        (0..self.n_full())
            .filter(|&i| self.biomarkers.iter().any(|(_, v)| v[i].is_some()))
            .collect()
    }

    /// Warns when a tested subject's response lies strictly between the
    /// smallest and largest untested responses, i.e. the subset is not
    /// made of the two response tails.
    pub fn extremeness_warning(&self, tested: &[usize]) -> Option<String> {
        let mut is_tested = vec![false; self.n_full()];
        for &i in tested {
            is_tested[i] = true;
        }
        let untested = self.responses.iter().zip(&is_tested).filter(|(_, &t)| !t).map(|(y, _)| *y);
        let (lo, hi) = untested.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), y| (lo.min(y), hi.max(y)));
        if lo > hi {
            return None;
        }
        let inside: Vec<u64> = tested
            .iter()
            .filter(|&&i| self.responses[i] > lo && self.responses[i] < hi)
            .map(|&i| self.lines[i])
            .collect();
        if inside.is_empty() {
            return None;
        }
        let shown: Vec<String> = inside.iter().take(5).map(u64::to_string).collect();
        Some(format!(
            "{} tested rows have responses inside the untested range [{lo}, {hi}] (lines {}{}); the subset is not an extreme-tail sample",
            inside.len(),
            shown.join(", "),
            if inside.len() > 5 { ", ..." } else { "" }
        ))
    }
}

/// Line numbers of `rows`, abbreviated for messages.
pub fn describe_lines(table: &StudyTable, rows: &[usize]) -> String {
    let shown: Vec<String> = rows.iter().take(8).map(|&i| table.lines[i].to_string()).collect();
    let more = if rows.len() > 8 { ", ..." } else { "" };
    format!("lines {}{more}", shown.join(", "))
}

//! Extreme-sample selection and multi-biomarker screening.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::odeb::{estimate, FullResponseSummary, SelectedSubset};

/// Row indices chosen for biomarker testing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectionPlan {
    pub low_indices: Vec<usize>,
    pub high_indices: Vec<usize>,
    pub gamma_effective: f64,
    /// Set when a cut fell inside a run of tied responses.
    pub tie_note: Option<String>,
}

impl SelectionPlan {
    pub fn n_selected(&self) -> usize {
        self.low_indices.len() + self.high_indices.len()
    }

    /// All selected indices in ascending order.
    pub fn indices(&self) -> Vec<usize> {
        let mut all: Vec<usize> = self
            .low_indices
            .iter()
            .chain(&self.high_indices)
            .copied()
            .collect();
        all.sort_unstable();
        all
    }
}

/// Picks the lowest `⌊n_S/2⌋` and highest `⌈n_S/2⌉` responses,
/// `n_S = round(γ·n)`. Ties at a cut go to the smaller row index.
pub fn select_extremes(responses: &[f64], gamma: f64) -> Result<SelectionPlan> {
    let n = responses.len();
    if !(gamma > 0.0 && gamma <= 1.0) {
        return Err(domain(format!("sampling fraction must lie in (0, 1], got {gamma}")));
    }
    if n < 5 {
        return Err(domain(format!("need at least 5 responses, got {n}")));
    }
    if responses.iter().any(|v| v.is_nan()) {
        return Err(domain("responses contain NaN"));
    }
    let n_s = (gamma * n as f64).round() as usize;
    if n_s < 3 {
        return Err(domain(format!("γ·n = {} selects fewer than 3 subjects", gamma * n as f64)));
    }
    let n_low = n_s / 2;
    let n_high = n_s - n_low;

    let mut ascending: Vec<usize> = (0..n).collect();
    ascending.sort_by(|&a, &b| responses[a].total_cmp(&responses[b]).then(a.cmp(&b)));
    let low: Vec<usize> = ascending[..n_low].to_vec();

    let mut descending: Vec<usize> = ascending[n_low..].to_vec();
    descending.sort_by(|&a, &b| responses[b].total_cmp(&responses[a]).then(a.cmp(&b)));
    let high: Vec<usize> = descending[..n_high].to_vec();
    let unselected = &descending[n_high..];

    let mut notes = Vec::new();
    if let Some(&last_low) = low.last() {
        let cut = responses[last_low];
        let tied = unselected.iter().filter(|&&i| responses[i] == cut).count();
        if tied > 0 {
            notes.push(format!(
                "lower cut at {cut}: {tied} tied row(s) left out, smaller row indices kept"
            ));
        }
    }
    if let Some(&last_high) = high.last() {
        let cut = responses[last_high];
        let tied = unselected.iter().filter(|&&i| responses[i] == cut).count();
        if tied > 0 {
            notes.push(format!(
                "upper cut at {cut}: {tied} tied row(s) left out, smaller row indices kept"
            ));
        }
    }

    let mut low_indices = low;
    let mut high_indices = high;
    low_indices.sort_unstable();
    high_indices.sort_unstable();
    Ok(SelectionPlan {
        low_indices,
        high_indices,
        gamma_effective: n_s as f64 / n as f64,
        tie_note: if notes.is_empty() {
            None
        } else {
            Some(notes.join("; "))
        },
    })
}

/// Benjamini–Hochberg step-up adjusted p-values, in input order.
pub fn bh_adjust(p_values: &[f64]) -> Result<Vec<f64>> {
    if let Some(p) = p_values.iter().find(|p| !(0.0..=1.0).contains(*p)) {
        return Err(domain(format!("p-values must lie in [0, 1], got {p}")));
    }
    let m = p_values.len();
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| p_values[a].total_cmp(&p_values[b]).then(a.cmp(&b)));
    let mut adjusted = vec![0.0; m];
    let mut running = 1.0f64;
    for (rank, &i) in order.iter().enumerate().rev() {
        // factor first so that q >= p survives rounding
        let q = p_values[i] * (m as f64 / (rank + 1) as f64);
        running = running.min(q);
        adjusted[i] = running.min(1.0);
    }
    Ok(adjusted)
}

/// One biomarker's screening result.
///
/// Rows whose estimation failed carry NaN statistics, the failure in `flag`,
/// and sort after every successful row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScreenRow {
    pub biomarker_id: String,
    pub estimate: f64,
    pub se: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub p_value: f64,
    pub q_value: f64,
    pub rank: usize,
    pub n_selected: usize,
    pub flag: Option<String>,
}

/// Runs the forward-effect estimate for every biomarker and ranks them by
/// p-value with BH q-values attached.
///
/// Each biomarker vector is aligned with `subset_responses`; NaN entries mark
/// subjects not tested for that biomarker and are dropped pairwise. With
/// `log10_transform`, every tested value must be positive.
pub fn screen_biomarkers(
    biomarker_table: &BTreeMap<String, Vec<f64>>,
    subset_responses: &[f64],
    full: &FullResponseSummary,
    confidence_level: f64,
    log10_transform: bool,
) -> Result<Vec<ScreenRow>> {
    for (id, values) in biomarker_table {
        if values.len() != subset_responses.len() {
            return Err(domain(format!(
                "biomarker {id} has {} values for {} responses",
                values.len(),
                subset_responses.len()
            )));
        }
        if log10_transform {
            if let Some(row) = values.iter().position(|v| !v.is_nan() && *v <= 0.0) {
                return Err(domain(format!(
                    "biomarker {id} row {row}: value {} cannot be log10-transformed",
                    values[row]
                )));
            }
        }
    }

    let entries: Vec<(&String, &Vec<f64>)> = biomarker_table.iter().collect();
    let mut rows: Vec<ScreenRow> = entries
        .par_iter()
        .map(|(id, values)| screen_one(id, values, subset_responses, full, confidence_level, log10_transform))
        .collect();

    let ok: Vec<usize> = (0..rows.len()).filter(|&i| rows[i].flag.is_none()).collect();
    let p: Vec<f64> = ok.iter().map(|&i| rows[i].p_value).collect();
    let q = bh_adjust(&p)?;
    for (&i, q) in ok.iter().zip(q) {
        rows[i].q_value = q;
    }
    rows.sort_by(|a, b| {
        a.flag
            .is_some()
            .cmp(&b.flag.is_some())
            .then(a.p_value.total_cmp(&b.p_value))
            .then_with(|| a.biomarker_id.cmp(&b.biomarker_id))
    });
    for (rank, row) in rows.iter_mut().enumerate() {
        row.rank = rank + 1;
    }
    Ok(rows)
}

fn screen_one(
    id: &str,
    values: &[f64],
    responses: &[f64],
    full: &FullResponseSummary,
    confidence_level: f64,
    log10_transform: bool,
) -> ScreenRow {
    let (y, x): (Vec<f64>, Vec<f64>) = responses
        .iter()
        .zip(values)
        .filter(|(_, v)| !v.is_nan())
        .map(|(&y, &v)| (y, if log10_transform { v.log10() } else { v }))
        .unzip();
    let n_selected = y.len();
    let result = SelectedSubset::with_full(y, x, full).and_then(|s| estimate(&s, full, confidence_level));
    match result {
        Ok(est) => ScreenRow {
            biomarker_id: id.to_string(),
            estimate: est.beta_y,
            se: est.se_beta_y,
            ci_low: est.ci_low,
            ci_high: est.ci_high,
            p_value: est.p_value,
            q_value: f64::NAN,
            rank: 0,
            n_selected,
            flag: None,
        },
        Err(e) => ScreenRow {
            biomarker_id: id.to_string(),
            estimate: f64::NAN,
            se: f64::NAN,
            ci_low: f64::NAN,
            ci_high: f64::NAN,
            p_value: f64::NAN,
            q_value: f64::NAN,
            rank: 0,
            n_selected,
            flag: Some(e.to_string()),
        },
    }
}

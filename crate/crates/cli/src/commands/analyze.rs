use std::io::Write;
use std::path::Path;

use eods::odeb::{check_model, estimate, SelectedSubset};
use serde::Serialize;

use super::{biomarker_subset, subset_context, warn, write_json, write_qq};
use crate::args::AnalyzeArgs;
use crate::error::{CliError, Result};
use crate::study::StudyTable;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Diagnostics {
    pub response_qq: String,
    pub residual_qq: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnalyzeReport {
    pub biomarker: String,
    pub response: String,
    pub log10: bool,
    pub beta_y: f64,
    pub alpha_y: f64,
    pub sigma2_eps_y: f64,
    pub se_beta_y: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub confidence_level: f64,
    pub p_value: f64,
    pub n_selected: usize,
    pub n_full: usize,
    pub gamma_effective: f64,
    pub warnings: Vec<String>,
    pub diagnostics: Option<Diagnostics>,
}

fn sibling(report: &Path, suffix: &str) -> (std::path::PathBuf, String) {
    let stem = report.file_stem().map_or("report".into(), |s| s.to_string_lossy().into_owned());
    let name = format!("{stem}.{suffix}");
    (report.with_file_name(&name), name)
}

pub fn analyze(args: &AnalyzeArgs, stdout: &mut dyn Write) -> Result<AnalyzeReport> {
    let study = &args.study;
    let table = StudyTable::load(
        &study.input,
        &study.response,
        &study.id_column,
        Some(std::slice::from_ref(&args.biomarker)),
    )?;
    let subset = biomarker_subset(&table, &args.biomarker, args.log10)?;
    let context = subset_context(&table, &args.biomarker, &subset.rows);
    let full = table.full_summary()?;
    let mut warnings = Vec::new();
    if let Some(w) = table.extremeness_warning(&subset.rows) {
        warn(&w);
        warnings.push(w);
    }
    let selected = SelectedSubset::with_full(subset.responses, subset.biomarker, &full)
        .map_err(|e| CliError::core(&context, e))?;
    let est = estimate(&selected, &full, args.confidence).map_err(|e| CliError::core(&context, e))?;

    let mut report = AnalyzeReport {
        biomarker: args.biomarker.clone(),
        response: study.response.clone(),
        log10: args.log10,
        beta_y: est.beta_y,
        alpha_y: est.alpha_y,
        sigma2_eps_y: est.sigma2_eps_y,
        se_beta_y: est.se_beta_y,
        ci_low: est.ci_low,
        ci_high: est.ci_high,
        confidence_level: est.confidence_level,
        p_value: est.p_value,
        n_selected: est.n_selected,
        n_full: est.n_full,
        gamma_effective: est.n_selected as f64 / est.n_full as f64,
        warnings,
        diagnostics: None,
    };

    if let Some(out) = &args.out {
        let check = check_model(&selected, &table.responses).map_err(|e| CliError::core(&context, e))?;
        let (response_path, response_name) = sibling(out, "response_qq.csv");
        let (residual_path, residual_name) = sibling(out, "residual_qq.csv");
        write_qq(&response_path, &check.response_qq)?;
        write_qq(&residual_path, &check.residual_qq)?;
        report.diagnostics = Some(Diagnostics {
            response_qq: response_name,
            residual_qq: residual_name,
        });
        write_json(out, &report)?;
    }

    let transform = if args.log10 { "log10 " } else { "" };
    let text = format!(
        "biomarker {transform}{} on response {}\n\
         n_F {}, n_S {}, gamma {:.4}\n\
         beta_y {:.6}  se {:.6}  {:.0}% CI [{:.6}, {:.6}]  p {:.4e}\n\
         alpha_y {:.6} (point estimate)  residual variance {:.6}\n",
        report.biomarker,
        report.response,
        report.n_full,
        report.n_selected,
        report.gamma_effective,
        report.beta_y,
        report.se_beta_y,
        report.confidence_level * 100.0,
        report.ci_low,
        report.ci_high,
        report.p_value,
        report.alpha_y,
        report.sigma2_eps_y,
    );
    stdout
        .write_all(text.as_bytes())
        .map_err(|e| CliError::file("<stdout>", e))?;
    Ok(report)
}

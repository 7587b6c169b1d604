use std::io::Write;

use eods::design::{
    cohen_f2, min_gamma_for_power, min_nfull_for_power, power_eods, selected_size, DesignSpec,
};
use serde::Serialize;

use super::write_json;
use crate::args::PlanArgs;
use crate::error::{CliError, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PlanReport {
    /// `power`, `min_gamma` or `min_n_full`
    pub mode: String,
    pub n_full: u64,
    pub gamma: f64,
    pub n_selected: u64,
    pub low_tail: u64,
    pub high_tail: u64,
    pub effect_f: f64,
    pub alpha: f64,
    pub target_power: Option<f64>,
    pub power: f64,
    pub ncp: f64,
    pub df1: u64,
    pub df2: u64,
    pub variance_inflation: f64,
}

fn effect_size(args: &PlanArgs) -> Result<f64> {
    match (args.effect_f, args.rho) {
        (Some(f), None) => Ok(f),
        (None, Some(rho)) => Ok(cohen_f2(rho).map_err(|e| CliError::core("--rho", e))?.sqrt()),
        _ => Err(CliError::Usage("give exactly one of --effect-f or --rho".into())),
    }
}

fn tails(n_selected: u64) -> String {
    let low = n_selected / 2;
    let high = n_selected - low;
    if low == high {
        format!("{low} per tail")
    } else {
        format!("{low} low + {high} high")
    }
}

pub fn plan(args: &PlanArgs, stdout: &mut dyn Write) -> Result<PlanReport> {
    let f = effect_size(args)?;
    let alpha = args.alpha;
    let (mode, n_full, gamma) = match (args.n_full, args.gamma, args.target_power) {
        (Some(n), Some(g), _) => ("power", n, g),
        (Some(n), None, Some(target)) => {
            let plan = min_gamma_for_power(n, f, alpha, target).map_err(|e| CliError::core("min_gamma", e))?;
            ("min_gamma", n, plan.gamma)
        }
        (None, Some(g), Some(target)) => {
            let n = min_nfull_for_power(g, f, alpha, target).map_err(|e| CliError::core("min_n_full", e))?;
            ("min_n_full", n, g)
        }
        _ => {
            return Err(CliError::Usage(
                "give --n-full and --gamma (power), --n-full and --target-power (smallest fraction), \
                 or --gamma and --target-power (smallest cohort)"
                    .into(),
            ))
        }
    };
    let spec = DesignSpec::new(n_full, gamma, f, alpha).map_err(|e| CliError::core("design", e))?;
    let result = power_eods(&spec).map_err(|e| CliError::core("power", e))?;
    let n_selected = selected_size(n_full, gamma);
    let report = PlanReport {
        mode: mode.into(),
        n_full,
        gamma,
        n_selected,
        low_tail: n_selected / 2,
        high_tail: n_selected - n_selected / 2,
        effect_f: f,
        alpha,
        target_power: args.target_power,
        power: result.power,
        ncp: result.ncp,
        df1: result.df1,
        df2: result.df2,
        variance_inflation: result.variance_inflation,
    };

    let mut text = format!("effect f {f} (f^2 {:.6}), alpha {alpha}\n", f * f);
    match args.target_power {
        Some(t) => text.push_str(&format!("n_full {n_full}, gamma {gamma}, target power {t}\n")),
        None => text.push_str(&format!("n_full {n_full}, gamma {gamma}\n")),
    }
    if n_selected == n_full {
        text.push_str(&format!("select all {n_selected}, power {:.4}\n", report.power));
    } else {
        text.push_str(&format!(
            "select {} ({}), power {:.4}\n",
            n_selected,
            tails(n_selected),
            report.power
        ));
    }
    text.push_str(&format!(
        "noncentral F: df1 {}, df2 {}, ncp {:.6}, variance inflation {:.6}\n",
        report.df1, report.df2, report.ncp, report.variance_inflation
    ));
    if let Some(t) = args.target_power {
        if report.power < t {
            text.push_str(&format!("target power {t} not reached\n"));
        }
    }
    stdout
        .write_all(text.as_bytes())
        .map_err(|e| CliError::file("<stdout>", e))?;
    if let Some(out) = &args.out {
        write_json(out, &report)?;
    }
    Ok(report)
}

use std::io::Write;

use eods::odeb::{check_model, SelectedSubset, ShapeSummary};
use eods::regress::{qq_slope, QqPoint};

use super::{biomarker_subset, create, fmt17, subset_context, warn, write_qq};
use crate::args::CheckArgs;
use crate::error::{CliError, Result};
use crate::study::StudyTable;

const SKEW_FLAG: f64 = 0.5;

pub fn check(args: &CheckArgs, stdout: &mut dyn Write) -> Result<()> {
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
    let selected = SelectedSubset::with_full(subset.responses, subset.biomarker, &full)
        .map_err(|e| CliError::core(&context, e))?;
    let diag = check_model(&selected, &table.responses).map_err(|e| CliError::core(&context, e))?;

    std::fs::create_dir_all(&args.out).map_err(|e| CliError::file(&args.out, e))?;
    write_qq(&args.out.join("response_qq.csv"), &diag.response_qq)?;
    write_qq(&args.out.join("residual_qq.csv"), &diag.residual_qq)?;

    let series: [(&str, &str, &[QqPoint], ShapeSummary); 2] = [
        ("response", "normality of the response", &diag.response_qq, diag.response_shape),
        ("residual", "normality of the biomarker given the response", &diag.residual_qq, diag.residual_shape),
    ];
    let shape_path = args.out.join("shape.csv");
    let mut csv = String::from("series,n,skewness,excess_kurtosis,qq_slope\n");
    let mut text = String::new();
    for (name, assumption, qq, shape) in series {
        let slope = qq_slope(qq);
        csv.push_str(&format!(
            "{name},{},{},{},{}\n",
            qq.len(),
            fmt17(shape.skewness),
            fmt17(shape.excess_kurtosis),
            fmt17(slope)
        ));
        text.push_str(&format!(
            "{name}: n {}, skewness {:.4}, excess kurtosis {:.4}, QQ slope {:.4}\n",
            qq.len(),
            shape.skewness,
            shape.excess_kurtosis,
            slope
        ));
        if shape.skewness.abs() > SKEW_FLAG {
            warn(&format!(
                "{name} skewness {:.3} exceeds {SKEW_FLAG} in magnitude; {assumption} is doubtful",
                shape.skewness
            ));
        }
    }
    let mut w = create(&shape_path)?;
    w.write_all(csv.as_bytes())
        .and_then(|_| w.flush())
        .map_err(|e| CliError::file(&shape_path, e))?;
    text.push_str(&format!("wrote response_qq.csv, residual_qq.csv, shape.csv to {}\n", args.out.display()));
    stdout
        .write_all(text.as_bytes())
        .map_err(|e| CliError::file("<stdout>", e))
}

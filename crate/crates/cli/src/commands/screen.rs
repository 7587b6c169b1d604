use std::collections::BTreeMap;
use std::io::Write;

use eods::screen::screen_biomarkers;

use super::{create, fmt17, warn, with_workers};
use crate::args::ScreenArgs;
use crate::error::{CliError, Result};
use crate::study::StudyTable;

const HEADER: &str = "rank,biomarker,Estimate,Std. Error,LCL,UCL,P-Value,q-value,n_S,q_below_level,flag\n";

pub fn screen(args: &ScreenArgs, stdout: &mut dyn Write) -> Result<()> {
    let study = &args.study;
    let table = StudyTable::load(&study.input, &study.response, &study.id_column, args.biomarkers.as_deref())?;
    if !(args.bh_level > 0.0 && args.bh_level < 1.0) {
        return Err(CliError::Usage(format!("--bh-level must lie in (0, 1), got {}", args.bh_level)));
    }
    let rows = table.any_tested_rows();
    if let Some(w) = table.extremeness_warning(&rows) {
        warn(&w);
    }
    let full = table.full_summary()?;
    let responses: Vec<f64> = rows.iter().map(|&i| table.responses[i]).collect();
    let mut markers = BTreeMap::new();
    for (name, column) in &table.biomarkers {
        let mut values = Vec::with_capacity(rows.len());
        for &i in &rows {
            match column[i] {
                Some(v) if args.log10 && v <= 0.0 => {
                    return Err(CliError::core(
                        format!("biomarker `{name}` row {} (line {})", i + 1, table.lines[i]),
                        eods::Error::Domain(format!("value {v} cannot be log10-transformed")),
                    ))
                }
                Some(v) => values.push(v),
                None => values.push(f64::NAN),
            }
        }
        markers.insert(name.clone(), values);
    }
    let result = with_workers(args.workers, || {
        screen_biomarkers(&markers, &responses, &full, args.confidence, args.log10)
    })?
    .map_err(|e| CliError::core("screen", e))?;

    let mut csv = String::from(HEADER);
    for row in &result {
        let below = row.flag.is_none() && row.q_value < args.bh_level;
        let flag = row.flag.as_deref().unwrap_or("").replace(['"', ','], ";");
        csv.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{}\n",
            row.rank,
            row.biomarker_id,
            fmt17(row.estimate),
            fmt17(row.se),
            fmt17(row.ci_low),
            fmt17(row.ci_high),
            fmt17(row.p_value),
            fmt17(row.q_value),
            row.n_selected,
            below,
            flag
        ));
    }
    let discoveries = result
        .iter()
        .filter(|r| r.flag.is_none() && r.q_value < args.bh_level)
        .count();
    let flagged = result.iter().filter(|r| r.flag.is_some()).count();
    let summary = format!(
        "screened {} biomarkers (n_F {}), {discoveries} with q < {}, {flagged} flagged\n",
        result.len(),
        table.n_full(),
        args.bh_level
    );
    match &args.out {
        Some(path) => {
            let mut w = create(path)?;
            w.write_all(csv.as_bytes())
                .and_then(|_| w.flush())
                .map_err(|e| CliError::file(path, e))?;
            stdout
                .write_all(summary.as_bytes())
                .map_err(|e| CliError::file("<stdout>", e))?;
        }
        None => {
            stdout
                .write_all(csv.as_bytes())
                .map_err(|e| CliError::file("<stdout>", e))?;
            eprint!("{summary}");
        }
    }
    Ok(())
}

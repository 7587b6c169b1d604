mod analyze;
mod check;
mod plan;
mod screen;
mod simulate;

pub use analyze::{analyze, AnalyzeReport};
pub use check::check;
pub use plan::{plan, PlanReport};
pub use screen::screen;
pub use simulate::simulate;

use std::io::Write;
use std::path::Path;

use crate::error::{CliError, Result};
use crate::study::{describe_lines, StudyTable};

/// Round-trip text for a computed value: 17 significant digits, `NA` for NaN.
pub fn fmt17(v: f64) -> String {
    if v.is_nan() {
        "NA".into()
    } else {
        format!("{v:.16e}")
    }
}

pub(crate) fn with_workers<T: Send>(workers: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match workers {
        None => Ok(f()),
        Some(0) => Err(CliError::Usage("--workers must be at least 1".into())),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| CliError::Usage(format!("cannot start {n} workers: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

pub(crate) fn create(path: &Path) -> Result<std::io::BufWriter<std::fs::File>> {
    std::fs::File::create(path)
        .map(std::io::BufWriter::new)
        .map_err(|e| CliError::file(path, e))
}

pub(crate) fn write_json<T: serde::Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut w = create(path)?;
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w).and_then(|_| w.flush()).map_err(|e| CliError::file(path, e))
}

pub(crate) fn warn(message: &str) {
    eprintln!("warning: {message}");
}

/// Tested rows of one biomarker, with the biomarker optionally log10-transformed.
pub(crate) struct Subset {
    pub rows: Vec<usize>,
    pub responses: Vec<f64>,
    pub biomarker: Vec<f64>,
}

pub(crate) fn biomarker_subset(table: &StudyTable, name: &str, log10: bool) -> Result<Subset> {
    let column = table.column(name)?;
    let rows = table.tested_rows(name)?;
    let mut biomarker = Vec::with_capacity(rows.len());
    for &i in &rows {
        let v = column[i].expect("tested row");
        if log10 && v <= 0.0 {
            return Err(CliError::core(
                format!("biomarker `{name}` row {} (line {})", i + 1, table.lines[i]),
                eods::Error::Domain(format!("value {v} cannot be log10-transformed")),
            ));
        }
        biomarker.push(if log10 { v.log10() } else { v });
    }
    Ok(Subset {
        responses: rows.iter().map(|&i| table.responses[i]).collect(),
        biomarker,
        rows,
    })
}

pub(crate) fn subset_context(table: &StudyTable, name: &str, rows: &[usize]) -> String {
    format!("biomarker `{name}`, {} tested rows ({})", rows.len(), describe_lines(table, rows))
}

pub(crate) fn write_qq(path: &Path, points: &[eods::regress::QqPoint]) -> Result<()> {
    let mut w = create(path)?;
    let mut body = String::from("theoretical,observed\n");
    for p in points {
        body.push_str(&format!("{},{}\n", fmt17(p.theoretical), fmt17(p.observed)));
    }
    w.write_all(body.as_bytes())
        .and_then(|_| w.flush())
        .map_err(|e| CliError::file(path, e))
}

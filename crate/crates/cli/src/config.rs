//! Grid configuration: `key = v1, v2, ...` lines, expanded as a cross product.
//!
//! ```text
//! # desk-scale grid
//! n_full = 200, 400
//! gamma = 0.2
//! beta_y = 0, 0.2
//! family = normal, t10, lognormal
//! estimator = odeb, ols
//! replicates = 2000
//! seed = 7
//! ```

use eods::sim::{Estimator, ResidualFamily, Sampling, SimScenario};

use crate::error::{CliError, Result};

/// Keys in expansion order; the first key varies slowest.
const KEYS: [&str; 13] = [
    "n_full",
    "gamma",
    "beta_y",
    "family",
    "sampling",
    "estimator",
    "alpha_y",
    "noise_variance",
    "x_mean",
    "x_var",
    "alpha_level",
    "replicates",
    "seed",
];

const SCALAR_KEYS: [&str; 2] = ["replicates", "seed"];

fn parse_num<T: std::str::FromStr>(v: &str) -> std::result::Result<T, String> {
    v.parse::<T>().map_err(|_| format!("cannot parse `{v}`"))
}

pub fn parse_family(v: &str) -> std::result::Result<ResidualFamily, String> {
    match v {
        "normal" => Ok(ResidualFamily::Normal),
        "lognormal" => Ok(ResidualFamily::ShiftedLogNormal),
        _ => match v.strip_prefix('t') {
            Some(df) => Ok(ResidualFamily::ScaledT { df: parse_num(df)? }),
            None => Err(format!("unknown family `{v}` (normal, lognormal, t<df>)")),
        },
    }
}

pub fn family_name(f: ResidualFamily) -> String {
    match f {
        ResidualFamily::Normal => "normal".into(),
        ResidualFamily::ShiftedLogNormal => "lognormal".into(),
        ResidualFamily::ScaledT { df } => format!("t{df}"),
    }
}

fn apply(s: &mut SimScenario, key: &str, v: &str) -> std::result::Result<(), String> {
    match key {
        "n_full" => s.n_full = parse_num(v)?,
        "gamma" => s.gamma = parse_num(v)?,
        "beta_y" => s.beta_y = parse_num(v)?,
        "family" => s.residual_family = parse_family(v)?,
        "sampling" => {
            s.sampling = match v {
                "extreme" => Sampling::Extreme,
                "random" => Sampling::Random,
                _ => return Err(format!("unknown sampling `{v}` (extreme, random)")),
            }
        }
        "estimator" => {
            s.estimator = match v {
                "odeb" => Estimator::Odeb,
                "ols" => Estimator::Ols,
                _ => return Err(format!("unknown estimator `{v}` (odeb, ols)")),
            }
        }
        "alpha_y" => s.alpha_y = parse_num(v)?,
        "noise_variance" => s.noise_variance = parse_num(v)?,
        "x_mean" => s.x_mean = parse_num(v)?,
        "x_var" => s.x_var = parse_num(v)?,
        "alpha_level" => s.alpha_level = parse_num(v)?,
        "replicates" => s.replicates = parse_num(v)?,
        "seed" => s.seed = parse_num(v)?,
        _ => unreachable!("key checked by caller"),
    }
    Ok(())
}

/// Parses a grid file into scenarios (cross product over listed values).
pub fn parse_grid(text: &str) -> Result<Vec<SimScenario>> {
    let mut values: Vec<Option<Vec<String>>> = vec![None; KEYS.len()];
    for (n, raw) in text.lines().enumerate() {
        let line = n + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let err = |field: &str, message: String| CliError::Config {
            line,
            field: field.to_string(),
            message,
        };
        let (key, rest) = content
            .split_once('=')
            .ok_or_else(|| err(content, "expected `key = value, ...`".into()))?;
        let key = key.trim();
        let slot = KEYS
            .iter()
            .position(|k| *k == key)
            .ok_or_else(|| err(key, format!("unknown key; expected one of {}", KEYS.join(", "))))?;
        if values[slot].is_some() {
            return Err(err(key, "key given twice".into()));
        }
        let items: Vec<String> = rest.split(',').map(|v| v.trim().to_string()).collect();
        if items.iter().any(String::is_empty) {
            return Err(err(key, "empty value".into()));
        }
        if SCALAR_KEYS.contains(&key) && items.len() > 1 {
            return Err(err(key, "takes a single value".into()));
        }
        let mut probe = SimScenario::default();
        for v in &items {
            apply(&mut probe, key, v).map_err(|m| err(key, m))?;
        }
        values[slot] = Some(items);
    }

    let mut grid = vec![SimScenario::default()];
    for (key, items) in KEYS.iter().zip(&values) {
        let Some(items) = items else { continue };
        grid = grid
            .iter()
            .flat_map(|base| {
                items.iter().map(move |v| {
                    let mut s = base.clone();
                    apply(&mut s, key, v).expect("validated while parsing");
                    s
                })
            })
            .collect();
    }
    Ok(grid)
}

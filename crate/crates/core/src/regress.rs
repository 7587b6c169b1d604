//! Simple (one-predictor) least-squares regression and normal QQ series.

use serde::{Deserialize, Serialize};

use crate::dist::{norm_quantile, t_two_sided_p};
use crate::error::{degenerate, Result};
use crate::sum::{mean, sum};

/// Observed `(predictor, response)` pairs of equal length.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairedSample {
    predictor: Vec<f64>,
    response: Vec<f64>,
}

impl PairedSample {
    /// Builds a sample; requires equal lengths, at least three pairs and
    /// finite values. Predictor variance is checked when fitting.
    pub fn new(predictor: Vec<f64>, response: Vec<f64>) -> Result<Self> {
        if predictor.len() != response.len() {
            return Err(degenerate(format!(
                "predictor has {} values but response has {}",
                predictor.len(),
                response.len()
            )));
        }
        if predictor.len() < 3 {
            return Err(degenerate(format!(
                "need at least 3 pairs, got {}",
                predictor.len()
            )));
        }
        if let Some(i) = predictor
            .iter()
            .chain(response.iter())
            .position(|v| !v.is_finite())
        {
            return Err(degenerate(format!(
                "non-finite value at position {}",
                i % predictor.len()
            )));
        }
        Ok(Self {
            predictor,
            response,
        })
    }

    pub fn predictor(&self) -> &[f64] {
        &self.predictor
    }

    pub fn response(&self) -> &[f64] {
        &self.response
    }

    pub fn len(&self) -> usize {
        self.predictor.len()
    }

    pub fn is_empty(&self) -> bool {
        self.predictor.is_empty()
    }
}

/// Least-squares fit of `response = intercept + slope · predictor + error`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub intercept: f64,
    pub slope: f64,
    pub se_slope: f64,
    pub se_intercept: f64,
    /// Unbiased residual variance, SSE / (n − 2).
    pub residual_variance: f64,
    pub df: usize,
    pub r_squared: f64,
    pub t_stat: f64,
    /// Two-sided p-value of the slope t-test.
    pub p_value: f64,
    pub residuals: Vec<f64>,
}

/// Ordinary least squares on a [`PairedSample`].
pub fn fit_simple(sample: &PairedSample) -> Result<FitResult> {
    let x = sample.predictor();
    let y = sample.response();
    let n = x.len();
    if n < 3 {
        return Err(degenerate(format!("need at least 3 pairs, got {n}")));
    }
    let x_bar = mean(x);
    let y_bar = mean(y);
    let sxx = sum(x.iter().map(|v| (v - x_bar) * (v - x_bar)));
    if !(sxx > 0.0) {
        return Err(degenerate("predictor has zero variance"));
    }
    let sxy = sum(x.iter().zip(y).map(|(a, b)| (a - x_bar) * (b - y_bar)));
    let syy = sum(y.iter().map(|v| (v - y_bar) * (v - y_bar)));

    let slope = sxy / sxx;
    let intercept = y_bar - slope * x_bar;
    let residuals: Vec<f64> = x
        .iter()
        .zip(y)
        .map(|(a, b)| b - intercept - slope * a)
        .collect();
    let df = n - 2;
    let sse = sum(residuals.iter().map(|r| r * r));
    let residual_variance = sse / df as f64;
    let se_slope = (residual_variance / sxx).sqrt();
    let se_intercept = (residual_variance * (1.0 / n as f64 + x_bar * x_bar / sxx)).sqrt();
    let r_squared = if syy > 0.0 {
        (sxy * sxy / (sxx * syy)).min(1.0)
    } else {
        0.0
    };
    let t_stat = if se_slope > 0.0 {
        slope / se_slope
    } else if slope == 0.0 {
        0.0
    } else {
        f64::INFINITY.copysign(slope)
    };
    let p_value = t_two_sided_p(t_stat, df as f64)?;

    Ok(FitResult {
        intercept,
        slope,
        se_slope,
        se_intercept,
        residual_variance,
        df,
        r_squared,
        t_stat,
        p_value,
        residuals,
    })
}

/// One point of a normal probability plot.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QqPoint {
    pub theoretical: f64,
    pub observed: f64,
}

/// Normal QQ series: the i-th order statistic paired with Φ⁻¹((i − 0.5)/n).
pub fn qq_points(values: &[f64]) -> Result<Vec<QqPoint>> {
    let n = values.len();
    if n < 3 {
        return Err(degenerate(format!("QQ series needs at least 3 values, got {n}")));
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    sorted
        .into_iter()
        .enumerate()
        .map(|(i, observed)| {
            let p = (i as f64 + 0.5) / n as f64;
            Ok(QqPoint {
                theoretical: norm_quantile(p)?,
                observed,
            })
        })
        .collect()
}

/// Least-squares slope of observed on theoretical quantiles; near 1 for
/// standard-normal data.
pub fn qq_slope(points: &[QqPoint]) -> f64 {
    let t: Vec<f64> = points.iter().map(|p| p.theoretical).collect();
    let o: Vec<f64> = points.iter().map(|p| p.observed).collect();
    let t_bar = mean(&t);
    let o_bar = mean(&o);
    let stt = sum(t.iter().map(|v| (v - t_bar) * (v - t_bar)));
    let sto = sum(t.iter().zip(&o).map(|(a, b)| (a - t_bar) * (b - o_bar)));
    sto / stt
}

//! Monte Carlo engine comparing OLS and reverse-regression (ODEB) estimation
//! of the forward slope under extreme and random sampling.
//!
//! Data follow `Y = α_Y + β_Y·X + ε`, `X ~ N(x_mean, x_var)`. Every replicate
//! draws from its own ChaCha8 stream selected by `(seed, replicate, arm)`, so
//! results are bit-identical for any thread count, and all scenarios sharing a
//! seed and data-generating parameters see the same data (paired arms).

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal, StandardNormal, StudentT};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dist::t_quantile;
use crate::error::{domain, Error, Result};
use crate::odeb::{estimate, FullResponseSummary, SelectedSubset};
use crate::regress::{fit_simple, PairedSample};
use crate::roots::{brent, expand_upper};
use crate::screen::select_extremes;
use crate::sum::{mean, sum};

const STREAMS_PER_REPLICATE: u64 = 2;
const DATA_STREAM: u64 = 0;
const SUBSAMPLE_STREAM: u64 = 1;

/// Residual distribution of the forward model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ResidualFamily {
    /// N(0, noise_variance).
    Normal,
    /// √noise_variance · T_df; the variance is noise_variance·df/(df − 2).
    ScaledT { df: f64 },
    /// Log-normal shifted so that its mode is 0, with variance noise_variance.
    ShiftedLogNormal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sampling {
    Extreme,
    Random,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Estimator {
    /// Forward least squares on the subset alone.
    Ols,
    /// Reverse regression converted with the full-sample response moments.
    Odeb,
}

/// One Monte Carlo configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimScenario {
    pub n_full: usize,
    pub beta_y: f64,
    pub alpha_y: f64,
    /// Variance (not SD) of the residual scale.
    pub noise_variance: f64,
    pub x_mean: f64,
    pub x_var: f64,
    pub residual_family: ResidualFamily,
    pub gamma: f64,
    pub sampling: Sampling,
    pub estimator: Estimator,
    pub replicates: usize,
    pub seed: u64,
    /// Test level; intervals use confidence 1 − alpha_level.
    pub alpha_level: f64,
}

impl Default for SimScenario {
    fn default() -> Self {
        Self {
            n_full: 400,
            beta_y: 0.0,
            alpha_y: 5.0,
            noise_variance: 5.0,
            x_mean: 0.0,
            x_var: 5.0,
            residual_family: ResidualFamily::Normal,
            gamma: 0.2,
            sampling: Sampling::Extreme,
            estimator: Estimator::Odeb,
            replicates: 2000,
            seed: 0,
            alpha_level: 0.05,
        }
    }
}

impl SimScenario {
    pub fn validate(&self) -> Result<()> {
        let finite = [self.beta_y, self.alpha_y, self.x_mean];
        if finite.iter().any(|v| !v.is_finite()) {
            return Err(domain("beta_y, alpha_y and x_mean must be finite"));
        }
        if !(self.noise_variance > 0.0 && self.noise_variance.is_finite()) {
            return Err(domain(format!("noise_variance must be positive, got {}", self.noise_variance)));
        }
        if !(self.x_var > 0.0 && self.x_var.is_finite()) {
            return Err(domain(format!("x_var must be positive, got {}", self.x_var)));
        }
        if let ResidualFamily::ScaledT { df } = self.residual_family {
            if !(df > 2.0) {
                return Err(domain(format!("scaled t needs df > 2, got {df}")));
            }
        }
        if !(self.gamma > 0.0 && self.gamma <= 1.0) {
            return Err(domain(format!("gamma must lie in (0, 1], got {}", self.gamma)));
        }
        if self.n_full < 5 {
            return Err(domain(format!("n_full must be >= 5, got {}", self.n_full)));
        }
        if self.n_selected() < 4 {
            return Err(domain(format!(
                "gamma·n_full selects {} subjects; at least 4 are needed",
                self.n_selected()
            )));
        }
        if self.replicates == 0 {
            return Err(domain("replicates must be >= 1"));
        }
        if !(self.alpha_level > 0.0 && self.alpha_level < 1.0) {
            return Err(domain(format!("alpha_level must lie in (0, 1), got {}", self.alpha_level)));
        }
        Ok(())
    }

    pub fn n_selected(&self) -> usize {
        (self.gamma * self.n_full as f64).round() as usize
    }
}

/// Summary of one scenario over its replicates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimMetrics {
    pub mean_estimate: f64,
    pub bias: f64,
    pub rmse: f64,
    /// Median absolute error.
    pub mae: f64,
    /// Share of replicates rejecting `β_Y = 0` at `alpha_level`.
    pub rejection_rate: f64,
    pub ci_coverage: f64,
    pub mean_ci_length: f64,
    /// Standard deviation of the estimates across replicates.
    pub empirical_sd: f64,
    pub mean_se: f64,
    pub replicates_used: usize,
    pub replicates_dropped: usize,
}

impl SimMetrics {
    /// Monte Carlo standard error of the mean estimate.
    pub fn mc_se(&self) -> f64 {
        self.empirical_sd / (self.replicates_used as f64).sqrt()
    }
}

/// Draws residuals for one family.
#[derive(Debug, Clone, Copy)]
pub struct ResidualSampler {
    kind: SamplerKind,
}

#[derive(Debug, Clone, Copy)]
enum SamplerKind {
    Normal(Normal<f64>),
    ScaledT { scale: f64, t: StudentT<f64> },
    ShiftedLogNormal { sigma: f64, shift: f64 },
}

impl ResidualSampler {
    pub fn new(family: ResidualFamily, noise_variance: f64) -> Result<Self> {
        if !(noise_variance > 0.0 && noise_variance.is_finite()) {
            return Err(domain(format!("noise variance must be positive, got {noise_variance}")));
        }
        let kind = match family {
            ResidualFamily::Normal => SamplerKind::Normal(
                Normal::new(0.0, noise_variance.sqrt()).map_err(|e| domain(e.to_string()))?,
            ),
            ResidualFamily::ScaledT { df } => {
                if !(df > 2.0) {
                    return Err(domain(format!("scaled t needs df > 2, got {df}")));
                }
                SamplerKind::ScaledT {
                    scale: noise_variance.sqrt(),
                    t: StudentT::new(df).map_err(|e| domain(e.to_string()))?,
                }
            }
            ResidualFamily::ShiftedLogNormal => {
                let sigma2 = lognormal_shape_for_variance(noise_variance)?;
                SamplerKind::ShiftedLogNormal {
                    sigma: sigma2.sqrt(),
                    shift: (-sigma2).exp(),
                }
            }
        };
        Ok(Self { kind })
    }

    /// Log-scale variance σ*² of the shifted log-normal, if that is the family.
    pub fn lognormal_sigma2(&self) -> Option<f64> {
        match self.kind {
            SamplerKind::ShiftedLogNormal { sigma, .. } => Some(sigma * sigma),
            _ => None,
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match &self.kind {
            SamplerKind::Normal(n) => n.sample(rng),
            SamplerKind::ScaledT { scale, t } => scale * t.sample(rng),
            SamplerKind::ShiftedLogNormal { sigma, shift } => {
                let z: f64 = StandardNormal.sample(rng);
                (sigma * z).exp() - shift
            }
        }
    }
}

/// Log-scale variance `s` of LogNormal(0, s) whose variance
/// `(e^s − 1)·e^s` equals `variance`. The mode of that law is `e^{−s}`.
pub fn lognormal_shape_for_variance(variance: f64) -> Result<f64> {
    let g = |s: f64| (s.exp_m1() * s.exp()) - variance;
    let hi = expand_upper(g, 0.0, 1.0, 700.0)
        .map_err(|_| Error::Infeasible(format!("cannot bracket log-normal shape for variance {variance}")))?;
    brent(g, 0.0, hi, 1e-12)
}

/// One simulated cohort.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
}

fn stream_rng(seed: u64, replicate_index: u64, arm: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(replicate_index * STREAMS_PER_REPLICATE + arm);
    rng
}

/// Generates replicate `replicate_index` of a scenario.
pub fn generate_dataset(scenario: &SimScenario, replicate_index: u64) -> Result<Dataset> {
    let sampler = ResidualSampler::new(scenario.residual_family, scenario.noise_variance)?;
    generate_with(scenario, &sampler, replicate_index)
}

fn generate_with(scenario: &SimScenario, sampler: &ResidualSampler, replicate_index: u64) -> Result<Dataset> {
    let mut rng = stream_rng(scenario.seed, replicate_index, DATA_STREAM);
    let x_dist = Normal::new(scenario.x_mean, scenario.x_var.sqrt()).map_err(|e| domain(e.to_string()))?;
    let n = scenario.n_full;
    let x: Vec<f64> = (0..n).map(|_| x_dist.sample(&mut rng)).collect();
    let y: Vec<f64> = x
        .iter()
        .map(|&xi| scenario.alpha_y + scenario.beta_y * xi + sampler.sample(&mut rng))
        .collect();
    Ok(Dataset { x, y })
}

#[derive(Debug, Clone, Copy)]
struct ReplicateOutcome {
    estimate: f64,
    se: f64,
    ci_low: f64,
    ci_high: f64,
    p_value: f64,
}

fn subset_indices(scenario: &SimScenario, data: &Dataset, replicate_index: u64) -> Result<Vec<usize>> {
    match scenario.sampling {
        Sampling::Extreme => Ok(select_extremes(&data.y, scenario.gamma)?.indices()),
        Sampling::Random => {
            let mut rng = stream_rng(scenario.seed, replicate_index, SUBSAMPLE_STREAM);
            let mut idx = rand::seq::index::sample(&mut rng, scenario.n_full, scenario.n_selected()).into_vec();
            idx.sort_unstable();
            Ok(idx)
        }
    }
}

fn run_replicate(
    scenario: &SimScenario,
    sampler: &ResidualSampler,
    replicate_index: u64,
) -> Result<Option<ReplicateOutcome>> {
    let data = generate_with(scenario, sampler, replicate_index)?;
    let idx = subset_indices(scenario, &data, replicate_index)?;
    let xs: Vec<f64> = idx.iter().map(|&i| data.x[i]).collect();
    let ys: Vec<f64> = idx.iter().map(|&i| data.y[i]).collect();
    let confidence = 1.0 - scenario.alpha_level;
    let outcome = match scenario.estimator {
        Estimator::Ols => PairedSample::new(xs, ys)
            .and_then(|s| fit_simple(&s))
            .and_then(|fit| {
                let t = t_quantile(1.0 - scenario.alpha_level / 2.0, fit.df as f64)?;
                Ok(ReplicateOutcome {
                    estimate: fit.slope,
                    se: fit.se_slope,
                    ci_low: fit.slope - t * fit.se_slope,
                    ci_high: fit.slope + t * fit.se_slope,
                    p_value: fit.p_value,
                })
            }),
        Estimator::Odeb => FullResponseSummary::from_responses(&data.y).and_then(|full| {
            let subset = SelectedSubset::with_full(ys, xs, &full)?;
            let est = estimate(&subset, &full, confidence)?;
            Ok(ReplicateOutcome {
                estimate: est.beta_y,
                se: est.se_beta_y,
                ci_low: est.ci_low,
                ci_high: est.ci_high,
                p_value: est.p_value,
            })
        }),
    };
    match outcome {
        Ok(o) => Ok(Some(o)),
        Err(Error::DegenerateInput(_)) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Runs all replicates of a scenario and aggregates the metrics.
///
/// Replicates whose subset is degenerate are dropped and counted.
pub fn run_scenario(scenario: &SimScenario) -> Result<SimMetrics> {
    scenario.validate()?;
    let sampler = ResidualSampler::new(scenario.residual_family, scenario.noise_variance)?;
    let outcomes: Vec<Option<ReplicateOutcome>> = (0..scenario.replicates as u64)
        .into_par_iter()
        .map(|i| run_replicate(scenario, &sampler, i))
        .collect::<Result<_>>()?;
    let used: Vec<ReplicateOutcome> = outcomes.iter().flatten().copied().collect();
    let dropped = outcomes.len() - used.len();
    if used.is_empty() {
        return Err(Error::DegenerateInput(format!(
            "all {} replicates were degenerate",
            outcomes.len()
        )));
    }
    Ok(aggregate(scenario, &used, dropped))
}

fn aggregate(scenario: &SimScenario, used: &[ReplicateOutcome], dropped: usize) -> SimMetrics {
    let n = used.len() as f64;
    let truth = scenario.beta_y;
    let estimates: Vec<f64> = used.iter().map(|o| o.estimate).collect();
    let mean_estimate = mean(&estimates);
    let mse = sum(estimates.iter().map(|e| (e - truth) * (e - truth))) / n;
    let empirical_sd = if used.len() > 1 {
        (sum(estimates.iter().map(|e| (e - mean_estimate).powi(2))) / (n - 1.0)).sqrt()
    } else {
        0.0
    };
    let mut abs_err: Vec<f64> = estimates.iter().map(|e| (e - truth).abs()).collect();
    abs_err.sort_by(f64::total_cmp);
    let mid = abs_err.len() / 2;
    let mae = if abs_err.len() % 2 == 1 {
        abs_err[mid]
    } else {
        0.5 * (abs_err[mid - 1] + abs_err[mid])
    };
    let rejections = used.iter().filter(|o| o.p_value < scenario.alpha_level).count();
    let covered = used
        .iter()
        .filter(|o| o.ci_low <= truth && truth <= o.ci_high)
        .count();
    SimMetrics {
        mean_estimate,
        bias: mean_estimate - truth,
        rmse: mse.sqrt(),
        mae,
        rejection_rate: rejections as f64 / n,
        ci_coverage: covered as f64 / n,
        mean_ci_length: sum(used.iter().map(|o| o.ci_high - o.ci_low)) / n,
        empirical_sd,
        mean_se: sum(used.iter().map(|o| o.se)) / n,
        replicates_used: used.len(),
        replicates_dropped: dropped,
    }
}

/// One row of a grid run; failures are reported per row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridRow {
    pub scenario: SimScenario,
    pub metrics: std::result::Result<SimMetrics, String>,
}

/// Runs scenarios concurrently and returns rows in input order.
pub fn run_grid(scenarios: &[SimScenario]) -> Vec<GridRow> {
    scenarios
        .par_iter()
        .map(|s| GridRow {
            scenario: s.clone(),
            metrics: run_scenario(s).map_err(|e| e.to_string()),
        })
        .collect()
}

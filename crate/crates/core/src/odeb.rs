//! Forward-regression inference from a reverse regression on the extreme
//! subset.
//!
//! Under joint normality, `X | Y` follows the linear model
//! `X = α_X + β_X·Y + ε_X`, and that conditional law is untouched by selecting
//! subjects on `Y`. Fitting it on the tested subset and combining it with the
//! mean `μ̃_Y` and variance `σ̃²_Y` of the complete response vector recovers the
//! forward model `Y = α_Y + β_Y·X + ε_Y`:
//!
//! ```text
//! β_Y      = β_X σ²_Y / (σ²_εX + β_X² σ²_Y)
//! α_Y      = (σ²_εX μ_Y − α_X β_X σ²_Y) / (σ²_εX + β_X² σ²_Y)
//! σ²_εY    = σ²_Y σ²_εX / (σ²_εX + β_X² σ²_Y)
//! ```
//!
//! `H0: β_Y = 0` is the same hypothesis as `H0: β_X = 0`, so the reverse-fit
//! slope test is reported unchanged. The standard error of `β̂_Y` comes from
//! the delta method; `α̂_Y` is a point estimate only.

use serde::{Deserialize, Serialize};

use crate::dist::t_quantile;
use crate::error::{degenerate, domain, Error, Result};
use crate::regress::{fit_simple, qq_points, FitResult, PairedSample, QqPoint};
use crate::sum::{mean, sample_variance, sum};

/// Sufficient statistics of the fully observed response vector.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FullResponseSummary {
    n_full: usize,
    mean_y: f64,
    var_y: f64,
}

impl FullResponseSummary {
    pub fn new(n_full: usize, mean_y: f64, var_y: f64) -> Result<Self> {
        if n_full < 3 {
            return Err(Error::InsufficientData(format!(
                "full sample needs at least 3 responses, got {n_full}"
            )));
        }
        if !mean_y.is_finite() {
            return Err(domain(format!("response mean must be finite, got {mean_y}")));
        }
        if !(var_y > 0.0 && var_y.is_finite()) {
            return Err(degenerate(format!(
                "response variance must be positive, got {var_y}"
            )));
        }
        Ok(Self {
            n_full,
            mean_y,
            var_y,
        })
    }

    /// Mean and `n − 1` variance of the complete response vector.
    pub fn from_responses(responses: &[f64]) -> Result<Self> {
        if responses.iter().any(|v| !v.is_finite()) {
            return Err(domain("responses must be finite"));
        }
        if responses.len() < 3 {
            return Err(Error::InsufficientData(format!(
                "full sample needs at least 3 responses, got {}",
                responses.len()
            )));
        }
        Self::new(responses.len(), mean(responses), sample_variance(responses))
    }

    pub fn n_full(&self) -> usize {
        self.n_full
    }

    pub fn mean_y(&self) -> f64 {
        self.mean_y
    }

    pub fn var_y(&self) -> f64 {
        self.var_y
    }
}

/// The biomarker-tested subset, stored in reverse orientation
/// (predictor = response `Y`, response = biomarker `X`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectedSubset {
    pairs: PairedSample,
    gamma: f64,
}

impl SelectedSubset {
    pub fn new(responses: Vec<f64>, biomarker: Vec<f64>, gamma: f64) -> Result<Self> {
        if !(gamma > 0.0 && gamma <= 1.0) {
            return Err(domain(format!("sampling fraction must lie in (0, 1], got {gamma}")));
        }
        Ok(Self {
            pairs: PairedSample::new(responses, biomarker)?,
            gamma,
        })
    }

    /// Subset whose sampling fraction is `n_S / n_F`.
    pub fn with_full(responses: Vec<f64>, biomarker: Vec<f64>, full: &FullResponseSummary) -> Result<Self> {
        let gamma = responses.len() as f64 / full.n_full() as f64;
        Self::new(responses, biomarker, gamma)
    }

    pub fn pairs(&self) -> &PairedSample {
        &self.pairs
    }

    pub fn responses(&self) -> &[f64] {
        self.pairs.predictor()
    }

    pub fn biomarker(&self) -> &[f64] {
        self.pairs.response()
    }

    pub fn n_selected(&self) -> usize {
        self.pairs.len()
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }
}

/// Reverse-model parameters `(β_X, α_X, σ²_εX)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReverseParams {
    pub beta_x: f64,
    pub alpha_x: f64,
    pub sigma2_eps_x: f64,
}

/// Forward-model parameters `(β_Y, α_Y, σ²_εY)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ForwardParams {
    pub beta_y: f64,
    pub alpha_y: f64,
    pub sigma2_eps_y: f64,
}

/// Maps reverse-model parameters and the response moments to the forward model.
pub fn convert_reverse_to_forward(
    reverse: &ReverseParams,
    mean_y: f64,
    var_y: f64,
) -> Result<ForwardParams> {
    let ReverseParams {
        beta_x,
        alpha_x,
        sigma2_eps_x,
    } = *reverse;
    if !(var_y > 0.0) {
        return Err(domain(format!("response variance must be positive, got {var_y}")));
    }
    if !(sigma2_eps_x >= 0.0) {
        return Err(domain(format!(
            "reverse residual variance must be >= 0, got {sigma2_eps_x}"
        )));
    }
    let denom = sigma2_eps_x + beta_x * beta_x * var_y;
    if !(denom > 0.0) {
        return Err(degenerate(
            "reverse fit is exact with zero slope; forward slope is undefined",
        ));
    }
    Ok(ForwardParams {
        beta_y: beta_x * var_y / denom,
        alpha_y: (sigma2_eps_x * mean_y - alpha_x * beta_x * var_y) / denom,
        sigma2_eps_y: var_y * sigma2_eps_x / denom,
    })
}

/// Delta-method standard error of `β̂_Y`.
///
/// With `k = σ̂²_εX/σ̃²_Y + β̂_X²`:
///
/// ```text
/// se² = [ (σ̂²_εX/σ̃²_Y − β̂_X²)² se(β̂_X)²
///         + (2 β̂_X² σ̂⁴_εX / σ̃⁴_Y)(1/(n_S − 2) + 1/(n_F − 1)) ] / k⁴
/// ```
///
/// The second term carries the chi-square variances of `σ̂²_εX` and `σ̃²_Y`.
pub fn se_beta_y(
    beta_x_hat: f64,
    se_beta_x: f64,
    sigma2_eps_x_hat: f64,
    var_y_tilde: f64,
    n_selected: usize,
    n_full: usize,
) -> Result<f64> {
    if n_selected < 3 {
        return Err(Error::InsufficientData(format!(
            "need n_S >= 3, got {n_selected}"
        )));
    }
    if n_full < 2 {
        return Err(Error::InsufficientData(format!("need n_F >= 2, got {n_full}")));
    }
    if !(var_y_tilde > 0.0) {
        return Err(domain(format!("response variance must be positive, got {var_y_tilde}")));
    }
    if !(se_beta_x >= 0.0) || !(sigma2_eps_x_hat >= 0.0) {
        return Err(domain("standard error and residual variance must be >= 0"));
    }
    let ratio = sigma2_eps_x_hat / var_y_tilde;
    let b2 = beta_x_hat * beta_x_hat;
    let k = ratio + b2;
    if !(k > 0.0) {
        return Err(degenerate("delta-method denominator is zero"));
    }
    let slope_term = (ratio - b2).powi(2) * se_beta_x * se_beta_x;
    let variance_term = 2.0 * b2 * ratio * ratio
        * (1.0 / (n_selected as f64 - 2.0) + 1.0 / (n_full as f64 - 1.0));
    Ok(((slope_term + variance_term) / k.powi(4)).sqrt())
}

/// Forward-regression inference for one biomarker.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OdebEstimate {
    pub beta_y: f64,
    /// Point estimate only; no interval is derived for the intercept.
    pub alpha_y: f64,
    pub sigma2_eps_y: f64,
    pub se_beta_y: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub confidence_level: f64,
    /// Two-sided p-value of `H0: β_Y = 0`, taken from the reverse-fit slope test.
    pub p_value: f64,
    pub n_selected: usize,
    pub n_full: usize,
    pub reverse_fit: FitResult,
}

/// Reverse fit, conversion, delta-method SE, and a t interval with
/// `n_S − 2` degrees of freedom.
pub fn estimate(
    subset: &SelectedSubset,
    full: &FullResponseSummary,
    confidence_level: f64,
) -> Result<OdebEstimate> {
    if !(confidence_level > 0.0 && confidence_level < 1.0) {
        return Err(domain(format!(
            "confidence level must lie in (0, 1), got {confidence_level}"
        )));
    }
    let n_s = subset.n_selected();
    if n_s < 4 {
        return Err(Error::InsufficientData(format!(
            "need at least 4 biomarker-tested subjects, got {n_s}"
        )));
    }
    if n_s > full.n_full() {
        return Err(domain(format!(
            "subset size {n_s} exceeds full sample size {}",
            full.n_full()
        )));
    }
    let reverse_fit = fit_simple(subset.pairs())?;
    let reverse = ReverseParams {
        beta_x: reverse_fit.slope,
        alpha_x: reverse_fit.intercept,
        sigma2_eps_x: reverse_fit.residual_variance,
    };
    let forward = convert_reverse_to_forward(&reverse, full.mean_y(), full.var_y())?;
    let se = se_beta_y(
        reverse.beta_x,
        reverse_fit.se_slope,
        reverse.sigma2_eps_x,
        full.var_y(),
        n_s,
        full.n_full(),
    )?;
    let t = t_quantile(1.0 - (1.0 - confidence_level) / 2.0, (n_s - 2) as f64)?;
    Ok(OdebEstimate {
        beta_y: forward.beta_y,
        alpha_y: forward.alpha_y,
        sigma2_eps_y: forward.sigma2_eps_y,
        se_beta_y: se,
        ci_low: forward.beta_y - t * se,
        ci_high: forward.beta_y + t * se,
        confidence_level,
        p_value: reverse_fit.p_value,
        n_selected: n_s,
        n_full: full.n_full(),
        reverse_fit,
    })
}

/// Reverse-regression slope t statistic and its two-sided p-value
/// (`df = n_S − 2`), which also tests `H0: β_Y = 0`.
pub fn test_association(subset: &SelectedSubset) -> Result<(f64, f64)> {
    let fit = fit_simple(subset.pairs())?;
    Ok((fit.t_stat, fit.p_value))
}

/// Sample skewness `g1` and excess kurtosis `g2` (moment estimators).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShapeSummary {
    pub skewness: f64,
    pub excess_kurtosis: f64,
}

impl ShapeSummary {
    pub fn of(values: &[f64]) -> Self {
        let m = mean(values);
        let n = values.len() as f64;
        let m2 = sum(values.iter().map(|v| (v - m).powi(2))) / n;
        let m3 = sum(values.iter().map(|v| (v - m).powi(3))) / n;
        let m4 = sum(values.iter().map(|v| (v - m).powi(4))) / n;
        if m2 > 0.0 {
            Self {
                skewness: m3 / m2.powf(1.5),
                excess_kurtosis: m4 / (m2 * m2) - 3.0,
            }
        } else {
            Self {
                skewness: 0.0,
                excess_kurtosis: 0.0,
            }
        }
    }
}

/// Data for checking the two model assumptions: normality of `Y` (from the
/// full responses) and normality of `X | Y` (from the reverse-fit residuals).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelCheck {
    pub response_qq: Vec<QqPoint>,
    pub residual_qq: Vec<QqPoint>,
    pub response_shape: ShapeSummary,
    pub residual_shape: ShapeSummary,
}

pub fn check_model(subset: &SelectedSubset, full_responses: &[f64]) -> Result<ModelCheck> {
    if full_responses.len() < subset.n_selected() {
        return Err(domain(format!(
            "{} full responses but {} selected pairs",
            full_responses.len(),
            subset.n_selected()
        )));
    }
    let fit = fit_simple(subset.pairs())?;
    Ok(ModelCheck {
        response_qq: qq_points(full_responses)?,
        residual_qq: qq_points(&fit.residuals)?,
        response_shape: ShapeSummary::of(full_responses),
        residual_shape: ShapeSummary::of(&fit.residuals),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn no_association_returns_marginal_moments() {
        let rev = ReverseParams {
            beta_x: 0.0,
            alpha_x: 1.3,
            sigma2_eps_x: 4.0,
        };
        let fwd = convert_reverse_to_forward(&rev, 2.5, 9.0).unwrap();
        assert_eq!(fwd.beta_y, 0.0);
        assert_eq!(fwd.alpha_y, 2.5);
        assert_eq!(fwd.sigma2_eps_y, 9.0);
    }

    #[test]
    fn bivariate_normal_example() {
        // ρ = 0.6, σ_X = 2, σ_Y = 5, μ_X = 1, μ_Y = 3:
        // β_X = ρσ_X/σ_Y = 0.24, α_X = μ_X − β_X μ_Y = 0.28, σ²_εX = σ²_X(1−ρ²) = 2.56
        // β_Y = ρσ_Y/σ_X = 1.5, α_Y = μ_Y − β_Y μ_X = 1.5, σ²_εY = σ²_Y(1−ρ²) = 16
        let rev = ReverseParams {
            beta_x: 0.24,
            alpha_x: 0.28,
            sigma2_eps_x: 2.56,
        };
        let fwd = convert_reverse_to_forward(&rev, 3.0, 25.0).unwrap();
        assert_abs_diff_eq!(fwd.beta_y, 1.5, epsilon = 1e-14);
        assert_abs_diff_eq!(fwd.alpha_y, 1.5, epsilon = 1e-14);
        assert_abs_diff_eq!(fwd.sigma2_eps_y, 16.0, epsilon = 1e-12);
    }

    #[test]
    fn conversion_rejects_degenerate_denominator() {
        let rev = ReverseParams {
            beta_x: 0.0,
            alpha_x: 0.0,
            sigma2_eps_x: 0.0,
        };
        assert!(matches!(
            convert_reverse_to_forward(&rev, 0.0, 1.0),
            Err(Error::DegenerateInput(_))
        ));
        assert!(convert_reverse_to_forward(&ReverseParams { beta_x: 1.0, alpha_x: 0.0, sigma2_eps_x: 1.0 }, 0.0, 0.0).is_err());
    }

    #[test]
    fn se_collapses_at_zero_slope() {
        let se = se_beta_y(0.0, 0.1, 2.0, 4.0, 20, 200).unwrap();
        assert_abs_diff_eq!(se, 0.2, epsilon = 1e-15);
    }

    #[test]
    fn se_decreases_with_full_sample_size() {
        let mut prev = f64::INFINITY;
        for n_full in [30usize, 50, 100, 400, 5000] {
            let se = se_beta_y(0.3, 0.05, 1.2, 3.0, 20, n_full).unwrap();
            assert!(se < prev);
            prev = se;
        }
        assert!(se_beta_y(0.0, 0.1, 0.0, 1.0, 20, 200).is_err());
        assert!(se_beta_y(0.1, 0.1, 1.0, 1.0, 2, 200).is_err());
    }

    #[test]
    fn se_matches_finite_difference_delta_method() {
        // Independent route: numerical gradient of the β_Y map times the
        // stated variances of (β̂_X, σ̂²_εX, σ̃²_Y).
        let (bx, se_bx, s2, vy, ns, nf) = (0.35, 0.07, 1.8, 2.6, 30usize, 250usize);
        let f = |bx: f64, s2: f64, vy: f64| bx * vy / (s2 + bx * bx * vy);
        let h = 1e-6;
        let d_bx = (f(bx + h, s2, vy) - f(bx - h, s2, vy)) / (2.0 * h);
        let d_s2 = (f(bx, s2 + h, vy) - f(bx, s2 - h, vy)) / (2.0 * h);
        let d_vy = (f(bx, s2, vy + h) - f(bx, s2, vy - h)) / (2.0 * h);
        let var = d_bx * d_bx * se_bx * se_bx
            + d_s2 * d_s2 * 2.0 * s2 * s2 / (ns as f64 - 2.0)
            + d_vy * d_vy * 2.0 * vy * vy / (nf as f64 - 1.0);
        let se = se_beta_y(bx, se_bx, s2, vy, ns, nf).unwrap();
        assert_abs_diff_eq!(se, var.sqrt(), epsilon = 1e-8);
    }

    #[test]
    fn three_point_association_test() {
        // (Y, X) = (0,1), (1,1), (2,2): slope 0.5, SSE 1/6, Syy 2 → t = √3
        let subset = SelectedSubset::new(vec![0.0, 1.0, 2.0], vec![1.0, 1.0, 2.0], 1.0).unwrap();
        let (t, p) = test_association(&subset).unwrap();
        assert_abs_diff_eq!(t, 3f64.sqrt(), epsilon = 1e-12);
        assert_abs_diff_eq!(p, 1.0 / 3.0, epsilon = 1e-12);
    }

    #[test]
    fn zero_sample_slope_gives_unit_p() {
        let subset = SelectedSubset::new(vec![-2.0, -1.0, 1.0, 2.0], vec![1.0, 3.0, 3.0, 1.0], 0.5).unwrap();
        let (t, p) = test_association(&subset).unwrap();
        assert_eq!(t, 0.0);
        assert_abs_diff_eq!(p, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn estimate_error_paths() {
        let full = FullResponseSummary::new(100, 0.0, 1.0).unwrap();
        let flat = SelectedSubset::new(vec![2.0; 6], vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0], 0.06).unwrap();
        assert!(matches!(estimate(&flat, &full, 0.95), Err(Error::DegenerateInput(_))));
        let tiny = SelectedSubset::new(vec![-2.0, 0.0, 2.0], vec![1.0, 2.0, 2.5], 0.03).unwrap();
        assert!(matches!(estimate(&tiny, &full, 0.95), Err(Error::InsufficientData(_))));
        let ok = SelectedSubset::new(vec![-2.0, -1.5, 1.4, 2.0], vec![1.0, 1.3, 2.2, 2.5], 0.04).unwrap();
        assert!(estimate(&ok, &full, 1.0).is_err());
        let small_full = FullResponseSummary::new(3, 0.0, 1.0).unwrap();
        assert!(estimate(&ok, &small_full, 0.95).is_err());
        assert!(FullResponseSummary::new(10, 0.0, 0.0).is_err());
        assert!(FullResponseSummary::new(2, 0.0, 1.0).is_err());
    }

    #[test]
    fn estimate_invariants_on_small_example() {
        let full = FullResponseSummary::new(60, 1.0, 4.0).unwrap();
        let subset = SelectedSubset::new(
            vec![-3.0, -2.6, -2.2, 4.1, 4.5, 5.2],
            vec![0.2, -0.4, 0.5, 1.9, 1.1, 2.4],
            0.1,
        )
        .unwrap();
        let est = estimate(&subset, &full, 0.95).unwrap();
        assert!(est.ci_low <= est.beta_y && est.beta_y <= est.ci_high);
        assert_eq!(est.p_value, est.reverse_fit.p_value);
        assert_eq!(est.beta_y.signum(), est.reverse_fit.slope.signum());
        let bound = full.var_y().sqrt() / (2.0 * est.reverse_fit.residual_variance.sqrt());
        assert!(est.beta_y.abs() <= bound);
    }

    #[test]
    fn exact_reverse_fit_gives_zero_residual_series() {
        let subset = SelectedSubset::new(vec![-2.0, -1.0, 1.0, 2.0], vec![1.0, 2.0, 4.0, 5.0], 0.4).unwrap();
        let full = [-2.0, -1.0, -0.5, 0.0, 0.3, 0.5, 0.7, 1.0, 2.0, 1.5];
        let check = check_model(&subset, &full).unwrap();
        assert!(check.residual_qq.iter().all(|p| p.observed.abs() < 1e-12));
        assert_eq!(check.response_qq.len(), full.len());
    }

    #[test]
    fn shape_of_symmetric_sample() {
        let s = ShapeSummary::of(&[-2.0, -1.0, 0.0, 1.0, 2.0]);
        assert_abs_diff_eq!(s.skewness, 0.0, epsilon = 1e-15);
        // m2 = 2, m4 = 6.8 → 6.8/4 − 3
        assert_abs_diff_eq!(s.excess_kurtosis, -1.3, epsilon = 1e-14);
    }
}
